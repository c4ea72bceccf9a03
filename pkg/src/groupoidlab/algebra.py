"""The convolution *-algebra of a finite groupoid.

On a finite discrete groupoid C_c(G) is already complete in the reduced norm,
so it *is* the reduced C*-algebra. Algebraic operations are exact over
Gaussian rationals; floating point only enters through :func:`reduced_norm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ParentMismatch
from .groupoid import ArrowSet, FiniteGroupoid
from .scalars import ONE, ZERO, QQi

__all__ = [
    "AlgebraElement", "RegularBlock", "delta", "zero", "unit_indicator", "element",
    "convolve", "involution", "regular_representation", "exact_block", "reduced_norm",
    "sup_norm", "l1_norm", "evaluate_j", "open_support", "is_normalizer", "is_intertwiner",
    "diagonal_basis",
]


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A function on the arrows of ``parent``; ``coeffs[i]`` is the value at ``parent.arrows[i]``."""

    parent: FiniteGroupoid
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.parent):
            raise ValueError("coefficient vector does not match the arrow set")

    def __getitem__(self, arrow: str) -> QQi:
        return self.coeffs[self.parent.index(arrow)]

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coeffs == other.coeffs and _same_parent(self.parent, other.parent)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*{a}" for a, c in zip(self.parent.arrows, self.coeffs) if c]
        return f"AlgebraElement({' + '.join(terms) or '0'})"

    def nonzero(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def as_dict(self) -> dict[str, QQi]:
        return {self.parent.arrows[i]: self.coeffs[i] for i in self.nonzero()}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        _check_parent(self, other)
        return AlgebraElement(self.parent, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        _check_parent(self, other)
        return AlgebraElement(self.parent, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return AlgebraElement(self.parent, tuple(-a for a in self.coeffs))

    def scale(self, c) -> AlgebraElement:
        c = QQi.coerce(c)
        return AlgebraElement(self.parent, tuple(c * a if a else ZERO for a in self.coeffs))

    __rmul__ = scale

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return self.scale(other)

    def __matmul__(self, other):
        return convolve(self, other)

    @property
    def star(self) -> AlgebraElement:
        return involution(self)

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)


@dataclass(frozen=True)
class RegularBlock:
    unit: str
    basis: tuple[str, ...]
    matrix: np.ndarray


def _same_parent(g, h) -> bool:
    return g is h or g == h


def _check_parent(f: AlgebraElement, g: AlgebraElement):
    if not _same_parent(f.parent, g.parent):
        raise ParentMismatch(f"{f.parent.name} vs {g.parent.name}")


# -- constructors ------------------------------------------------------------

def zero(g: FiniteGroupoid) -> AlgebraElement:
    return AlgebraElement(g, (ZERO,) * len(g))


def element(g: FiniteGroupoid, values: Mapping[str, object]) -> AlgebraElement:
    coeffs = [ZERO] * len(g)
    for a, c in values.items():
        coeffs[g.index(a)] = coeffs[g.index(a)] + QQi.coerce(c)
    return AlgebraElement(g, tuple(coeffs))


def delta(g: FiniteGroupoid, arrow: str, c=ONE) -> AlgebraElement:
    return element(g, {arrow: c})


def unit_indicator(g: FiniteGroupoid, units: Iterable[str] | None = None) -> AlgebraElement:
    """Indicator function of a set of units (all of them by default)."""
    return element(g, {u: ONE for u in (g.units if units is None else units)})


def diagonal_basis(g: FiniteGroupoid) -> list[AlgebraElement]:
    """The unit deltas, a basis of the diagonal subalgebra D."""
    return [delta(g, u) for u in g.units]


# -- *-algebra structure -----------------------------------------------------

def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """(f*g)(c) = sum of f(a) g(b) over all factorisations c = ab."""
    _check_parent(f, g)
    G = f.parent
    out = [ZERO] * len(G)
    gc = g.coeffs
    comp = G.comp_idx
    src = G.src_idx
    for a in f.nonzero():
        fa = f.coeffs[a]
        row = comp[a]
        for b in G.arrows_into(int(src[a])):
            gb = gc[b]
            if gb:
                c = row[b]
                out[c] = out[c] + fa * gb
    return AlgebraElement(G, tuple(out))


def involution(f: AlgebraElement) -> AlgebraElement:
    """f*(c) = conj(f(c^{-1}))."""
    G = f.parent
    inv = G.inv_idx
    return AlgebraElement(G, tuple(f.coeffs[inv[i]].conjugate() for i in range(len(G))))


# -- regular representation --------------------------------------------------

def exact_block(f: AlgebraElement, unit: str) -> tuple[tuple[str, ...], list[list[QQi]]]:
    """Exact matrix of the left regular representation at ``unit`` on the fibre G_unit.

    Column ``a`` is the image of delta_a: sum over b with d(b) = r(a) of f(b) delta_{ba}.
    """
    G = f.parent
    x = G.index(unit)
    basis = [int(i) for i in G.fibre_src(x)]
    pos = {a: k for k, a in enumerate(basis)}
    m = [[ZERO] * len(basis) for _ in basis]
    for col, a in enumerate(basis):
        for b in G.fibre_src(int(G.tgt_idx[a])):
            fb = f.coeffs[b]
            if fb:
                row = pos[int(G.comp_idx[b, a])]
                m[row][col] = m[row][col] + fb
    return tuple(G.arrows[a] for a in basis), m


def regular_representation(f: AlgebraElement) -> list[RegularBlock]:
    blocks = []
    for u in f.parent.units:
        basis, m = exact_block(f, u)
        mat = np.array([[complex(c) for c in row] for row in m], dtype=complex).reshape(
            len(basis), len(basis))
        blocks.append(RegularBlock(u, basis, mat))
    return blocks


def reduced_norm(f: AlgebraElement) -> float:
    """Maximum over units of the largest singular value of the regular-representation block."""
    best = 0.0
    for block in regular_representation(f):
        if block.matrix.size:
            best = max(best, float(np.linalg.norm(block.matrix, 2)))
    return best


def sup_norm(f: AlgebraElement) -> float:
    return max((abs(c) for c in f.coeffs), default=0.0)


def l1_norm(f: AlgebraElement) -> float:
    return float(sum(abs(c) for c in f.coeffs))


def evaluate_j(f: AlgebraElement, arrow: str) -> QQi:
    """<delta_arrow | lambda_{d(arrow)}(f) delta_{d(arrow)}>, read off the exact block."""
    G = f.parent
    x = G.src(arrow)
    basis, m = exact_block(f, x)
    return m[basis.index(arrow)][basis.index(x)]


def open_support(f: AlgebraElement) -> ArrowSet:
    return ArrowSet(f.parent, frozenset(f.parent.arrows[i] for i in f.nonzero()))


# -- normalizers and intertwiners -------------------------------------------

def _on_units(f: AlgebraElement) -> bool:
    src = f.parent.src_idx
    return all(src[i] == i for i in f.nonzero())


def is_normalizer(n: AlgebraElement) -> bool:
    """n d n* and n* d n lie in D for every unit delta d (enough by linearity)."""
    ns = involution(n)
    for d in diagonal_basis(n.parent):
        if not _on_units(convolve(convolve(n, d), ns)):
            return False
        if not _on_units(convolve(convolve(ns, d), n)):
            return False
    return True


def is_intertwiner(n: AlgebraElement) -> bool:
    """nD = Dn as subspaces."""
    from .subspace import span_reduce

    ds = diagonal_basis(n.parent)
    return span_reduce([convolve(n, d) for d in ds]) == span_reduce([convolve(d, n) for d in ds])
