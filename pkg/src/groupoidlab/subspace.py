"""Exact subspaces of the convolution algebra in reduced row echelon form.

Rows are coefficient vectors indexed by the parent's sorted arrow ids, so the
reduced echelon basis is canonical and subspace equality is tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import AlgebraElement, convolve
from .errors import ParentMismatch
from .groupoid import FiniteGroupoid
from .scalars import ONE, ZERO, QQi

__all__ = ["Echelon", "Subspace", "span_reduce", "zero_subspace", "subspace_contains",
           "subspace_product", "subspace_sum", "nullspace"]


class Echelon:
    """Incrementally maintained reduced row echelon form over Gaussian rationals."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list] = {}  # pivot column -> row with 1 at pivot

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Sequence[QQi]) -> list:
        v = list(vec)
        for p, row in self.rows.items():
            c = v[p]
            if c:
                for j in range(p, self.ncols):
                    if row[j]:
                        v[j] = v[j] - c * row[j]
        return v

    def add(self, vec: Sequence[QQi]) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        p = next((j for j, c in enumerate(v) if c), None)
        if p is None:
            return False
        lead = v[p]
        if lead != ONE:
            v = [c / lead if c else ZERO for c in v]
        for q, row in self.rows.items():
            c = row[p]
            if c:
                for j in range(p, self.ncols):
                    if v[j]:
                        row[j] = row[j] - c * v[j]
        self.rows[p] = v
        return True

    def contains(self, vec: Sequence[QQi]) -> bool:
        return not any(self.reduce(vec))

    def basis(self) -> list[tuple]:
        return [tuple(self.rows[p]) for p in sorted(self.rows)]


@dataclass(frozen=True, eq=False)
class Subspace:
    parent: FiniteGroupoid
    basis: tuple[AlgebraElement, ...]

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.parent is other.parent or self.parent == other.parent) and \
            [b.coeffs for b in self.basis] == [b.coeffs for b in other.basis]

    def __hash__(self):
        return hash(tuple(b.coeffs for b in self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={list(self.basis)})"

    def __contains__(self, f: AlgebraElement) -> bool:
        return subspace_contains(self, f)

    def pivots(self) -> list[str]:
        return [self.parent.arrows[b.nonzero()[0]] for b in self.basis]

    def echelon(self) -> Echelon:
        e = Echelon(len(self.parent))
        for b in self.basis:
            e.rows[b.nonzero()[0]] = list(b.coeffs)
        return e

    def issubspace(self, other: Subspace) -> bool:
        e = other.echelon()
        return all(e.contains(b.coeffs) for b in self.basis)


def _from_echelon(g: FiniteGroupoid, e: Echelon) -> Subspace:
    return Subspace(g, tuple(AlgebraElement(g, row) for row in e.basis()))


def zero_subspace(g: FiniteGroupoid) -> Subspace:
    return Subspace(g, ())


def span_reduce(generators: Iterable[AlgebraElement], parent: FiniteGroupoid | None = None
                ) -> Subspace:
    """Canonical echelon basis of the linear span of ``generators``."""
    gens = list(generators)
    if parent is None:
        if not gens:
            raise ValueError("span_reduce of no generators needs an explicit parent")
        parent = gens[0].parent
    e = Echelon(len(parent))
    for f in gens:
        if not (f.parent is parent or f.parent == parent):
            raise ParentMismatch(f"{f.parent.name} vs {parent.name}")
        e.add(f.coeffs)
    return _from_echelon(parent, e)


def subspace_contains(m: Subspace, f: AlgebraElement) -> bool:
    if not (f.parent is m.parent or f.parent == m.parent):
        raise ParentMismatch(f"{f.parent.name} vs {m.parent.name}")
    return m.echelon().contains(f.coeffs)


def subspace_product(m: Subspace, n: Subspace) -> Subspace:
    """Span of all products x*y with x in M and y in N."""
    if not (m.parent is n.parent or m.parent == n.parent):
        raise ParentMismatch(f"{m.parent.name} vs {n.parent.name}")
    return span_reduce([convolve(x, y) for x in m.basis for y in n.basis], parent=m.parent)


def subspace_sum(*spaces: Subspace) -> Subspace:
    parent = spaces[0].parent
    return span_reduce([b for s in spaces for b in s.basis], parent=parent)


def nullspace(rows: Sequence[Sequence[QQi]], ncols: int) -> list[list[QQi]]:
    """Basis of {v : A v = 0} for the matrix with the given rows, exactly."""
    e = Echelon(ncols)
    for r in rows:
        e.add([QQi.coerce(c) for c in r])
    pivots = sorted(e.rows)
    free = [j for j in range(ncols) if j not in e.rows]
    out = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for p in pivots:
            c = e.rows[p][f]
            if c:
                v[p] = -c
        out.append(v)
    return out
