"""Normalizer-generated submodules, slices, the bisection inverse semigroup, and the
subalgebra/subgroupoid correspondence, all decided by exact linear algebra."""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .algebra import (AlgebraElement, convolve, delta, diagonal_basis, element, involution,
                      is_normalizer, open_support, unit_indicator)
from .errors import (CounterexampleFound, EffectivenessWarning, NotABisection, NotANormalizer,
                     NotASubalgebra, NotNormalizerSpanned)
from .groupoid import ArrowSet, FiniteGroupoid, generate_subgroupoid, is_bisection, structure_report
from .sampling import child_rng, random_bisection, random_element, random_scalar, random_subset
from .scalars import ONE, ZERO
from .subspace import Echelon, Subspace, nullspace, span_reduce, subspace_product, zero_subspace

__all__ = [
    "left_module_closure", "open_set_of_subspace", "module_of_open_set", "is_left_module",
    "is_bimodule", "partition_into_bisections", "verify_module_correspondence",
    "cutoff_function", "normalizer_cutoff", "is_slice", "bis_product", "bis_inverse",
    "enumerate_bisections", "verify_psi_isomorphism", "commutant_of_diagonal",
    "diagonal_subspace", "generate_subalgebra", "is_subalgebra", "algebra_to_subgroupoid",
]


def _is_effective(g: FiniteGroupoid) -> bool:
    return structure_report(g).is_effective


def diagonal_subspace(g: FiniteGroupoid) -> Subspace:
    return module_of_open_set(g.unit_set())


# ---------------------------------------------------------------------------
# modules and open sets
# ---------------------------------------------------------------------------

def left_module_closure(generators: Iterable[AlgebraElement],
                        parent: FiniteGroupoid | None = None) -> Subspace:
    """Smallest subspace containing ``generators`` and closed under left multiplication by D."""
    gens = list(generators)
    if parent is None:
        if not gens:
            raise ValueError("need a parent for an empty generator list")
        parent = gens[0].parent
    ds = diagonal_basis(parent)
    e = Echelon(len(parent))
    queue = []
    for f in gens:
        if e.add(f.coeffs):
            queue.append(f)
    while queue:
        f = queue.pop()
        for d in ds:
            h = convolve(d, f)
            if e.add(h.coeffs):
                queue.append(h)
    return Subspace(parent, tuple(AlgebraElement(parent, r) for r in e.basis()))


def _module_closed(m: Subspace, left: bool, right: bool) -> bool:
    e = m.echelon()
    for d in diagonal_basis(m.parent):
        for b in m.basis:
            if left and not e.contains(convolve(d, b).coeffs):
                return False
            if right and not e.contains(convolve(b, d).coeffs):
                return False
    return True


def is_left_module(m: Subspace) -> bool:
    return _module_closed(m, True, False)


def is_bimodule(m: Subspace) -> bool:
    return _module_closed(m, True, True)


def open_set_of_subspace(m: Subspace) -> ArrowSet:
    """Arrows where some element of M is nonzero (union of the basis supports)."""
    members: set[str] = set()
    for b in m.basis:
        members |= open_support(b).members
    return ArrowSet(m.parent, frozenset(members))


def module_of_open_set(u: ArrowSet) -> Subspace:
    """span{delta_a : a in U}; the delta basis is already in reduced echelon form."""
    g = u.parent
    return Subspace(g, tuple(delta(g, a) for a in sorted(u.members, key=g.index)))


def partition_into_bisections(u: ArrowSet) -> list[ArrowSet]:
    """Greedy partition of an arrow set into bisections (arrow order is the parent's)."""
    g = u.parent
    parts: list[tuple[set, set, list]] = []
    for i in u.indices():
        s, t = int(g.src_idx[i]), int(g.tgt_idx[i])
        for used_s, used_t, members in parts:
            if s not in used_s and t not in used_t:
                used_s.add(s)
                used_t.add(t)
                members.append(g.arrows[i])
                break
        else:
            parts.append(({s}, {t}, [g.arrows[i]]))
    return [ArrowSet(g, frozenset(m)) for _, _, m in parts]


def verify_module_correspondence(g: FiniteGroupoid, trials: int = 50, rng_seed: int = 0,
                                 instance: str | None = None) -> dict:
    """Random normalizer-generated left modules round-trip through their open sets, and
    random open sets give modules spanned by normalizers (one per bisection piece)."""
    if not _is_effective(g):
        warnings.warn(f"{g.name} is not effective", EffectivenessWarning, stacklevel=2)
    rng = child_rng(rng_seed, "module_correspondence", instance or g.name)
    dims = []
    for trial in range(trials):
        k = int(rng.integers(1, 4))
        normalizers = [random_element(g, rng, random_bisection(g, rng)) for _ in range(k)]
        m = left_module_closure(normalizers, parent=g)
        u = open_set_of_subspace(m)
        if m != module_of_open_set(u):
            raise CounterexampleFound({"trial": trial, "generators": [repr(n) for n in normalizers],
                                       "open_set": u.sorted()}, "module is not C_c(U)")
        if not is_bimodule(m):
            raise CounterexampleFound({"trial": trial, "open_set": u.sorted()},
                                      "normalizer-spanned left module is not a bimodule")
        dims.append(m.dim)

        v = random_subset(g, rng)
        pieces = partition_into_bisections(v)
        gens = [random_element(g, rng, p) for p in pieces]
        if not all(is_normalizer(n) for n in gens):
            raise CounterexampleFound({"trial": trial, "open_set": v.sorted()},
                                      "bisection-supported element is not a normalizer")
        if left_module_closure(gens, parent=g) != module_of_open_set(v):
            raise CounterexampleFound({"trial": trial, "open_set": v.sorted()},
                                      "C_c(U) is not spanned by the bisection normalizers")
    return {"groupoid": g.name, "trials": trials, "max_dim": max(dims, default=0),
            "mean_dim": float(np.mean(dims)) if dims else 0.0}


# ---------------------------------------------------------------------------
# normalizer cutoff
# ---------------------------------------------------------------------------

def cutoff_function(m: AlgebraElement, eps: float) -> AlgebraElement:
    """Indicator of r(K) where K = {a in supp(m) : |m(a)| >= eps/sqrt(2)} (compared exactly
    as |m(a)|^2 >= eps^2/2)."""
    g = m.parent
    threshold = Fraction(eps) ** 2 / 2
    big = [i for i in m.nonzero() if m.coeffs[i].abs2() >= threshold]
    return unit_indicator(g, sorted({g.arrows[int(g.tgt_idx[i])] for i in big}))


def normalizer_cutoff(m: AlgebraElement, eps: float) -> AlgebraElement:
    """Return f*m with f a unit indicator, ||f*m - m||_r <= eps and supp(f*m) inside supp(m)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not is_normalizer(m):
        raise NotANormalizer(repr(m))
    if not _is_effective(m.parent):
        warnings.warn(f"{m.parent.name} is not effective", EffectivenessWarning, stacklevel=2)
    return convolve(cutoff_function(m, eps), m)


# ---------------------------------------------------------------------------
# slices and bisections
# ---------------------------------------------------------------------------

def _sample_combinations(m: Subspace, rng: np.random.Generator, count: int):
    for _ in range(count):
        f = element(m.parent, {})
        for b in m.basis:
            f = f + b.scale(random_scalar(rng))
        yield f


def is_slice(m: Subspace, samples: int = 50, rng: np.random.Generator | None = None) -> bool:
    """Is M a two-sided D-module consisting of normalizers?

    On effective groupoids this is decided by the open-set criterion (M = C_c(U) with U a
    bisection); ``samples`` random linear combinations are checked against the decision as
    a cross-validation. On non-effective groupoids the decision itself is sampled.
    """
    if not is_bimodule(m):
        return False
    if rng is None:
        rng = child_rng(0, "is_slice", m.parent.name)
    g = m.parent
    if _is_effective(g):
        u = open_set_of_subspace(m)
        decided = m == module_of_open_set(u) and is_bisection(u)
        if samples:
            pool = list(m.basis) + list(_sample_combinations(m, rng, samples))
            verdicts = [is_normalizer(f) for f in pool]
            if decided and not all(verdicts):
                raise CounterexampleFound({"open_set": u.sorted()},
                                          "bisection module contains a non-normalizer")
            if not decided and all(verdicts):
                raise CounterexampleFound({"open_set": u.sorted()},
                                          "non-bisection module passed every normalizer sample")
        return decided
    pool = list(m.basis) + list(_sample_combinations(m, rng, max(samples, 1)))
    return all(is_normalizer(f) for f in pool)


def _require_bisection(u: ArrowSet):
    if not is_bisection(u):
        raise NotABisection(u.sorted())


def bis_product(u: ArrowSet, v: ArrowSet) -> ArrowSet:
    """UV = {ab : a in U, b in V, d(a) = r(b)}."""
    _require_bisection(u)
    _require_bisection(v)
    g = u.parent
    out = set()
    for a in u.indices():
        for b in v.indices():
            c = g.comp_idx[a, b]
            if c >= 0:
                out.add(g.arrows[c])
    return ArrowSet(g, frozenset(out))


def bis_inverse(u: ArrowSet) -> ArrowSet:
    _require_bisection(u)
    return ArrowSet(u.parent, frozenset(u.parent.inv(a) for a in u.members))


def enumerate_bisections(g: FiniteGroupoid, max_bits: int = 16) -> list[ArrowSet]:
    """All bisections, ordered by subset bitmask over the sorted arrow ids."""
    n = len(g)
    if n > max_bits:
        raise ValueError(f"{n} arrows exceed the exhaustive guard of {max_bits}")
    table = _kernels.bisection_table(g.src_idx, g.tgt_idx)
    return [_mask_to_set(g, int(m)) for m in np.flatnonzero(table)]


def _mask_to_set(g: FiniteGroupoid, mask: int) -> ArrowSet:
    return ArrowSet(g, frozenset(g.arrows[i] for i in range(len(g)) if (mask >> i) & 1))


def verify_psi_isomorphism(g: FiniteGroupoid, max_bits: int = 16, samples: int = 50,
                           rng_seed: int = 0, sampled_trials: int = 200) -> dict:
    """U -> C_c(U) is an injective semigroup homomorphism from bisections onto slices.

    Exhaustive when |G| <= ``max_bits``: every bisection pair is multiplied and every arrow
    subset is tested with :func:`is_slice`. Otherwise random bisections and subsets are used.
    """
    if not _is_effective(g):
        warnings.warn(f"{g.name} is not effective", EffectivenessWarning, stacklevel=2)
    rng = child_rng(rng_seed, "psi-iso", g.name)
    n = len(g)
    if n <= max_bits:
        mode = "exhaustive"
        table = _kernels.bisection_table(g.src_idx, g.tgt_idx)
        bis = [_mask_to_set(g, int(m)) for m in np.flatnonzero(table)]
        psi = {u: module_of_open_set(u) for u in bis}
        pairs = [(u, v) for u in bis for v in bis]
        slices = set()
        for mask in range(1 << n):
            s = _mask_to_set(g, mask)
            verdict = is_slice(module_of_open_set(s), samples=samples, rng=rng)
            if verdict != bool(table[mask]):
                raise CounterexampleFound({"subset": s.sorted(), "is_slice": verdict,
                                           "is_bisection": bool(table[mask])},
                                          "slice and bisection disagree")
            if verdict:
                slices.add(module_of_open_set(s))
        subsets_checked = 1 << n
    else:
        mode = "sampled"
        bis = list({random_bisection(g, rng) for _ in range(sampled_trials)})
        bis.sort(key=lambda u: u.sorted())
        psi = {u: module_of_open_set(u) for u in bis}
        pairs = [(bis[int(rng.integers(len(bis)))], bis[int(rng.integers(len(bis)))])
                 for _ in range(sampled_trials)]
        slices = set()
        for _ in range(sampled_trials):
            s = random_subset(g, rng)
            verdict = is_slice(module_of_open_set(s), samples=min(samples, 10), rng=rng)
            if verdict != is_bisection(s):
                raise CounterexampleFound({"subset": s.sorted()}, "slice and bisection disagree")
        slices = set(psi.values())
        subsets_checked = sampled_trials
    for u, v in pairs:
        uv = bis_product(u, v)
        lhs = psi[uv] if uv in psi else module_of_open_set(uv)
        if lhs != subspace_product(psi[u], psi[v]):
            raise CounterexampleFound({"U": u.sorted(), "V": v.sorted()},
                                      "Psi(UV) != Psi(U)Psi(V)")
    images = set(psi.values())
    if len(images) != len(bis):
        raise CounterexampleFound({"bisections": len(bis), "images": len(images)},
                                  "Psi is not injective")
    if mode == "exhaustive" and slices != images:
        raise CounterexampleFound({"slices": len(slices), "images": len(images)},
                                  "slices are not exactly the images of bisections")
    return {"groupoid": g.name, "mode": mode, "bisections": len(bis), "slices": len(slices),
            "products_checked": len(pairs), "subsets_checked": subsets_checked,
            "injective": True}


# ---------------------------------------------------------------------------
# masa and subalgebras
# ---------------------------------------------------------------------------

def commutant_of_diagonal(g: FiniteGroupoid) -> Subspace:
    """Solve {f : f*d = d*f for every unit delta d} exactly."""
    n = len(g)
    ds = diagonal_basis(g)
    # column a of the constraint matrix is the stacked vector (delta_a*d - d*delta_a)_d
    columns = []
    for a in g.arrows:
        da = delta(g, a)
        col = []
        for d in ds:
            col.extend((convolve(da, d) - convolve(d, da)).coeffs)
        columns.append(col)
    rows = [[columns[j][i] for j in range(n)] for i in range(n * len(ds))]
    return span_reduce([AlgebraElement(g, tuple(v)) for v in nullspace(rows, n)], parent=g)


def generate_subalgebra(generators: Iterable[AlgebraElement], parent: FiniteGroupoid | None = None,
                        include_diagonal: bool = True) -> Subspace:
    """Smallest *-subalgebra containing the generators (and D when requested)."""
    gens = list(generators)
    if parent is None:
        parent = gens[0].parent
    if include_diagonal:
        gens = diagonal_basis(parent) + gens
    e = Echelon(len(parent))
    basis: list[AlgebraElement] = []
    pending: list[AlgebraElement] = []

    def push(h):
        if e.add(h.coeffs):
            basis.append(h)
            pending.append(h)

    for f in gens:
        push(f)
    while pending:
        f = pending.pop()
        push(involution(f))
        for b in list(basis):
            push(convolve(f, b))
            push(convolve(b, f))
    return Subspace(parent, tuple(AlgebraElement(parent, r) for r in e.basis()))


def is_subalgebra(b: Subspace, contains_diagonal: bool = True) -> bool:
    e = b.echelon()
    if contains_diagonal and not all(e.contains(d.coeffs) for d in diagonal_basis(b.parent)):
        return False
    for x in b.basis:
        if not e.contains(involution(x).coeffs):
            return False
        for y in b.basis:
            if not e.contains(convolve(x, y).coeffs):
                return False
    return True


def algebra_to_subgroupoid(b: Subspace) -> ArrowSet:
    """Recover the wide subgroupoid H with B = C*_r(H)."""
    g = b.parent
    if not is_subalgebra(b):
        raise NotASubalgebra("B must contain D and be closed under convolution and involution")
    if not _is_effective(g):
        warnings.warn(f"{g.name} is not effective", EffectivenessWarning, stacklevel=2)
    h = open_set_of_subspace(b)
    e = b.echelon()
    missing = [a for a in h.sorted() if not e.contains(delta(g, a).coeffs)]
    if missing:
        raise NotNormalizerSpanned(missing[0])
    if generate_subgroupoid(g, h, wide=True) != h:
        raise CounterexampleFound(h.sorted(), "support of the subalgebra is not a wide subgroupoid")
    if b != module_of_open_set(h):
        raise CounterexampleFound(h.sorted(), "B != C_c(H)")
    return h
