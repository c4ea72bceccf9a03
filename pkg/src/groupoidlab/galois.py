"""Cocycles into finite groups, the spectral gradings they induce, and the
subgroup <-> intermediate-subgroupoid correspondence.

A coaction of a discrete group is represented by its spectral grading
{A_s}: the fibre subspaces determine the coaction, so no tensor products with
C*_r(Gamma) are modelled.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import (AlgebraElement, convolve, diagonal_basis, element, involution,
                      is_intertwiner, reduced_norm, regular_representation)
from .errors import (CounterexampleFound, EffectivenessWarning, GradingNotCocyclic,
                     HypothesisWarning, NotACocycle, NotAPartition, NotASubgroupoid,
                     NotNormalizerSpanned)
from .groupoid import (ArrowSet, FiniteGroupoid, cyclic, disjoint, generate_subgroupoid,
                       group_groupoid, is_subgroupoid, pair, product, structure_report,
                       subgroupoid_lattice)
from .groups import FiniteGroup, cyclic_group, klein_group, subgroups
from .submodule import is_bimodule, module_of_open_set, open_set_of_subspace
from .subspace import Subspace, span_reduce, subspace_product, subspace_sum

__all__ = [
    "Cocycle", "SpectralGrading", "validate_cocycle", "projection_cocycle", "trivial_cocycle",
    "parity_cocycle", "spectral_grading_of_cocycle", "grading_invariants", "fourier_component",
    "cocycle_from_spectral", "image_subgroup_check", "enumerate_intermediate_subgroupoids",
    "verify_galois_bijection", "remark_counterexample", "kernel_is_minimal", "verify_fourier",
]


@dataclass(frozen=True, eq=False)
class Cocycle:
    groupoid: FiniteGroupoid
    group: FiniteGroup
    labels: tuple[str, ...]  # aligned with groupoid.arrows
    name: str = "cocycle"

    def __call__(self, arrow: str) -> str:
        return self.labels[self.groupoid.index(arrow)]

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        return (self.labels == other.labels and self.groupoid == other.groupoid
                and self.group == other.group)

    def __hash__(self):
        return hash(self.labels)

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.groupoid.arrows, self.labels))

    def fibre(self, s: str) -> ArrowSet:
        return ArrowSet(self.groupoid, frozenset(a for a, l in zip(self.groupoid.arrows,
                                                                   self.labels) if l == s))

    def preimage(self, subset: Iterable[str]) -> ArrowSet:
        want = set(subset)
        return ArrowSet(self.groupoid, frozenset(a for a, l in zip(self.groupoid.arrows,
                                                                   self.labels) if l in want))

    def image(self, arrows: ArrowSet | None = None) -> frozenset[str]:
        if arrows is None:
            return frozenset(self.labels)
        return frozenset(self(a) for a in arrows.members)

    def kernel(self) -> ArrowSet:
        return self.fibre(self.group.identity)


@dataclass(frozen=True, eq=False)
class SpectralGrading:
    parent: FiniteGroupoid
    group: FiniteGroup
    components: dict  # group element -> Subspace

    def __getitem__(self, s: str) -> Subspace:
        return self.components[s]

    def __eq__(self, other):
        if not isinstance(other, SpectralGrading):
            return NotImplemented
        return (self.parent == other.parent and self.group == other.group
                and all(self.components[s] == other.components[s] for s in self.group.elements))

    def __hash__(self):
        return hash(self.group.elements)

    def dims(self) -> dict[str, int]:
        return {s: self.components[s].dim for s in self.group.elements}


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

def validate_cocycle(g: FiniteGroupoid, group: FiniteGroup, label: Mapping[str, str],
                     name: str = "cocycle") -> Cocycle:
    """Check c(unit) = e, c(ab) = c(a)c(b) on composable pairs and c(a^{-1}) = c(a)^{-1}."""
    missing = [a for a in g.arrows if a not in label]
    if missing:
        raise NotACocycle((missing[0],), "arrow has no label")
    labels = tuple(label[a] for a in g.arrows)
    for lab in set(labels):
        group.index(lab)
    gi = [group.index(l) for l in labels]
    for u in g.unit_indices:
        if gi[u] != group.identity_index:
            raise NotACocycle((g.arrows[u],), "unit not labelled by the identity")
    for a, b in np.argwhere(g.comp_idx >= 0):
        c = g.comp_idx[a, b]
        if gi[c] != group.mul_table[gi[a], gi[b]]:
            raise NotACocycle((g.arrows[a], g.arrows[b]))
    for a in range(len(g)):
        if gi[g.inv_idx[a]] != group.inv_table[gi[a]]:
            raise NotACocycle((g.arrows[a],), "inverse law fails")
    return Cocycle(g, group, labels, name)


def projection_cocycle(g: FiniteGroupoid, group: FiniteGroup) -> Cocycle:
    """product(G, group) -> group, (a, s) |-> s."""
    from .groupoid import _split_pair

    pg = product(g, group_groupoid(group))
    return validate_cocycle(pg, group, {a: _split_pair(a)[1] for a in pg.arrows},
                            name=f"projection({g.name},{group.name})")


def trivial_cocycle(g: FiniteGroupoid, group: FiniteGroup | None = None) -> Cocycle:
    group = group or cyclic_group(1)
    return validate_cocycle(g, group, {a: group.identity for a in g.arrows},
                            name=f"trivial({g.name})")


def parity_cocycle(n: int) -> Cocycle:
    """pair(n) -> Z/2, (i,j) |-> i - j mod 2."""
    from .groupoid import _split_pair

    g = pair(n)
    return validate_cocycle(
        g, cyclic_group(2),
        {a: str((int(_split_pair(a)[0]) - int(_split_pair(a)[1])) % 2) for a in g.arrows},
        name=f"parity({n})")


def remark_counterexample() -> tuple[FiniteGroupoid, FiniteGroup, Cocycle]:
    """Z/2 disjoint-union Z/2 labelled into the Klein group so the image has three elements."""
    g = disjoint(cyclic(2), cyclic(2))
    k = klein_group()
    c = validate_cocycle(g, k, {"1:0": "(0,0)", "2:0": "(0,0)", "1:1": "(1,0)", "2:1": "(0,1)"},
                         name="remark")
    return g, k, c


def _orbit_count(g: FiniteGroupoid, arrows: ArrowSet) -> int:
    parent = {u: u for u in g.unit_indices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in arrows.indices():
        ra, rb = find(int(g.src_idx[a])), find(int(g.tgt_idx[a]))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return len({find(u) for u in g.unit_indices})


def kernel_is_minimal(c: Cocycle) -> bool:
    """ker c is a wide subgroupoid; it is minimal iff it has a single orbit."""
    return _orbit_count(c.groupoid, c.kernel()) == 1


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------

def spectral_grading_of_cocycle(c: Cocycle) -> SpectralGrading:
    comps = {s: module_of_open_set(c.fibre(s)) for s in c.group.elements}
    grading = SpectralGrading(c.groupoid, c.group, comps)
    bad = [k for k, ok in grading_invariants(grading).items() if not ok]
    if bad:
        raise CounterexampleFound(bad, "cocycle grading violates invariants")
    return grading


def grading_invariants(grading: SpectralGrading) -> dict[str, bool]:
    """Exact checks of the grading laws, keyed by invariant name."""
    G, grp = grading.parent, grading.group
    comps = grading.components
    total = subspace_sum(*comps.values()) if comps else Subspace(G, ())
    dims = sum(m.dim for m in comps.values())
    product_ok = all(
        subspace_product(comps[s], comps[t]).issubspace(comps[grp.mul(s, t)])
        for s in grp.elements for t in grp.elements)
    star_ok = all(
        span_reduce([involution(b) for b in comps[s].basis], parent=G) == comps[grp.inv(s)]
        for s in grp.elements)
    diag = span_reduce(diagonal_basis(G), parent=G)
    return {
        "direct_sum": total.dim == dims,
        "dimension_sum": dims == len(G),
        "product_graded": product_ok,
        "involution_graded": star_ok,
        "diagonal_in_fixed_point": diag.issubspace(comps[grp.identity]),
    }


def _fibres_of_grading(grading: SpectralGrading) -> dict[str, ArrowSet]:
    return {s: open_set_of_subspace(grading.components[s]) for s in grading.group.elements}


def fourier_component(grading: SpectralGrading, s: str, f: AlgebraElement) -> AlgebraElement:
    """Phi_s(f): restriction of f to the fibre carrying A_s."""
    fibres = _fibres_of_grading(grading)
    for t, u in fibres.items():
        if grading.components[t] != module_of_open_set(u):
            raise GradingNotCocyclic(f"A_{t} is not spanned by deltas on its support")
    seen: dict[str, str] = {}
    for t, u in fibres.items():
        for a in u.members:
            if a in seen:
                raise GradingNotCocyclic(f"arrow {a} lies in A_{seen[a]} and A_{t}")
            seen[a] = t
    u = fibres[s]
    G = f.parent
    return element(G, {a: f[a] for a in u.members if f[a]})


def verify_fourier(grading: SpectralGrading, elements: Sequence[AlgebraElement],
                   tolerance: float = 1e-9) -> dict:
    """Check the Fourier components on sample elements.

    Exact: idempotence, orthogonality, summing to the identity, D-bimodule property,
    intertwiners mapped to intertwiners. Numeric: norm decrease and positivity of
    Phi_e(f* f), both within ``tolerance``.
    """
    grp = grading.group
    G = grading.parent
    ds = diagonal_basis(G)
    failures: list[tuple[str, int]] = []
    worst_norm_gap = 0.0
    for k, f in enumerate(elements):
        phi = {s: fourier_component(grading, s, f) for s in grp.elements}
        total = element(G, {})
        for s in grp.elements:
            total = total + phi[s]
            if fourier_component(grading, s, phi[s]) != phi[s]:
                failures.append(("idempotent", k))
            for t in grp.elements:
                if t != s and fourier_component(grading, t, phi[s]).nonzero():
                    failures.append(("orthogonal", k))
            gap = reduced_norm(phi[s]) - reduced_norm(f)
            worst_norm_gap = max(worst_norm_gap, gap)
            if gap > tolerance:
                failures.append(("norm_decreasing", k))
            for d in ds[:2]:
                for e in ds[-2:]:
                    lhs = fourier_component(grading, s, convolve(convolve(d, f), e))
                    if lhs != convolve(convolve(d, phi[s]), e):
                        failures.append(("bimodule", k))
        if total != f:
            failures.append(("sum_to_identity", k))
        pos = fourier_component(grading, grp.identity, convolve(involution(f), f))
        for block in regular_representation(pos):
            if block.matrix.size and np.linalg.eigvalsh(
                    (block.matrix + block.matrix.conj().T) / 2).min() < -tolerance:
                failures.append(("positive", k))
        if is_intertwiner(f):
            for s in grp.elements:
                if not is_intertwiner(phi[s]):
                    failures.append(("intertwiner", k))
    return {"elements": len(elements), "failures": sorted(set(failures)),
            "max_norm_gap": worst_norm_gap}


def cocycle_from_spectral(grading: SpectralGrading, name: str = "reconstructed") -> Cocycle:
    """Rebuild c from U_s = supp(A_s) and confirm it reproduces the grading."""
    G, grp = grading.parent, grading.group
    if not structure_report(G).is_effective:
        warnings.warn(f"{G.name} is not effective; reconstruction relies on A_s = C_c(U_s) "
                      "being checked directly", EffectivenessWarning, stacklevel=2)
    fibres = _fibres_of_grading(grading)
    for s, u in fibres.items():
        m = grading.components[s]
        if not is_bimodule(m):
            raise NotNormalizerSpanned(s, "spectral subspace is not a D-bimodule")
        if m != module_of_open_set(u):
            raise NotNormalizerSpanned(s, "spectral subspace is not C_c of its support")
    owner: dict[str, list[str]] = {a: [] for a in G.arrows}
    for s in grp.elements:
        for a in fibres[s].members:
            owner[a].append(s)
    for a in G.arrows:
        if len(owner[a]) != 1:
            raise NotAPartition(a, owner[a])
    try:
        c = validate_cocycle(G, grp, {a: owner[a][0] for a in G.arrows}, name=name)
    except NotACocycle as exc:
        raise CounterexampleFound(exc.witness, "graded fibres do not form a cocycle") from exc
    if spectral_grading_of_cocycle(c) != grading:
        raise CounterexampleFound(name, "reconstructed cocycle does not reproduce the grading")
    return c


# ---------------------------------------------------------------------------
# Galois correspondence
# ---------------------------------------------------------------------------

def image_subgroup_check(c: Cocycle, h: ArrowSet) -> tuple[frozenset[str], bool]:
    if not is_subgroupoid(h):
        raise NotASubgroupoid(h.sorted())
    if not c.kernel().issubset(h):
        warnings.warn("H does not contain ker c", HypothesisWarning, stacklevel=2)
    img = c.image(h)
    return img, c.group.is_subgroup(img)


def enumerate_intermediate_subgroupoids(c: Cocycle, budget: int = 10_000,
                                        order: Sequence[str] | None = None) -> list[ArrowSet]:
    """Every subgroupoid H with ker c <= H <= G, by closure-lattice search from ker c."""
    g = c.groupoid
    return subgroupoid_lattice(g, generate_subgroupoid(g, c.kernel(), wide=True), budget, order)


def verify_galois_bijection(c: Cocycle, group_limit: int = 24, budget: int = 10_000) -> dict:
    """Check H -> c(H) and L -> c^{-1}(L) are mutually inverse between intermediate
    subgroupoids and subgroups. Hypothesis failures are reported, not raised."""
    surjective = c.image() == frozenset(c.group.elements)
    minimal = kernel_is_minimal(c)
    hypotheses = surjective and minimal
    if not surjective:
        warnings.warn(f"{c.name} is not surjective", HypothesisWarning, stacklevel=2)
    if not minimal:
        warnings.warn(f"ker {c.name} is not minimal", HypothesisWarning, stacklevel=2)

    subs = subgroups(c.group, limit=group_limit)
    hs = enumerate_intermediate_subgroupoids(c, budget=budget)

    forward_not_subgroup = [h.sorted() for h in hs if not c.group.is_subgroup(c.image(h))]
    lam_fail = [sorted(lam) for lam in subs if c.image(c.preimage(lam)) != lam]
    h_fail = [h.sorted() for h in hs if c.preimage(c.image(h)) != h]
    images = [c.image(h) for h in hs]
    injective = len(set(images)) == len(images)
    onto = set(subs) <= set(images)
    bijection = not forward_not_subgroup and injective and onto and len(hs) == len(subs)

    report = {
        "cocycle": c.name,
        "surjective": surjective,
        "kernel_minimal": minimal,
        "subgroups": len(subs),
        "intermediate_subgroupoids": len(hs),
        "forward_not_subgroup": forward_not_subgroup,
        "c_cinv_failures": lam_fail,
        "cinv_c_failures": h_fail,
        "bijection": bijection,
        # every set is clopen in a discrete groupoid, so each H is automatically closed
        "all_closed": True,
    }
    if hypotheses and (lam_fail or h_fail or not bijection):
        raise CounterexampleFound(report, "Galois correspondence fails under its hypotheses")
    return report
