"""Finite inverse semigroups, partial-bijection actions and their germ groupoids."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _kernels
from .errors import AxiomViolation, CoverageFailure, NotAHomomorphism
from .groupoid import FiniteGroupoid, GroupoidTables, validate_groupoid
from .groups import FiniteGroup, cyclic_group

__all__ = [
    "FiniteInverseSemigroup", "PartialBijectionAction", "validate_inverse_semigroup",
    "validate_action", "germ_groupoid", "germ_classes", "symmetric_inverse_monoid",
    "group_semigroup", "canonical_action", "translation_action", "trivial_action",
    "check_polycyclic_relations",
]


@dataclass(frozen=True, eq=False)
class FiniteInverseSemigroup:
    name: str
    elements: tuple[str, ...]
    mul_table: np.ndarray
    star_table: np.ndarray
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def index(self, s: str) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise KeyError(f"{s!r} is not an element of {self.name}") from None

    def mul(self, s: str, t: str) -> str:
        return self.elements[self.mul_table[self.index(s), self.index(t)]]

    def star(self, s: str) -> str:
        return self.elements[self.star_table[self.index(s)]]

    @property
    def idempotents(self) -> tuple[str, ...]:
        """E(S) = {e : e^2 = e}."""
        return tuple(e for i, e in enumerate(self.elements) if self.mul_table[i, i] == i)


def validate_inverse_semigroup(name: str, elements, product: Mapping, star: Mapping
                               ) -> FiniteInverseSemigroup:
    elements = tuple(elements)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.full((n, n), -1, dtype=np.int64)
    for (s, t), st in product.items():
        for x in (s, t, st):
            if x not in index:
                raise AxiomViolation("closure", (s, t), f"unknown element {x!r}")
        mul[index[s], index[t]] = index[st]
    missing = np.argwhere(mul < 0)
    if missing.size:
        a, b = missing[0]
        raise AxiomViolation("closure", (elements[a], elements[b]), "product not defined")
    st_arr = np.full(n, -1, dtype=np.int64)
    for s, t in star.items():
        if s not in index or t not in index:
            raise AxiomViolation("star", (s,), f"unknown element in star {s!r} -> {t!r}")
        st_arr[index[s]] = index[t]
    if (st_arr < 0).any():
        raise AxiomViolation("star", (elements[int(np.argmax(st_arr < 0))],), "star not defined")

    w = _kernels.associativity_witness(mul)
    if w is not None:
        raise AxiomViolation("associativity", [elements[i] for i in w])
    for s in range(n):
        t = st_arr[s]
        if mul[mul[s, t], s] != s or mul[mul[t, s], t] != t:
            raise AxiomViolation("regularity", (elements[s],), "s != s s* s or s* != s* s s*")
    for s in range(n):
        inverses = [t for t in range(n) if mul[mul[s, t], s] == s and mul[mul[t, s], t] == t]
        if inverses != [st_arr[s]]:
            raise AxiomViolation("uniqueness", (elements[s], *[elements[t] for t in inverses]),
                                 "generalized inverse is not unique")
    idem = [e for e in range(n) if mul[e, e] == e]
    for e, f in itertools.combinations(idem, 2):
        if mul[e, f] != mul[f, e]:
            raise AxiomViolation("idempotents-commute", (elements[e], elements[f]))
    return FiniteInverseSemigroup(name, elements, mul, st_arr)


@dataclass(frozen=True, eq=False)
class PartialBijectionAction:
    name: str
    semigroup: FiniteInverseSemigroup
    space: tuple[str, ...]
    maps: dict  # element -> {point: image}

    def apply(self, s: str, x: str) -> str | None:
        return self.maps[s].get(x)

    def domain(self, s: str) -> frozenset:
        return frozenset(self.maps[s])


def validate_action(semigroup: FiniteInverseSemigroup, space, maps: Mapping,
                    name: str = "action") -> PartialBijectionAction:
    """Check injectivity, alpha_{st} = alpha_s o alpha_t, alpha_{s*} = alpha_s^{-1} and coverage."""
    space = tuple(space)
    pts = set(space)
    full = {s: dict(maps.get(s, {})) for s in semigroup.elements}
    for s, m in full.items():
        for x, y in m.items():
            if x not in pts or y not in pts:
                raise AxiomViolation("action", (s, x), f"point outside the space: {x}->{y}")
        if len(set(m.values())) != len(m):
            raise AxiomViolation("action", (s,), "map is not injective")
    for s in semigroup.elements:
        for t in semigroup.elements:
            st = full[semigroup.mul(s, t)]
            composite = {x: full[s][full[t][x]] for x in full[t] if full[t][x] in full[s]}
            if composite != st:
                bad = sorted(set(composite.items()) ^ set(st.items()))[0][0]
                raise NotAHomomorphism(s, t, bad)
    for s in semigroup.elements:
        inverse = {y: x for x, y in full[s].items()}
        if full[semigroup.star(s)] != inverse:
            bad = sorted(set(inverse.items()) ^ set(full[semigroup.star(s)].items()))[0][0]
            raise NotAHomomorphism(s, semigroup.star(s), bad)
    for e in semigroup.idempotents:
        if any(x != y for x, y in full[e].items()):
            raise AxiomViolation("action", (e,), "idempotent does not act as a partial identity")
    covered = set().union(*(full[e].keys() for e in semigroup.idempotents)) if \
        semigroup.idempotents else set()
    for x in space:
        if x not in covered:
            raise CoverageFailure(x)
    return PartialBijectionAction(name, semigroup, space, full)


# ---------------------------------------------------------------------------
# germ groupoid
# ---------------------------------------------------------------------------

def germ_classes(action: PartialBijectionAction) -> dict[tuple[str, str], tuple[str, str]]:
    """Map each (s, x) in S*X to the canonical representative of its germ class.

    (s, x) ~ (t, x) iff some idempotent e has x in dom(alpha_e) and se = te. The relation is
    checked to be an equivalence relation before classes are formed.
    """
    S = action.semigroup
    star_x = [(s, x) for s in S.elements for x in action.space
              if x in action.maps[S.mul(S.star(s), s)]]
    by_point: dict[str, list[str]] = {}
    for s, x in star_x:
        by_point.setdefault(x, []).append(s)
    idem = S.idempotents
    rep: dict[tuple[str, str], tuple[str, str]] = {}
    for x, ss in by_point.items():
        es = [e for e in idem if x in action.maps[e]]

        def related(s, t):
            return any(S.mul(s, e) == S.mul(t, e) for e in es)

        rel = {(s, t): related(s, t) for s in ss for t in ss}
        for s in ss:
            if not rel[(s, s)]:
                raise AxiomViolation("germ-equivalence", (s, x), "not reflexive")
            for t in ss:
                if rel[(s, t)] != rel[(t, s)]:
                    raise AxiomViolation("germ-equivalence", (s, t, x), "not symmetric")
                if rel[(s, t)]:
                    for u in ss:
                        if rel[(t, u)] and not rel[(s, u)]:
                            raise AxiomViolation("germ-equivalence", (s, t, u, x),
                                                 "not transitive")
        for s in ss:
            canon = min((t for t in ss if rel[(s, t)]), key=S.index)
            rep[(s, x)] = (canon, x)
    return rep


def germ_groupoid(action: PartialBijectionAction) -> FiniteGroupoid:
    """S x| X: arrows [s,x] with d = x, r = alpha_s(x), [s, alpha_t(x)][t, x] = [st, x],
    [s,x]^{-1} = [s*, alpha_s(x)]."""
    S = action.semigroup
    rep = germ_classes(action)

    def name(s, x):
        c, _ = rep[(s, x)]
        return f"[{c},{x}]"

    unit_of = {}
    for x in action.space:
        e = next(e for e in S.idempotents if x in action.maps[e])
        unit_of[x] = name(e, x)

    reps_by_class: dict[str, list[tuple[str, str]]] = {}
    for (s, x) in rep:
        reps_by_class.setdefault(name(s, x), []).append((s, x))

    arrows = {}
    for cls, members in reps_by_class.items():
        s, x = members[0]
        y = action.apply(s, x)
        arrows[cls] = (unit_of[x], unit_of[y], name(S.star(s), y))
    comp = {}
    for a, (ma) in reps_by_class.items():
        for b, (mb) in reps_by_class.items():
            if arrows[a][0] != arrows[b][1]:
                continue
            results = {name(S.mul(s, t), x) for s, _y in ma for t, x in mb}
            if len(results) != 1:
                raise AxiomViolation("germ-product", (a, b), f"product not well defined: {results}")
            comp[(a, b)] = results.pop()
    return validate_groupoid(GroupoidTables(f"germ({action.name})", sorted(set(unit_of.values())),
                                            arrows, comp))


# ---------------------------------------------------------------------------
# standard semigroups and actions
# ---------------------------------------------------------------------------

def _pinj_name(images: tuple) -> str:
    return "".join("-" if y is None else str(y) for y in images)


def symmetric_inverse_monoid(n: int) -> FiniteInverseSemigroup:
    """I_n: all partial injections of {1..n}; ``"2-"`` sends 1 to 2 and leaves 2 undefined.
    The product st applies t first."""
    pts = list(range(1, n + 1))
    maps = []
    for k in range(n + 1):
        for dom in itertools.combinations(pts, k):
            for img in itertools.permutations(pts, k):
                m = dict(zip(dom, img))
                maps.append(tuple(m.get(x) for x in pts))
    names = [_pinj_name(m) for m in maps]

    def compose(s, t):
        return tuple(None if t[i] is None else s[t[i] - 1] for i in range(n))

    def inverse(s):
        out = [None] * n
        for i, y in enumerate(s):
            if y is not None:
                out[y - 1] = i + 1
        return tuple(out)

    prod = {(_pinj_name(s), _pinj_name(t)): _pinj_name(compose(s, t)) for s in maps for t in maps}
    star = {_pinj_name(s): _pinj_name(inverse(s)) for s in maps}
    return validate_inverse_semigroup(f"I({n})", names, prod, star)


def group_semigroup(group: FiniteGroup) -> FiniteInverseSemigroup:
    prod = {(s, t): group.mul(s, t) for s in group.elements for t in group.elements}
    return validate_inverse_semigroup(group.name, group.elements, prod,
                                      {s: group.inv(s) for s in group.elements})


def canonical_action(n: int) -> PartialBijectionAction:
    S = symmetric_inverse_monoid(n)
    maps = {}
    for s in S.elements:
        maps[s] = {str(i + 1): ch for i, ch in enumerate(s) if ch != "-"}
    return validate_action(S, [str(i) for i in range(1, n + 1)], maps, name=f"canonical({n})")


def translation_action(n: int) -> PartialBijectionAction:
    """Z/n acting on itself by translation."""
    G = cyclic_group(n)
    S = group_semigroup(G)
    maps = {s: {x: G.mul(s, x) for x in G.elements} for s in G.elements}
    return validate_action(S, G.elements, maps, name=f"translation({n})")


def trivial_action(n: int) -> PartialBijectionAction:
    S = validate_inverse_semigroup("trivial", ["1"], {("1", "1"): "1"}, {"1": "1"})
    pts = [str(i) for i in range(1, n + 1)]
    return validate_action(S, pts, {"1": {x: x for x in pts}}, name=f"trivial_action({n})")


def check_polycyclic_relations(semigroup: FiniteInverseSemigroup, generators, zero: str,
                               one: str) -> list[tuple[str, str]]:
    """Return the generator pairs (a, b) violating s_a* s_b = delta_ab 1 (empty when all hold)."""
    bad = []
    for a in generators:
        for b in generators:
            want = one if a == b else zero
            if semigroup.mul(semigroup.star(a), b) != want:
                bad.append((a, b))
    return bad
