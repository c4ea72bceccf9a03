"""Finite discrete groupoids: data model, validation, constructors and predicates.

Every groupoid here carries the discrete topology, so all subsets are clopen,
"dense" means "equal" and the interior of a set is the set itself. In
particular a finite groupoid is effective exactly when it is principal
(its isotropy consists of units only), and topological transitivity and
minimality both reduce to "a single orbit".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import AxiomViolation, MissingComposition
from .groups import FiniteGroup, symmetric_group

__all__ = [
    "FiniteGroupoid", "ArrowSet", "GroupoidTables", "StructureReport",
    "validate_groupoid", "from_function", "pair", "cyclic", "sym", "unit_groupoid",
    "group_groupoid", "disjoint", "product", "transformation",
    "structure_report", "generate_subgroupoid", "subgroupoid_lattice", "is_bisection",
    "is_subgroupoid",
    "find_isomorphism", "orbits",
]


@dataclass
class GroupoidTables:
    """Unvalidated groupoid description as read from a table file or built in code."""

    name: str
    units: list[str]
    arrows: dict[str, tuple[str, str, str]]  # id -> (d, r, inv); units may be omitted
    comp: dict[tuple[str, str], str]


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A validated finite groupoid stored as integer tables over sorted arrow ids.

    ``src``/``tgt``/``inv`` map arrow indices to arrow indices (units are arrows);
    ``comp[a, b]`` is the index of ``ab`` or ``-1`` when ``src(a) != tgt(b)``.
    """

    name: str
    arrows: tuple[str, ...]
    src_idx: np.ndarray
    tgt_idx: np.ndarray
    inv_idx: np.ndarray
    comp_idx: np.ndarray
    _index: dict = field(init=False, repr=False)
    _units: tuple = field(init=False, repr=False)
    _by_tgt: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.arrows)})
        unit_ix = tuple(int(i) for i in np.flatnonzero(self.src_idx == np.arange(len(self.arrows))))
        object.__setattr__(self, "_units", unit_ix)
        by_tgt = {u: tuple(int(b) for b in np.flatnonzero(self.tgt_idx == u)) for u in unit_ix}
        object.__setattr__(self, "_by_tgt", by_tgt)
        for arr in (self.src_idx, self.tgt_idx, self.inv_idx, self.comp_idx):
            arr.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroupoid({self.name!r}, {len(self.arrows)} arrows, {len(self._units)} units)"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.arrows == other.arrows
                and np.array_equal(self.src_idx, other.src_idx)
                and np.array_equal(self.tgt_idx, other.tgt_idx)
                and np.array_equal(self.inv_idx, other.inv_idx)
                and np.array_equal(self.comp_idx, other.comp_idx))

    def __hash__(self):
        return hash(self.arrows)

    def __len__(self):
        return len(self.arrows)

    # -- id level accessors -------------------------------------------------
    @property
    def units(self) -> tuple[str, ...]:
        return tuple(self.arrows[i] for i in self._units)

    @property
    def unit_indices(self) -> tuple[int, ...]:
        return self._units

    def index(self, arrow: str) -> int:
        try:
            return self._index[arrow]
        except KeyError:
            raise KeyError(f"{arrow!r} is not an arrow of {self.name}") from None

    def src(self, arrow: str) -> str:
        return self.arrows[self.src_idx[self.index(arrow)]]

    def tgt(self, arrow: str) -> str:
        return self.arrows[self.tgt_idx[self.index(arrow)]]

    def inv(self, arrow: str) -> str:
        return self.arrows[self.inv_idx[self.index(arrow)]]

    def comp(self, a: str, b: str) -> str | None:
        c = self.comp_idx[self.index(a), self.index(b)]
        return None if c < 0 else self.arrows[c]

    def is_unit(self, arrow: str) -> bool:
        i = self.index(arrow)
        return int(self.src_idx[i]) == i

    def arrow_set(self, members: Iterable[str] = ()) -> ArrowSet:
        return ArrowSet(self, frozenset(members))

    def everything(self) -> ArrowSet:
        return ArrowSet(self, frozenset(self.arrows))

    def unit_set(self) -> ArrowSet:
        return ArrowSet(self, frozenset(self.units))

    def fibre_src(self, unit_index: int) -> np.ndarray:
        """Indices of arrows with source ``unit_index`` (the fibre G_x)."""
        return np.flatnonzero(self.src_idx == unit_index)

    def fibre_tgt(self, unit_index: int) -> np.ndarray:
        return np.flatnonzero(self.tgt_idx == unit_index)

    def arrows_into(self, unit_index: int) -> tuple[int, ...]:
        """Indices of arrows with target ``unit_index`` (cached)."""
        return self._by_tgt[unit_index]


@dataclass(frozen=True)
class ArrowSet:
    parent: FiniteGroupoid
    members: frozenset

    def __post_init__(self):
        bad = [a for a in self.members if a not in self.parent._index]
        if bad:
            raise KeyError(f"{sorted(bad)} are not arrows of {self.parent.name}")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, arrow):
        return arrow in self.members

    def __eq__(self, other):
        if not isinstance(other, ArrowSet):
            return NotImplemented
        return self.members == other.members and self.parent == other.parent

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"ArrowSet({sorted(self.members)})"

    def sorted(self) -> list[str]:
        return sorted(self.members)

    def indices(self) -> np.ndarray:
        return np.array(sorted(self.parent.index(a) for a in self.members), dtype=np.int64)

    def mask(self) -> np.ndarray:
        m = np.zeros(len(self.parent), dtype=np.bool_)
        for a in self.members:
            m[self.parent.index(a)] = True
        return m

    def issubset(self, other: ArrowSet) -> bool:
        return self.members <= other.members

    def __or__(self, other: ArrowSet) -> ArrowSet:
        return ArrowSet(self.parent, self.members | other.members)

    @classmethod
    def from_mask(cls, parent: FiniteGroupoid, mask: np.ndarray) -> ArrowSet:
        return cls(parent, frozenset(parent.arrows[i] for i in np.flatnonzero(mask)))


@dataclass(frozen=True)
class StructureReport:
    is_effective: bool
    is_minimal: bool
    is_topologically_transitive: bool
    isotropy: ArrowSet
    orbit_partition: tuple[tuple[str, ...], ...]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_groupoid(raw: GroupoidTables) -> FiniteGroupoid:
    """Check the five groupoid axioms exhaustively and return the validated groupoid.

    Axiom ids: 1 units are fixed by d and r; 2 units act as identities;
    3 d and r of products; 4 associativity; 5 inverses.
    """
    arrows = dict(raw.arrows)
    for u in raw.units:
        arrows.setdefault(u, (u, u, u))
    ids = sorted(arrows)
    index = {a: i for i, a in enumerate(ids)}
    n = len(ids)
    units = set(raw.units)

    for a, (d, r, inv) in arrows.items():
        for label, x in (("d", d), ("r", r)):
            if x not in units:
                raise AxiomViolation("structure", (a,), f"{label}={x!r} is not a unit")
        if inv not in index:
            raise AxiomViolation("structure", (a,), f"inv={inv!r} is not an arrow")

    src = np.array([index[arrows[a][0]] for a in ids], dtype=np.int64)
    tgt = np.array([index[arrows[a][1]] for a in ids], dtype=np.int64)
    inv = np.array([index[arrows[a][2]] for a in ids], dtype=np.int64)

    comp = np.full((n, n), -1, dtype=np.int64)
    for (a, b), c in raw.comp.items():
        for x in (a, b, c):
            if x not in index:
                raise AxiomViolation("structure", (a, b), f"unknown arrow {x!r} in comp")
        if src[index[a]] != tgt[index[b]]:
            raise AxiomViolation("composability", (a, b), "comp entry for a non-composable pair")
        comp[index[a], index[b]] = index[c]
    composable = src[:, None] == tgt[None, :]
    missing = np.argwhere(composable & (comp < 0))
    if missing.size:
        a, b = missing[0]
        raise MissingComposition(ids[a], ids[b])

    # (1) d(x) = r(x) = x
    for u in sorted(units):
        i = index[u]
        if src[i] != i or tgt[i] != i:
            raise AxiomViolation(1, (u,))
    # (2) a d(a) = a = r(a) a
    for i in range(n):
        if comp[i, src[i]] != i or comp[tgt[i], i] != i:
            raise AxiomViolation(2, (ids[i],))
    # (3) d(ab) = d(b), r(ab) = r(a)
    for a, b in np.argwhere(composable):
        c = comp[a, b]
        if src[c] != src[b] or tgt[c] != tgt[a]:
            raise AxiomViolation(3, (ids[a], ids[b]))
    # (4) associativity
    w = _kernels.associativity_witness(comp)
    if w is not None:
        raise AxiomViolation(4, tuple(ids[i] for i in w))
    # (5) inverses
    for i in range(n):
        j = inv[i]
        if comp[j, i] != src[i] or comp[i, j] != tgt[i] or inv[j] != i:
            raise AxiomViolation(5, (ids[i],))
    # every source is a declared unit, so units are exactly the fixed points of src
    return FiniteGroupoid(raw.name, tuple(ids), src, tgt, inv, comp)


def from_function(name: str, arrows: Iterable[str], units: Iterable[str],
                  d: Callable[[str], str], r: Callable[[str], str], inv: Callable[[str], str],
                  mul: Callable[[str, str], str]) -> FiniteGroupoid:
    """Build and validate a groupoid from structure functions (the constructor path)."""
    arrows = list(arrows)
    units = list(units)
    table = {a: (d(a), r(a), inv(a)) for a in arrows}
    by_tgt: dict[str, list[str]] = {}
    for b in arrows:
        by_tgt.setdefault(table[b][1], []).append(b)
    comp = {}
    for a in arrows:
        for b in by_tgt.get(table[a][0], ()):
            comp[(a, b)] = mul(a, b)
    return validate_groupoid(GroupoidTables(name, units, table, comp))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _split_pair(s: str) -> tuple[str, str]:
    """Split a canonical ``(a,b)`` encoding at its top-level comma."""
    assert s[0] == "(" and s[-1] == ")", s
    depth = 0
    for i, ch in enumerate(s[1:-1], start=1):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return s[1:i], s[i + 1:-1]
    raise ValueError(f"not a pair encoding: {s!r}")


def pair(n: int) -> FiniteGroupoid:
    """The pair groupoid on {1..n}: arrows ``(i,j)`` with d=(j,j), r=(i,i)."""
    if n < 1:
        raise ValueError("pair(n) needs n >= 1")
    pts = range(1, n + 1)
    arrows = [f"({i},{j})" for i in pts for j in pts]

    def ij(a):
        i, j = _split_pair(a)
        return i, j

    return from_function(
        f"pair({n})", arrows, [f"({i},{i})" for i in pts],
        d=lambda a: "({0},{0})".format(ij(a)[1]),
        r=lambda a: "({0},{0})".format(ij(a)[0]),
        inv=lambda a: "({1},{0})".format(*ij(a)),
        mul=lambda a, b: f"({ij(a)[0]},{ij(b)[1]})",
    )


def unit_groupoid(n: int) -> FiniteGroupoid:
    """The trivial groupoid whose arrows are exactly the units ``1..n``."""
    pts = [str(i) for i in range(1, n + 1)]
    return from_function(f"units({n})", pts, pts, d=lambda a: a, r=lambda a: a,
                         inv=lambda a: a, mul=lambda a, b: a)


def group_groupoid(group: FiniteGroup, name: str | None = None) -> FiniteGroupoid:
    e = group.identity
    return from_function(name or group.name, group.elements, [e], d=lambda a: e, r=lambda a: e,
                         inv=group.inv, mul=group.mul)


def cyclic(n: int) -> FiniteGroupoid:
    from .groups import cyclic_group
    return group_groupoid(cyclic_group(n), f"cyclic({n})")


def sym(n: int) -> FiniteGroupoid:
    return group_groupoid(symmetric_group(n), f"sym({n})")


def disjoint(g: FiniteGroupoid, h: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union; arrows of the summands are tagged ``1:a`` and ``2:b``."""
    parts = {"1": g, "2": h}

    def split(a):
        tag, rest = a.split(":", 1)
        return parts[tag], tag, rest

    def lift(fn):
        def f(a):
            gg, tag, x = split(a)
            return f"{tag}:{getattr(gg, fn)(x)}"
        return f

    def mul(a, b):
        gg, tag, x = split(a)
        return f"{tag}:{gg.comp(x, split(b)[2])}"

    arrows = [f"1:{a}" for a in g.arrows] + [f"2:{b}" for b in h.arrows]
    units = [f"1:{a}" for a in g.units] + [f"2:{b}" for b in h.units]
    return from_function(f"disjoint({g.name},{h.name})", arrows, units,
                         d=lift("src"), r=lift("tgt"), inv=lift("inv"), mul=mul)


def product(g: FiniteGroupoid, h: FiniteGroupoid) -> FiniteGroupoid:
    """Cartesian product with componentwise structure; arrows are ``(a,b)``."""
    def parts(x):
        return _split_pair(x)

    arrows = [f"({a},{b})" for a in g.arrows for b in h.arrows]
    units = [f"({a},{b})" for a in g.units for b in h.units]

    def comp(x, y):
        a1, b1 = parts(x)
        a2, b2 = parts(y)
        return f"({g.comp(a1, a2)},{h.comp(b1, b2)})"

    return from_function(
        f"product({g.name},{h.name})", arrows, units,
        d=lambda x: "({},{})".format(g.src(parts(x)[0]), h.src(parts(x)[1])),
        r=lambda x: "({},{})".format(g.tgt(parts(x)[0]), h.tgt(parts(x)[1])),
        inv=lambda x: "({},{})".format(g.inv(parts(x)[0]), h.inv(parts(x)[1])),
        mul=comp,
    )


def transformation(group: FiniteGroup, points: Iterable[str],
                   act: Callable[[str, str], str], name: str | None = None) -> FiniteGroupoid:
    """Transformation groupoid of a group action: arrows ``(s,x)`` with d=x, r=s.x."""
    points = list(points)
    e = group.identity

    def unit(x):
        return f"({e},{x})"

    def parts(a):
        return _split_pair(a)

    def mul(a, b):
        s, _ = parts(a)
        t, x = parts(b)
        return f"({group.mul(s, t)},{x})"

    return from_function(
        name or f"transformation({group.name})",
        [f"({s},{x})" for s in group.elements for x in points],
        [unit(x) for x in points],
        d=lambda a: unit(parts(a)[1]),
        r=lambda a: unit(act(*parts(a))),
        inv=lambda a: "({},{})".format(group.inv(parts(a)[0]), act(*parts(a))),
        mul=mul,
    )


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def orbits(g: FiniteGroupoid) -> tuple[tuple[str, ...], ...]:
    """Partition of the unit space into orbits, each sorted, ordered by first member."""
    parent = {u: u for u in g.unit_indices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(len(g)):
        ra, rb = find(int(g.src_idx[a])), find(int(g.tgt_idx[a]))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[str]] = {}
    for u in g.unit_indices:
        groups.setdefault(find(u), []).append(g.arrows[u])
    return tuple(sorted(tuple(sorted(v)) for v in groups.values()))


def _transitive_by_subsets(g: FiniteGroupoid) -> bool:
    units = list(g.unit_indices)
    k = len(units)
    pos = {u: i for i, u in enumerate(units)}
    # reach[i]: bitmask of r(d^{-1}(x_i))
    reach = [0] * k
    for a in range(len(g)):
        reach[pos[int(g.src_idx[a])]] |= 1 << pos[int(g.tgt_idx[a])]
    full = (1 << k) - 1
    for mask in range(1, 1 << k):
        got = 0
        for i in range(k):
            if (mask >> i) & 1:
                got |= reach[i]
        if got != full:
            return False
    return True


def structure_report(g: FiniteGroupoid) -> StructureReport:
    iso = frozenset(g.arrows[i] for i in range(len(g)) if g.src_idx[i] == g.tgt_idx[i])
    orbs = orbits(g)
    minimal = len(orbs) == 1
    if len(g.unit_indices) <= 16:
        transitive = _transitive_by_subsets(g)
    else:
        # r(d^{-1}(U)) is the union of the orbits meeting U, so singletons decide it
        transitive = minimal
    return StructureReport(
        is_effective=iso == frozenset(g.units),
        is_minimal=minimal,
        is_topologically_transitive=transitive,
        isotropy=ArrowSet(g, iso),
        orbit_partition=orbs,
    )


def generate_subgroupoid(g: FiniteGroupoid, seed: Iterable[str] | ArrowSet = (),
                         wide: bool = False) -> ArrowSet:
    """Smallest subset containing ``seed`` (and all units if ``wide``) closed under inv and comp."""
    members = seed.members if isinstance(seed, ArrowSet) else frozenset(seed)
    mask = ArrowSet(g, frozenset(members)).mask()
    if wide:
        mask[list(g.unit_indices)] = True
    return ArrowSet.from_mask(g, _kernels.closure(g.comp_idx, g.inv_idx, mask))


def subgroupoid_lattice(g: FiniteGroupoid, base: ArrowSet, budget: int = 10_000,
                        order=None) -> list[ArrowSet]:
    """Every subgroupoid containing ``base``, by closure-lattice search.

    Starting from the closure of ``base``, each found H is extended by every missing arrow
    and closed again, until no new subgroupoid appears. Every subgroupoid above ``base`` is
    the closure of ``base`` plus finitely many arrows, so the search is exhaustive.
    """
    from .errors import BudgetExceeded

    order = list(order) if order is not None else list(g.arrows)
    start = generate_subgroupoid(g, base)
    found = {start.members: start}
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for a in order:
                if a in h.members:
                    continue
                k = generate_subgroupoid(g, h.members | {a})
                if k.members not in found:
                    if len(found) >= budget:
                        raise BudgetExceeded(f"more than {budget} subgroupoids in the lattice")
                    found[k.members] = k
                    nxt.append(k)
        frontier = nxt
    return sorted(found.values(), key=lambda h: (len(h), h.sorted()))


def is_subgroupoid(u: ArrowSet) -> bool:
    g = u.parent
    idx = u.indices()
    if any(g.inv_idx[i] not in set(idx.tolist()) for i in idx):
        return False
    block = g.comp_idx[np.ix_(idx, idx)]
    prods = set(block[block >= 0].tolist())
    return prods <= set(idx.tolist())


def is_bisection(u: ArrowSet) -> bool:
    idx = u.indices()
    g = u.parent
    s = g.src_idx[idx]
    t = g.tgt_idx[idx]
    return len(set(s.tolist())) == len(idx) and len(set(t.tolist())) == len(idx)


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------

def find_isomorphism(g: FiniteGroupoid, h: FiniteGroupoid, max_units: int = 12
                     ) -> dict[str, str] | None:
    """Exhaustive search for a groupoid isomorphism ``g -> h``.

    Backtracks over unit bijections, then matches arrows hom-set by hom-set while
    checking compatibility with composition. Returns the arrow map or ``None``.
    """
    if len(g) != len(h) or len(g.unit_indices) != len(h.unit_indices):
        return None
    if len(g.unit_indices) > max_units:
        raise ValueError(f"isomorphism search guarded to {max_units} units")

    def homsets(k):
        hs: dict[tuple[int, int], list[int]] = {}
        for a in range(len(k)):
            hs.setdefault((int(k.tgt_idx[a]), int(k.src_idx[a])), []).append(a)
        return hs

    hg, hh = homsets(g), homsets(h)
    gu, hu = list(g.unit_indices), list(h.unit_indices)

    for perm in itertools.permutations(hu):
        umap = dict(zip(gu, perm))
        if any(len(hh.get((umap[y], umap[x]), ())) != len(v) for (y, x), v in hg.items()):
            continue
        order = [a for a in range(len(g)) if a not in umap]
        amap = {u: umap[u] for u in gu}
        used = set(amap.values())
        found = _match_arrows(g, h, order, 0, amap, used, hh, umap)
        if found is not None:
            return {g.arrows[a]: h.arrows[b] for a, b in found.items()}
    return None


def _match_arrows(g, h, order, k, amap, used, hh, umap):
    if k == len(order):
        return dict(amap)
    a = order[k]
    key = (umap[int(g.tgt_idx[a])], umap[int(g.src_idx[a])])
    for b in hh.get(key, ()):
        if b in used:
            continue
        amap[a] = b
        used.add(b)
        if _consistent(g, h, a, amap):
            res = _match_arrows(g, h, order, k + 1, amap, used, hh, umap)
            if res is not None:
                return res
        del amap[a]
        used.discard(b)
    return None


def _consistent(g, h, a, amap) -> bool:
    for x, y in amap.items():
        for p, q in ((a, x), (x, a)):
            c = int(g.comp_idx[p, q])
            if c >= 0 and c in amap:
                if int(h.comp_idx[amap[p], amap[q]]) != amap[c]:
                    return False
    return True
