"""Finite groups given by multiplication tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import AxiomViolation

__all__ = ["FiniteGroup", "validate_group", "cyclic_group", "symmetric_group", "klein_group",
           "direct_product", "subgroups"]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    elements: tuple[str, ...]
    mul_table: np.ndarray
    identity_index: int
    inv_table: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.elements == other.elements
                and np.array_equal(self.mul_table, other.mul_table))

    def __hash__(self):
        return hash(self.elements)

    @property
    def identity(self) -> str:
        return self.elements[self.identity_index]

    def index(self, s: str) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise KeyError(f"{s!r} is not an element of group {self.name}") from None

    def mul(self, s: str, t: str) -> str:
        return self.elements[self.mul_table[self.index(s), self.index(t)]]

    def inv(self, s: str) -> str:
        return self.elements[self.inv_table[self.index(s)]]

    def is_subgroup(self, subset) -> bool:
        idx = {self.index(s) for s in subset}
        if self.identity_index not in idx:
            return False
        return all(int(self.inv_table[a]) in idx for a in idx) and all(
            int(self.mul_table[a, b]) in idx for a in idx for b in idx)


def validate_group(name: str, elements, product: dict) -> FiniteGroup:
    """Check the group axioms exhaustively on a product table ``{(s, t): st}``."""
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise AxiomViolation("elements", [e for e in elements if elements.count(e) > 1][:1],
                             "duplicate element")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    if n == 0:
        raise AxiomViolation("identity", (), "empty group")
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
    w = _kernels.associativity_witness(mul)
    if w is not None:
        raise AxiomViolation("associativity", [elements[i] for i in w])
    ident = [e for e in range(n)
             if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
    if not ident:
        raise AxiomViolation("identity", (), "no two-sided identity")
    e = ident[0]
    inv = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero((mul[a] == e) & (mul[:, a] == e))
        if hits.size == 0:
            raise AxiomViolation("inverse", (elements[a],), "no two-sided inverse")
        inv[a] = hits[0]
    return FiniteGroup(name, elements, mul, e, inv)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    els = [str(i) for i in range(n)]
    return validate_group(f"cyclic({n})", els,
                          {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)})


def _perm_name(p) -> str:
    return "".join(str(i + 1) for i in p)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of {1..n} in one-line notation; product is composition ``(st)(i) = s(t(i))``."""
    if not 1 <= n <= 9:
        raise ValueError("sym(n) supports 1 <= n <= 9")
    perms = list(itertools.permutations(range(n)))
    table = {}
    for s in perms:
        for t in perms:
            table[(_perm_name(s), _perm_name(t))] = _perm_name(tuple(s[t[i]] for i in range(n)))
    return validate_group(f"sym({n})", [_perm_name(p) for p in perms], table)


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    els = [f"({a},{b})" for a in g.elements for b in h.elements]
    table = {}
    for a1 in g.elements:
        for b1 in h.elements:
            for a2 in g.elements:
                for b2 in h.elements:
                    table[(f"({a1},{b1})", f"({a2},{b2})")] = f"({g.mul(a1, a2)},{h.mul(b1, b2)})"
    return validate_group(name or f"gproduct({g.name},{h.name})", els, table)


def klein_group() -> FiniteGroup:
    """Z/2 x Z/2 with elements ``(0,0)``, ``(0,1)``, ``(1,0)``, ``(1,1)``."""
    return direct_product(cyclic_group(2), cyclic_group(2), name="klein")


def subgroups(group: FiniteGroup, limit: int = 24) -> list[frozenset[str]]:
    """All subgroups by brute force over element subsets (guarded by ``limit``)."""
    if len(group) > limit:
        raise ValueError(f"|group| = {len(group)} exceeds brute-force limit {limit}")
    masks = _kernels.subgroup_masks(group.mul_table, group.inv_table, group.identity_index)
    out = []
    for m in masks:
        m = int(m)
        out.append(frozenset(group.elements[i] for i in range(len(group)) if (m >> i) & 1))
    return out
