"""Seeded random streams and random algebra elements for the property checks."""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, element
from .groupoid import ArrowSet, FiniteGroupoid
from .scalars import QQi

__all__ = ["child_rng", "random_scalar", "random_element", "random_bisection",
           "random_subset", "random_normalizer"]


def child_rng(seed: int, *names: str) -> np.random.Generator:
    """Independent generator derived from ``seed`` and a path of names (e.g. check, instance)."""
    keys = [zlib.crc32(n.encode("utf-8")) for n in names]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *keys]))


def _rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))


def random_scalar(rng: np.random.Generator, nonzero: bool = True) -> QQi:
    while True:
        re = _rational(rng)
        im = _rational(rng) if rng.random() < 0.5 else Fraction(0)
        c = QQi(re, im)
        if c or not nonzero:
            return c


def random_subset(g: FiniteGroupoid, rng: np.random.Generator, p: float | None = None) -> ArrowSet:
    if p is None:
        p = float(rng.uniform(0.1, 0.7))
    keep = rng.random(len(g)) < p
    return ArrowSet(g, frozenset(a for a, k in zip(g.arrows, keep) if k))


def random_bisection(g: FiniteGroupoid, rng: np.random.Generator, p: float | None = None
                     ) -> ArrowSet:
    """Greedy random bisection: scan arrows in random order, keep each with probability ``p``
    when it does not collide with an already chosen source or target."""
    if p is None:
        p = float(rng.uniform(0.3, 1.0))
    used_s, used_t, chosen = set(), set(), []
    for i in rng.permutation(len(g)):
        s, t = int(g.src_idx[i]), int(g.tgt_idx[i])
        if s in used_s or t in used_t or rng.random() >= p:
            continue
        used_s.add(s)
        used_t.add(t)
        chosen.append(g.arrows[i])
    return ArrowSet(g, frozenset(chosen))


def random_element(g: FiniteGroupoid, rng: np.random.Generator,
                   support: ArrowSet | None = None) -> AlgebraElement:
    if support is None:
        support = random_subset(g, rng)
    return element(g, {a: random_scalar(rng) for a in support})


def random_normalizer(g: FiniteGroupoid, rng: np.random.Generator) -> AlgebraElement:
    """Random nonzero scalars on a random bisection."""
    return random_element(g, rng, random_bisection(g, rng))
