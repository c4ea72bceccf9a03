"""Integer kernels behind the combinatorial enumerations.

Every kernel has two implementations: a loop version compiled with numba and a
vectorised numpy version. ``GROUPOIDLAB_NO_NUMBA=1`` selects the numpy path
(the same path is used automatically when numba cannot be imported). Both paths
return identical results; ``tests/test_kernels.py`` checks parity and
``benchmarks/bench_kernels.py`` times them against each other.

Conventions: structure tables are ``int64`` arrays, ``comp[a, b] == -1`` marks a
non-composable pair, subsets of ``n <= 62`` objects are ``int64`` bitmasks.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("GROUPOIDLAB_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by GROUPOIDLAB_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"

# chunk of subset masks handled per vectorised numpy step
_CHUNK = 1 << 16


# --------------------------------------------------------------------------
# bisection masks
# --------------------------------------------------------------------------

@njit(cache=True)
def _bisection_table_nb(src, tgt, n):
    total = 1 << n
    out = np.zeros(total, dtype=np.bool_)
    for mask in range(total):
        seen_src = 0
        seen_tgt = 0
        ok = True
        for a in range(n):
            if (mask >> a) & 1:
                bs = np.int64(1) << src[a]
                bt = np.int64(1) << tgt[a]
                if (seen_src & bs) or (seen_tgt & bt):
                    ok = False
                    break
                seen_src |= bs
                seen_tgt |= bt
        out[mask] = ok
    return out


def _bisection_table_np(src, tgt, n):
    total = 1 << n
    out = np.empty(total, dtype=np.bool_)
    units = np.unique(np.concatenate([src, tgt])) if n else np.array([], dtype=np.int64)
    fibre_masks = []
    for u in units:
        fibre_masks.append(int(np.sum(np.int64(1) << np.flatnonzero(src == u).astype(np.int64))))
        fibre_masks.append(int(np.sum(np.int64(1) << np.flatnonzero(tgt == u).astype(np.int64))))
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        ok = np.ones(masks.shape, dtype=np.bool_)
        for fm in fibre_masks:
            bits = masks & np.int64(fm)
            ok &= (bits & (bits - 1)) == 0
        out[start:start + masks.size] = ok
    return out


def bisection_table(src: np.ndarray, tgt: np.ndarray) -> np.ndarray:
    """Boolean array over all ``2**n`` subset masks: is the subset a bisection?"""
    n = int(src.shape[0])
    if n > 30:
        raise ValueError(f"refusing to enumerate 2**{n} subsets")
    src = np.ascontiguousarray(src, dtype=np.int64)
    tgt = np.ascontiguousarray(tgt, dtype=np.int64)
    if HAVE_NUMBA:
        return _bisection_table_nb(src, tgt, n)
    return _bisection_table_np(src, tgt, n)


# --------------------------------------------------------------------------
# brute-force subgroup masks
# --------------------------------------------------------------------------

@njit(cache=True)
def _subgroup_masks_nb(mul, inv, identity):
    n = mul.shape[0]
    total = np.int64(1) << n
    found = np.zeros(1024, dtype=np.int64)
    count = 0
    for mask in range(total):
        if not (mask >> identity) & 1:
            continue
        ok = True
        for a in range(n):
            if not (mask >> a) & 1:
                continue
            if not (mask >> inv[a]) & 1:
                ok = False
                break
            for b in range(n):
                if (mask >> b) & 1 and not (mask >> mul[a, b]) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            if count == found.shape[0]:
                bigger = np.zeros(2 * count, dtype=np.int64)
                bigger[:count] = found
                found = bigger
            found[count] = mask
            count += 1
    return found[:count]


def _subgroup_masks_np(mul, inv, identity):
    n = mul.shape[0]
    total = 1 << n
    bit = np.int64(1) << np.arange(n, dtype=np.int64)
    out = []
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        masks = masks[(masks & bit[identity]) != 0]
        has = [(masks & bit[a]) != 0 for a in range(n)]
        ok = np.ones(masks.shape, dtype=np.bool_)
        for a in range(n):
            ok &= ~has[a] | has[int(inv[a])]
            for b in range(n):
                ok &= ~(has[a] & has[b]) | has[int(mul[a, b])]
        out.append(masks[ok])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def subgroup_masks(mul: np.ndarray, inv: np.ndarray, identity: int) -> np.ndarray:
    """Sorted bitmasks of every subset closed under product and inverse containing the identity."""
    n = int(mul.shape[0])
    if n > 30:
        raise ValueError(f"refusing to enumerate 2**{n} subsets")
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    if HAVE_NUMBA:
        return _subgroup_masks_nb(mul, inv, np.int64(identity))
    return _subgroup_masks_np(mul, inv, int(identity))


# --------------------------------------------------------------------------
# associativity scan
# --------------------------------------------------------------------------

@njit(cache=True)
def _assoc_witness_nb(comp):
    n = comp.shape[0]
    for a in range(n):
        for b in range(n):
            ab = comp[a, b]
            if ab < 0:
                continue
            for c in range(n):
                bc = comp[b, c]
                if bc < 0:
                    continue
                if comp[ab, c] != comp[a, bc] or comp[ab, c] < 0:
                    return np.array([a, b, c], dtype=np.int64)
    return np.array([-1, -1, -1], dtype=np.int64)


def _assoc_witness_np(comp):
    n = comp.shape[0]
    for a in range(n):
        row = comp[a]
        bs = np.flatnonzero(row >= 0)
        if bs.size == 0:
            continue
        ab = row[bs]
        bc = comp[bs]
        left = np.where(bc >= 0, comp[ab][:, :], -1)
        right = np.where(bc >= 0, row[np.where(bc >= 0, bc, 0)], -1)
        bad = (bc >= 0) & ((left != right) | (left < 0))
        if bad.any():
            i, c = np.argwhere(bad)[0]
            return np.array([a, bs[i], c], dtype=np.int64)
    return np.array([-1, -1, -1], dtype=np.int64)


def associativity_witness(comp: np.ndarray) -> tuple[int, int, int] | None:
    """First composable triple ``(a, b, c)`` where ``(ab)c != a(bc)``, or ``None``."""
    comp = np.ascontiguousarray(comp, dtype=np.int64)
    w = _assoc_witness_nb(comp) if HAVE_NUMBA else _assoc_witness_np(comp)
    if w[0] < 0:
        return None
    return int(w[0]), int(w[1]), int(w[2])


# --------------------------------------------------------------------------
# subgroupoid closure
# --------------------------------------------------------------------------

@njit(cache=True)
def _closure_nb(comp, inv, seed):
    n = comp.shape[0]
    member = seed.copy()
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for a in range(n):
        if member[a]:
            stack[top] = a
            top += 1
    # members already processed, in processing order
    done = np.empty(n, dtype=np.int64)
    ndone = 0
    while top > 0:
        top -= 1
        a = stack[top]
        cands = np.empty(2 * ndone + 2, dtype=np.int64)
        k = 0
        cands[k] = inv[a]
        k += 1
        cands[k] = comp[a, a]
        k += 1
        for i in range(ndone):
            b = done[i]
            cands[k] = comp[a, b]
            k += 1
            cands[k] = comp[b, a]
            k += 1
        done[ndone] = a
        ndone += 1
        for i in range(k):
            c = cands[i]
            if c >= 0 and not member[c]:
                member[c] = True
                stack[top] = c
                top += 1
    return member


def _closure_np(comp, inv, seed):
    member = seed.copy()
    while True:
        idx = np.flatnonzero(member)
        block = comp[np.ix_(idx, idx)]
        new = member.copy()
        new[block[block >= 0]] = True
        new[inv[idx]] = True
        if np.array_equal(new, member):
            return member
        member = new


def closure(comp: np.ndarray, inv: np.ndarray, seed: np.ndarray) -> np.ndarray:
    """Smallest superset of the boolean ``seed`` closed under ``comp`` and ``inv``."""
    comp = np.ascontiguousarray(comp, dtype=np.int64)
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    seed = np.ascontiguousarray(seed, dtype=np.bool_)
    if HAVE_NUMBA:
        return _closure_nb(comp, inv, seed)
    return _closure_np(comp, inv, seed)


# explicit handles for parity tests and benchmarks
NUMBA_IMPLS = {
    "bisection_table": _bisection_table_nb,
    "subgroup_masks": _subgroup_masks_nb,
    "associativity_witness": _assoc_witness_nb,
    "closure": _closure_nb,
}
NUMPY_IMPLS = {
    "bisection_table": _bisection_table_np,
    "subgroup_masks": _subgroup_masks_np,
    "associativity_witness": _assoc_witness_np,
    "closure": _closure_np,
}
