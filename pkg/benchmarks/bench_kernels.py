"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call per kernel includes compilation and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from groupoidlab import _kernels
from groupoidlab.groupoid import pair, product, cyclic
from groupoidlab.groups import symmetric_group


def cases():
    p4 = pair(4)
    big = product(pair(3), cyclic(4))
    s4 = symmetric_group(4)
    seed = np.zeros(len(big), dtype=np.bool_)
    seed[[1, 7, 20]] = True
    return [
        ("bisection_table pair(4), 2^16 subsets", "bisection_table",
         (p4.src_idx, p4.tgt_idx, len(p4))),
        ("subgroup_masks S4, 2^24 subsets", "subgroup_masks",
         (s4.mul_table, s4.inv_table, np.int64(s4.identity_index))),
        ("associativity product(pair(3),cyclic(4))", "associativity_witness", (big.comp_idx,)),
        ("closure product(pair(3),cyclic(4))", "closure", (big.comp_idx, big.inv_idx, seed)),
    ]


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'case':45s} {'compile':>9s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for label, name, call in cases():
        nb, npf = _kernels.NUMBA_IMPLS[name], _kernels.NUMPY_IMPLS[name]
        t0 = time.perf_counter()
        r1 = nb(*call)
        first = time.perf_counter() - t0
        r2 = npf(*call)
        assert np.array_equal(np.sort(np.asarray(r1)), np.sort(np.asarray(r2))), label
        t_nb = best_of(nb, call, args.repeat)
        t_np = best_of(npf, call, max(1, args.repeat if "S4" not in label else 1))
        print(f"{label:45s} {first:8.3f}s {t_nb * 1e3:8.2f}ms {t_np * 1e3:8.2f}ms "
              f"{t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
