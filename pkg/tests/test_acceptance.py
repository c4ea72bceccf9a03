"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
import warnings
from fractions import Fraction

import pytest

from groupoidlab.algebra import (is_intertwiner, is_normalizer, open_support, reduced_norm,
                                 sup_norm)
from groupoidlab.corpus import data_path, default_corpus
from groupoidlab.galois import (cocycle_from_spectral, grading_invariants,
                                spectral_grading_of_cocycle, verify_fourier,
                                verify_galois_bijection)
from groupoidlab.groupoid import find_isomorphism, is_bisection, pair, structure_report
from groupoidlab.groups import cyclic_group, subgroups, symmetric_group
from groupoidlab.galois import enumerate_intermediate_subgroupoids, projection_cocycle
from groupoidlab.parsing import parse_expression
from groupoidlab.sampling import child_rng, random_bisection, random_element, random_normalizer
from groupoidlab.scalars import QQi
from groupoidlab.semigroup import canonical_action, germ_groupoid, translation_action
from groupoidlab.submodule import (commutant_of_diagonal, diagonal_subspace, left_module_closure,
                                   module_of_open_set, normalizer_cutoff, open_set_of_subspace,
                                   verify_psi_isomorphism)
from groupoidlab.suite import SuiteConfig, run_checks

SEED = 42
TOL = 1e-9
CORPUS = default_corpus()
GROUPOIDS = [i.obj for i in CORPUS if i.kind == "groupoid"]
EFFECTIVE = [g for g in GROUPOIDS if structure_report(g).is_effective]
COCYCLES = [i.obj for i in CORPUS if i.kind == "cocycle"]


LINES: list[str] = []  # printed by the terminal summary hook in conftest.py


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} :: {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_image_counterexample():
    t0 = time.perf_counter()
    (rep,) = run_checks(["counterexample"], SuiteConfig(instances=[data_path("remark.txt")]))
    dt = time.perf_counter() - t0
    w = rep.witness
    ok = (rep.status == "pass" and w["image_size"] == 3 and w["is_subgroup"] is False
          and w["image"] == frozenset({"(0,0)", "(1,0)", "(0,1)"}) and dt < 1.0)
    report(1, "image not a subgroup", ok,
           f"|c(G)|={w['image_size']} is_subgroup={w['is_subgroup']} {dt:.3f}s (<1s)")


def test_criterion_02_galois_bijection():
    t0 = time.perf_counter()
    details, ok = [], True
    for g, grp, want in [(pair(3), cyclic_group(4), 3), (pair(2), symmetric_group(3), 6)]:
        c = projection_cocycle(g, grp)
        hs = enumerate_intermediate_subgroupoids(c)
        subs = subgroups(grp)
        forward = all(c.preimage(c.image(h)) == h for h in hs)
        backward = all(c.image(c.preimage(lam)) == lam for lam in subs)
        rep = verify_galois_bijection(c)
        ok &= len(hs) == len(subs) == want and forward and backward and rep["bijection"]
        details.append(f"{c.name}: {len(hs)} subgroupoids, {len(subs)} subgroups")
    dt = time.perf_counter() - t0
    ok &= dt < 30
    report(2, "Galois bijection", ok, "; ".join(details) + f"; {dt:.2f}s (<30s)")


def test_criterion_03_submodule_roundtrip():
    t0 = time.perf_counter()
    failures = 0
    for trial in range(200):
        g = EFFECTIVE[trial % len(EFFECTIVE)]
        rng = child_rng(SEED, "criterion-3", str(trial))
        gens = [random_element(g, rng, random_bisection(g, rng))
                for _ in range(int(rng.integers(1, 4)))]
        m = left_module_closure(gens, parent=g)
        if m != module_of_open_set(open_set_of_subspace(m)):
            failures += 1
    dt = time.perf_counter() - t0
    report(3, "submodule roundtrip", failures == 0 and dt < 30,
           f"200 trials over {len(EFFECTIVE)} effective groupoids, {failures} failures, "
           f"{dt:.2f}s (<30s)")


def test_criterion_04_normalizer_iff_bisection():
    discrepancies = not_intertwining = normalizers = 0
    for k in range(500):
        g = EFFECTIVE[k % len(EFFECTIVE)]
        rng = child_rng(SEED, "criterion-4", str(k))
        n = random_normalizer(g, rng) if k % 2 else random_element(g, rng)
        is_n = is_normalizer(n)
        discrepancies += is_n != is_bisection(open_support(n))
        if is_n:
            normalizers += 1
            not_intertwining += not is_intertwiner(n)
    report(4, "normalizer iff bisection support", discrepancies == 0 and not_intertwining == 0,
           f"500 elements, {normalizers} normalizers, {discrepancies} discrepancies, "
           f"{not_intertwining} non-intertwining normalizers")


def test_criterion_05_slices_are_bisections():
    t0 = time.perf_counter()
    rep = verify_psi_isomorphism(pair(3), max_bits=9, samples=50, rng_seed=SEED)
    dt = time.perf_counter() - t0
    ok = (rep["mode"] == "exhaustive" and rep["subsets_checked"] == 512
          and rep["slices"] == rep["bisections"] == 34 and rep["products_checked"] == 34 * 34
          and rep["injective"] and dt < 60)
    report(5, "slices = bisections on pair(3)", ok,
           f"{rep['subsets_checked']} subsets, {rep['slices']} slices, "
           f"{rep['products_checked']} products, {dt:.2f}s (<60s)")


def test_criterion_06_masa():
    mismatches = []
    for g in GROUPOIDS + [c.groupoid for c in COCYCLES]:
        is_masa = commutant_of_diagonal(g) == diagonal_subspace(g)
        if is_masa != structure_report(g).is_effective:
            mismatches.append(g.name)
    c2 = parse_expression("cyclic(2)")
    larger = commutant_of_diagonal(c2).dim > diagonal_subspace(c2).dim
    effective_ok = all(commutant_of_diagonal(g) == diagonal_subspace(g) for g in EFFECTIVE)
    report(6, "masa criterion", not mismatches and larger and effective_ok,
           f"{len(EFFECTIVE)} effective groupoids with commutant = D, cyclic(2) strictly larger: "
           f"{larger}, mismatches: {mismatches}")


def test_criterion_07_norm_coincidence():
    worst_gap, worst_excess = 0.0, -1.0
    for k in range(100):
        g = GROUPOIDS[k % len(GROUPOIDS)]
        rng = child_rng(SEED, "criterion-7", str(k))
        n = random_normalizer(g, rng)
        worst_gap = max(worst_gap, abs(reduced_norm(n) - sup_norm(n)))
        f = random_element(g, rng)
        worst_excess = max(worst_excess, sup_norm(f) - reduced_norm(f))
    report(7, "norm coincidence", worst_gap <= TOL and worst_excess <= TOL,
           f"max |red - sup| on bisections = {worst_gap:.2e}, "
           f"max (sup - red) on arbitrary = {worst_excess:.2e} (tol {TOL})")


def test_criterion_08_normalizer_cutoff():
    worst = float("-inf")
    support_ok = True
    nontrivial = 0
    for k in range(50):
        g = EFFECTIVE[k % len(EFFECTIVE)]
        rng = child_rng(SEED, "criterion-8", str(k))
        m = random_normalizer(g, rng).scale(QQi(Fraction(1, 10 ** (k % 3))))
        for eps in (0.01, 0.1, 1.0):
            fm = normalizer_cutoff(m, eps)
            worst = max(worst, reduced_norm(fm - m) - eps)
            support_ok &= open_support(fm).issubset(open_support(m))
            nontrivial += fm != m
    report(8, "normalizer cutoff", worst <= TOL and support_ok,
           f"50 normalizers x 3 eps, max(err - eps) = {worst:.2e}, supports contained: "
           f"{support_ok}, {nontrivial} cutoffs removed mass")


def test_criterion_09_germ_construction():
    g1 = germ_groupoid(canonical_action(2))
    g2 = germ_groupoid(translation_action(3))
    t = parse_expression("transformation(cyclic(3),regular)")
    iso1 = find_isomorphism(g1, pair(2))
    iso2 = find_isomorphism(g2, t)
    report(9, "germ construction", iso1 is not None and iso2 is not None and len(g2) == 9,
           f"germ(I_2) ~ pair(2): {iso1 is not None}; germ(Z/3) ~ transformation "
           f"({len(g2)} arrows): {iso2 is not None}")


def test_criterion_10_spectral_roundtrip():
    bad = []
    samples = 0
    for c in COCYCLES:
        grading = spectral_grading_of_cocycle(c)
        if not all(grading_invariants(grading).values()):
            bad.append((c.name, "invariants"))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if cocycle_from_spectral(grading).labels != c.labels:
                bad.append((c.name, "roundtrip"))
        rng = child_rng(SEED, "criterion-10", c.name)
        els = [random_element(c.groupoid, rng) for _ in range(3)] + \
              [random_normalizer(c.groupoid, rng) for _ in range(3)]
        samples += len(els)
        rep = verify_fourier(grading, els, TOL)
        if rep["failures"]:
            bad.append((c.name, rep["failures"]))
    report(10, "spectral roundtrip", not bad,
           f"{len(COCYCLES)} cocycles, {samples} Fourier samples, failures: {bad}")


def test_full_suite_under_two_minutes():
    t0 = time.perf_counter()
    out = subprocess.run([sys.executable, "-m", "groupoidlab", "suite", "--seed", str(SEED)],
                         capture_output=True, text=True)
    dt = time.perf_counter() - t0
    lines = out.stdout.splitlines()[1:]
    fails = [ln for ln in lines if ln.split()[2] == "fail"]
    report("suite", "default corpus", out.returncode == 0 and not fails and dt < 120,
           f"{len(lines)} reports, exit {out.returncode}, {dt:.1f}s (<120s)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
