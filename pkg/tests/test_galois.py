import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupoidlab.algebra import delta, element, is_intertwiner, reduced_norm
from groupoidlab.errors import (EffectivenessWarning, GradingNotCocyclic, HypothesisWarning,
                                NotACocycle, NotAPartition, NotASubgroupoid)
from groupoidlab.galois import (SpectralGrading, cocycle_from_spectral,
                                enumerate_intermediate_subgroupoids, fourier_component,
                                grading_invariants, image_subgroup_check, kernel_is_minimal,
                                parity_cocycle, projection_cocycle, remark_counterexample,
                                spectral_grading_of_cocycle, trivial_cocycle, validate_cocycle,
                                verify_fourier, verify_galois_bijection)
from groupoidlab.groupoid import ArrowSet, generate_subgroupoid, is_subgroupoid, pair
from groupoidlab.groups import cyclic_group, klein_group, subgroups, symmetric_group
from groupoidlab.submodule import module_of_open_set
from groupoidlab.subspace import span_reduce, zero_subspace

from strategies import bisection_elements, elements

COCYCLES = [projection_cocycle(pair(2), cyclic_group(2)),
            projection_cocycle(pair(2), cyclic_group(3)),
            projection_cocycle(pair(3), cyclic_group(2)),
            parity_cocycle(2), parity_cocycle(3), trivial_cocycle(pair(2)),
            remark_counterexample()[2]]


def test_projection_cocycle_valid():
    c = projection_cocycle(pair(3), cyclic_group(4))
    assert c("((1,2),3)") == "3"
    assert len(c.kernel()) == 9


def test_order_four_label_is_not_a_cocycle():
    g = pair(2)
    z4 = cyclic_group(4)
    with pytest.raises(NotACocycle):
        validate_cocycle(g, z4, {"(1,1)": "0", "(2,2)": "0", "(1,2)": "1", "(2,1)": "1"})
    with pytest.raises(NotACocycle):
        validate_cocycle(g, z4, {"(1,1)": "0", "(2,2)": "0", "(1,2)": "1"})


def test_trivial_cocycle_valid():
    c = trivial_cocycle(pair(3))
    assert c.image() == {c.group.identity}


@pytest.mark.parametrize("c", COCYCLES, ids=lambda c: c.name)
def test_grading_roundtrip(c):
    grading = spectral_grading_of_cocycle(c)
    assert all(grading_invariants(grading).values())
    assert sum(grading.dims().values()) == len(c.groupoid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EffectivenessWarning)
        back = cocycle_from_spectral(grading)
    assert back.labels == c.labels


def test_hand_built_grading_gives_parity():
    g = pair(2)
    z2 = cyclic_group(2)
    a0 = span_reduce([delta(g, "(1,1)"), delta(g, "(2,2)")])
    a1 = span_reduce([delta(g, "(1,2)"), delta(g, "(2,1)")])
    c = cocycle_from_spectral(SpectralGrading(g, z2, {"0": a0, "1": a1}))
    assert c == parity_cocycle(2)


def test_overlapping_fibres_are_not_a_partition():
    g = pair(2)
    z2 = cyclic_group(2)
    full = module_of_open_set(g.everything())
    d = module_of_open_set(g.unit_set())
    with pytest.raises(NotAPartition):
        cocycle_from_spectral(SpectralGrading(g, z2, {"0": full, "1": d}))
    with pytest.raises(NotAPartition):
        cocycle_from_spectral(SpectralGrading(g, z2, {"0": d, "1": zero_subspace(g)}))


@given(st.sampled_from(COCYCLES).flatmap(
    lambda c: st.tuples(st.just(c), st.sampled_from(c.group.elements), elements(c.groupoid))))
def test_fourier_components(args):
    c, s, f = args
    grading = spectral_grading_of_cocycle(c)
    phi = fourier_component(grading, s, f)
    assert fourier_component(grading, s, phi) == phi
    assert all(c(a) == s for a in phi.as_dict())
    assert reduced_norm(phi) <= reduced_norm(f) + 1e-9
    total = element(c.groupoid, {})
    for t in c.group.elements:
        total = total + fourier_component(grading, t, f)
    assert total == f


@given(st.sampled_from(COCYCLES).flatmap(lambda c: st.tuples(st.just(c),
                                                             bisection_elements(c.groupoid))))
def test_fourier_preserves_intertwiners(args):
    c, n = args
    grading = spectral_grading_of_cocycle(c)
    if is_intertwiner(n):
        assert all(is_intertwiner(fourier_component(grading, s, n)) for s in c.group.elements)


def test_fourier_delta_examples():
    c = parity_cocycle(2)
    grading = spectral_grading_of_cocycle(c)
    assert not fourier_component(grading, "0", delta(c.groupoid, "(1,2)")).nonzero()
    assert fourier_component(grading, "1", delta(c.groupoid, "(1,2)")) == delta(c.groupoid, "(1,2)")


def test_fourier_rejects_non_cocyclic_grading():
    g = pair(2)
    bad = span_reduce([delta(g, "(1,1)") + delta(g, "(1,2)")])
    grading = SpectralGrading(g, cyclic_group(2), {"0": bad, "1": zero_subspace(g)})
    with pytest.raises(GradingNotCocyclic):
        fourier_component(grading, "0", delta(g, "(1,1)"))


def test_verify_fourier_report():
    c = projection_cocycle(pair(2), cyclic_group(3))
    g = c.groupoid
    els = [element(g, {a: k + 1 for k, a in enumerate(g.arrows)}), delta(g, "((1,2),1)")]
    rep = verify_fourier(spectral_grading_of_cocycle(c), els)
    assert rep["failures"] == [] and rep["elements"] == 2


@pytest.mark.parametrize("n,grp,count", [(3, cyclic_group(4), 3), (2, symmetric_group(3), 6),
                                         (2, klein_group(), 5)])
def test_galois_bijection(n, grp, count):
    c = projection_cocycle(pair(n), grp)
    rep = verify_galois_bijection(c)
    assert rep["subgroups"] == rep["intermediate_subgroupoids"] == count
    assert rep["bijection"] and not rep["c_cinv_failures"] and not rep["cinv_c_failures"]
    for h in enumerate_intermediate_subgroupoids(c):
        img, ok = image_subgroup_check(c, h)
        assert ok and c.preimage(img) == h
    for lam in subgroups(grp):
        assert c.image(c.preimage(lam)) == lam


def test_enumeration_is_order_independent():
    c = projection_cocycle(pair(2), symmetric_group(3))
    a = enumerate_intermediate_subgroupoids(c)
    b = enumerate_intermediate_subgroupoids(c, order=list(reversed(c.groupoid.arrows)))
    assert set(a) == set(b)
    assert all(is_subgroupoid(h) and c.kernel().issubset(h) for h in a)


def test_klein_image_counterexample():
    g, k, c = remark_counterexample()
    img, ok = image_subgroup_check(c, g.everything())
    assert img == {"(0,0)", "(1,0)", "(0,1)"} and not ok
    assert not kernel_is_minimal(c)
    with pytest.warns(HypothesisWarning):
        rep = verify_galois_bijection(c)
    assert not rep["surjective"] and not rep["bijection"]
    assert rep["forward_not_subgroup"]
    assert spectral_grading_of_cocycle(c).dims() == {"(0,0)": 2, "(0,1)": 1, "(1,0)": 1,
                                                     "(1,1)": 0}


def test_image_check_errors_and_warnings():
    c = parity_cocycle(2)
    g = c.groupoid
    with pytest.raises(NotASubgroupoid):
        image_subgroup_check(c, ArrowSet(g, frozenset({"(1,2)"})))
    h = generate_subgroupoid(g, [])
    with pytest.warns(HypothesisWarning):
        image_subgroup_check(c, h)
