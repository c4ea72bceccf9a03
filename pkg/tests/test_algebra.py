import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupoidlab.algebra import (convolve, delta, diagonal_basis, element, evaluate_j,
                                 involution, is_intertwiner, is_normalizer, l1_norm,
                                 open_support, reduced_norm, regular_representation, sup_norm,
                                 unit_indicator, zero)
from groupoidlab.errors import ParentMismatch
from groupoidlab.groupoid import cyclic, is_bisection, pair
from groupoidlab.scalars import I, ONE, QQi

from strategies import (EFFECTIVE_GROUPOIDS, SMALL_GROUPOIDS, bisection_elements, elements,
                        groupoids, scalars)


def pair_matrix(f, n):
    """Oracle: C*(pair(n)) is M_n with f -> [f((i,j))]."""
    return np.array([[complex(f[f"({i},{j})"]) for j in range(1, n + 1)]
                     for i in range(1, n + 1)])


def full_left_matrix(f):
    """Oracle: left convolution by f on l2(G), built from the string-level comp table."""
    g = f.parent
    m = np.zeros((len(g), len(g)), dtype=complex)
    for bi, b in enumerate(g.arrows):
        for a in g.arrows:
            if g.src(a) == g.tgt(b):
                m[g.index(g.comp(a, b)), bi] += complex(f[a])
    return m


def cyclic_norm(f, n):
    """Oracle: the norm in C*(Z/n) is the largest character value."""
    coeffs = [complex(f[str(k)]) for k in range(n)]
    return max(abs(sum(c * np.exp(2j * np.pi * j * k / n) for k, c in enumerate(coeffs)))
               for j in range(n))


def test_basic_convolution_examples():
    g = pair(2)
    assert convolve(delta(g, "(1,2)"), delta(g, "(2,1)")) == delta(g, "(1,1)")
    assert convolve(delta(g, "(1,2)"), delta(g, "(1,2)")) == zero(g)
    assert involution(delta(g, "(1,2)", I)) == delta(g, "(2,1)", -I)
    u = unit_indicator(g)
    f = element(g, {"(1,2)": QQi(3, 1), "(2,2)": 2})
    assert convolve(u, f) == f == convolve(f, u)


def test_parent_mismatch():
    with pytest.raises(ParentMismatch):
        convolve(delta(pair(2), "(1,1)"), delta(pair(3), "(1,1)"))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_norm_of_all_ones_on_pair(n):
    g = pair(n)
    f = element(g, {a: 1 for a in g.arrows})
    assert abs(reduced_norm(f) - n) < 1e-9


def test_known_norms():
    g = pair(2)
    assert abs(reduced_norm(delta(g, "(1,1)") + delta(g, "(1,2)")) - math.sqrt(2)) < 1e-12
    c2 = cyclic(2)
    assert abs(reduced_norm(delta(c2, "0") - delta(c2, "1")) - 2) < 1e-12
    assert abs(reduced_norm(delta(c2, "0") + delta(c2, "1", I)) - math.sqrt(2)) < 1e-12


@given(st.integers(2, 4).flatmap(lambda n: elements(pair(n))))
def test_pair_algebra_is_matrix_algebra(f):
    n = len(f.parent.units)
    F = pair_matrix(f, n)
    assert abs(reduced_norm(f) - np.linalg.norm(F, 2)) < 1e-9
    assert np.allclose(pair_matrix(involution(f), n), F.conj().T)
    assert np.allclose(pair_matrix(convolve(f, f), n), F @ F)


@given(st.integers(2, 5).flatmap(lambda n: elements(cyclic(n))))
def test_group_algebra_norm_by_characters(f):
    n = len(f.parent)
    assert abs(reduced_norm(f) - cyclic_norm(f, n)) < 1e-9


@given(groupoids.flatmap(elements))
def test_norm_matches_full_left_matrix(f):
    assert abs(reduced_norm(f) - np.linalg.norm(full_left_matrix(f), 2)) < 1e-9


@given(groupoids.flatmap(lambda g: st.tuples(elements(g), elements(g), elements(g))), scalars)
def test_star_algebra_laws(fgh, lam):
    f, g, h = fgh
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    assert convolve(f, g + h) == convolve(f, g) + convolve(f, h)
    assert involution(convolve(f, g)) == convolve(involution(g), involution(f))
    assert involution(involution(f)) == f
    assert involution(f.scale(lam)) == involution(f).scale(lam.conjugate())
    assert convolve(f.scale(lam), g) == convolve(f, g).scale(lam)


@given(groupoids.flatmap(lambda g: st.tuples(elements(g), elements(g))))
def test_norm_inequalities(fg):
    f, g = fg
    nf = reduced_norm(f)
    assert abs(reduced_norm(convolve(involution(f), f)) - nf ** 2) <= 1e-9 * max(1, nf ** 2)
    assert reduced_norm(convolve(f, g)) <= nf * reduced_norm(g) + 1e-9 * max(1, nf)
    assert sup_norm(f) <= nf + 1e-9
    assert nf <= l1_norm(f) + 1e-9


@given(groupoids.flatmap(elements))
def test_evaluation_map_recovers_coefficients(f):
    assert all(evaluate_j(f, a) == f[a] for a in f.parent.arrows)


@given(groupoids.flatmap(bisection_elements))
def test_bisection_elements_have_sup_norm(n):
    assert abs(reduced_norm(n) - sup_norm(n)) < 1e-9
    assert is_normalizer(n)


@given(st.sampled_from(EFFECTIVE_GROUPOIDS).flatmap(lambda g: elements(g, 0.4)))
def test_normalizer_iff_bisection_on_effective(f):
    assert is_normalizer(f) == is_bisection(open_support(f))
    if is_normalizer(f):
        assert is_intertwiner(f)


def test_effectiveness_is_needed():
    # a unitary in the group algebra of Z/2 normalizes D = C but its support is not a bisection
    g = cyclic(2)
    u = delta(g, "0") + delta(g, "1", I)
    assert is_normalizer(u)
    assert not is_bisection(open_support(u))


def test_regular_representation_blocks():
    g = pair(3)
    blocks = regular_representation(delta(g, "(1,2)"))
    assert [b.unit for b in blocks] == list(g.units)
    assert all(b.matrix.shape == (3, 3) for b in blocks)
    # lambda(delta_(1,2)) sends delta_(2,x) to delta_(1,x)
    b = blocks[0]
    col = b.basis.index("(2,1)")
    row = b.basis.index("(1,1)")
    assert b.matrix[row, col] == 1 and abs(b.matrix).sum() == 1


def test_diagonal_basis_and_intertwiner():
    g = pair(3)
    assert len(diagonal_basis(g)) == 3
    assert is_intertwiner(delta(g, "(1,2)") + delta(g, "(2,3)", QQi(2)))
    assert not is_intertwiner(delta(g, "(1,2)") + delta(g, "(1,3)"))
