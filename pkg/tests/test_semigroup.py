from math import comb, factorial

import pytest

from groupoidlab.errors import AxiomViolation, CoverageFailure, NotAHomomorphism
from groupoidlab.groupoid import find_isomorphism, pair, transformation, unit_groupoid
from groupoidlab.groups import cyclic_group
from groupoidlab.semigroup import (canonical_action, check_polycyclic_relations, germ_classes,
                                   germ_groupoid, group_semigroup, symmetric_inverse_monoid,
                                   translation_action, trivial_action, validate_action,
                                   validate_inverse_semigroup)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetric_inverse_monoid_size(n):
    s = symmetric_inverse_monoid(n)
    assert len(s) == sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    assert len(s.idempotents) == 2 ** n


def test_symmetric_inverse_monoid_products():
    s = symmetric_inverse_monoid(2)
    assert s.mul("2-", "-1") == "-2"   # 2 -> 1 -> 2 applied right to left
    assert s.mul("-1", "2-") == "1-"
    assert s.star("2-") == "-1"
    assert s.mul("1-", "-2") == "--"


def test_inverse_semigroup_validation_failures():
    band = ["a", "b"]
    left_zero = {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
    with pytest.raises(AxiomViolation):
        validate_inverse_semigroup("lz", band, left_zero, {"a": "a", "b": "b"})
    z2 = {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}
    with pytest.raises(AxiomViolation):
        validate_inverse_semigroup("bad-star", ["e", "g"], z2, {"e": "e", "g": "e"})
    assert len(validate_inverse_semigroup("z2", ["e", "g"], z2, {"e": "e", "g": "g"})) == 2


def test_action_validation_failures():
    s = group_semigroup(cyclic_group(2))
    with pytest.raises(AxiomViolation):
        validate_action(s, ["p", "q"], {"0": {"p": "p", "q": "q"}, "1": {"p": "p", "q": "p"}})
    with pytest.raises(NotAHomomorphism):
        validate_action(s, ["p", "q"], {"0": {"p": "p", "q": "q"}, "1": {"p": "q"}})
    one = validate_inverse_semigroup("one", ["1"], {("1", "1"): "1"}, {"1": "1"})
    with pytest.raises(CoverageFailure):
        validate_action(one, ["p", "q"], {"1": {"p": "p"}})


def test_germ_of_canonical_action_is_pair_groupoid():
    act = canonical_action(2)
    classes = germ_classes(act)
    assert len(classes) == 8
    assert len(set(classes.values())) == 4
    g = germ_groupoid(act)
    assert len(g) == 4 and find_isomorphism(g, pair(2)) is not None
    assert find_isomorphism(germ_groupoid(canonical_action(3)), pair(3)) is not None


def test_germ_of_group_action_is_transformation_groupoid():
    z3 = cyclic_group(3)
    g = germ_groupoid(translation_action(3))
    assert len(g) == 9
    assert find_isomorphism(g, transformation(z3, z3.elements, z3.mul)) is not None


def test_germ_of_trivial_action():
    g = germ_groupoid(trivial_action(3))
    assert find_isomorphism(g, unit_groupoid(3)) is not None


def test_polycyclic_checker():
    s = symmetric_inverse_monoid(2)
    assert check_polycyclic_relations(s, ["12"], zero="--", one="12") == []
    bad = check_polycyclic_relations(s, ["1-", "-1"], zero="--", one="12")
    assert ("1-", "1-") in bad
