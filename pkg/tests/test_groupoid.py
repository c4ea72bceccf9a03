import itertools
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupoidlab.errors import AxiomViolation, BudgetExceeded, MissingComposition
from groupoidlab.groupoid import (ArrowSet, GroupoidTables, cyclic, disjoint, find_isomorphism,
                                  generate_subgroupoid, group_groupoid, is_bisection,
                                  is_subgroupoid, orbits, pair, product, structure_report,
                                  subgroupoid_lattice, sym, transformation, unit_groupoid,
                                  validate_groupoid)
from groupoidlab.groups import cyclic_group, symmetric_group

from strategies import arrow_subsets, groupoids


def pair2_tables(**overrides):
    arrows = {"(1,2)": ("(2,2)", "(1,1)", "(2,1)"), "(2,1)": ("(1,1)", "(2,2)", "(1,2)")}
    comp = {}
    for i, j, k in itertools.product((1, 2), repeat=3):
        comp[(f"({i},{j})", f"({j},{k})")] = f"({i},{k})"
    raw = GroupoidTables("p2", ["(1,1)", "(2,2)"], arrows, comp)
    for k, v in overrides.items():
        setattr(raw, k, v)
    return raw


def test_pair2_tables_validate():
    g = validate_groupoid(pair2_tables())
    assert len(g) == 4 and len(g.units) == 2
    assert g == pair(2)


def test_wrong_inverse_is_axiom_5():
    raw = pair2_tables()
    raw.arrows["(1,2)"] = ("(2,2)", "(1,1)", "(1,2)")
    with pytest.raises(AxiomViolation) as exc:
        validate_groupoid(raw)
    assert exc.value.axiom == 5


def test_missing_composition():
    raw = pair2_tables()
    del raw.comp[("(1,2)", "(2,1)")]
    with pytest.raises(MissingComposition):
        validate_groupoid(raw)


def test_non_composable_comp_entry():
    raw = pair2_tables()
    raw.comp[("(1,2)", "(1,2)")] = "(1,1)"
    with pytest.raises(AxiomViolation) as exc:
        validate_groupoid(raw)
    assert exc.value.axiom == "composability"


def test_bad_product_is_caught():
    raw = pair2_tables()
    raw.comp[("(1,2)", "(2,1)")] = "(2,2)"
    with pytest.raises(AxiomViolation):
        validate_groupoid(raw)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_pair_sizes(n):
    g = pair(n)
    assert len(g) == n * n and len(g.units) == n


def test_constructor_sizes_and_laws():
    assert len(cyclic(4)) == 4 and len(cyclic(4).units) == 1
    assert len(sym(3)) == 6
    assert len(unit_groupoid(3)) == 3
    d = disjoint(pair(2), cyclic(3))
    assert len(d) == 7 and len(d.units) == 3
    p = product(pair(3), cyclic(4))
    assert len(p) == 36 and len(p.units) == 3
    assert p.comp("((1,2),1)", "((2,3),3)") == "((1,3),0)"
    s3 = symmetric_group(3)
    t = transformation(s3, "123", lambda s, x: s[int(x) - 1])
    assert len(t) == 18 and len(t.units) == 3
    # (s, t.x)(t, x) = (st, x)
    for s, u, x in itertools.product(s3.elements, s3.elements, "123"):
        tx = u[int(x) - 1]
        assert t.comp(f"({s},{tx})", f"({u},{x})") == f"({s3.mul(s, u)},{x})"


def test_structure_reports():
    r = structure_report(pair(3))
    assert r.is_effective and r.is_minimal and r.is_topologically_transitive
    r = structure_report(cyclic(2))
    assert not r.is_effective and r.is_minimal
    r = structure_report(disjoint(pair(2), pair(2)))
    assert r.is_effective and not r.is_minimal and not r.is_topologically_transitive
    assert len(orbits(disjoint(pair(2), pair(3)))) == 2
    assert structure_report(unit_groupoid(1)).is_minimal


def partial_injections(n):
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


@pytest.mark.parametrize("g,count", [
    (pair(2), partial_injections(2)), (pair(3), partial_injections(3)),
    (unit_groupoid(4), 2 ** 4), (cyclic(3), 4),
])
def test_bisection_counts(g, count):
    found = sum(is_bisection(ArrowSet(g, frozenset(s)))
                for k in range(len(g) + 1) for s in itertools.combinations(g.arrows, k))
    assert found == count


def test_generate_subgroupoid():
    g = pair(3)
    h = generate_subgroupoid(g, ["(1,2)"])
    assert h.sorted() == ["(1,1)", "(1,2)", "(2,1)", "(2,2)"]
    w = generate_subgroupoid(g, ["(1,2)"], wide=True)
    assert "(3,3)" in w.members and len(w) == 5
    assert generate_subgroupoid(g, ["(1,2)", "(2,3)"]) == g.everything()


@given(groupoids.flatmap(arrow_subsets))
def test_closure_is_smallest_subgroupoid(u):
    g = u.parent
    h = generate_subgroupoid(g, u)
    assert is_subgroupoid(h)
    assert u.issubset(h)
    assert generate_subgroupoid(g, h) == h


@given(groupoids.flatmap(arrow_subsets))
def test_bisection_definition(u):
    g = u.parent
    srcs = [g.src(a) for a in u.members]
    tgts = [g.tgt(a) for a in u.members]
    assert is_bisection(u) == (len(set(srcs)) == len(srcs) and len(set(tgts)) == len(tgts))


def test_lattice_order_independent_and_budget():
    g = product(pair(2), cyclic(2))
    base = generate_subgroupoid(g, [], wide=True)
    a = subgroupoid_lattice(g, base)
    b = subgroupoid_lattice(g, base, order=list(reversed(g.arrows)))
    assert set(a) == set(b)
    assert all(is_subgroupoid(h) and base.issubset(h) for h in a)
    with pytest.raises(BudgetExceeded):
        subgroupoid_lattice(g, base, budget=2)


def test_isomorphism_search():
    assert find_isomorphism(pair(2), pair(2)) is not None
    assert find_isomorphism(cyclic(4), group_groupoid(cyclic_group(4))) is not None
    assert find_isomorphism(cyclic(4), sym(2)) is None
    assert find_isomorphism(disjoint(cyclic(2), cyclic(2)), cyclic(4)) is None
    z3 = cyclic_group(3)
    t = transformation(z3, z3.elements, z3.mul)
    assert find_isomorphism(t, pair(3)) is not None


@given(st.sampled_from([pair(2), cyclic(3), disjoint(pair(2), cyclic(2))]))
def test_structural_equality(g):
    assert g == validate_groupoid(GroupoidTables(
        g.name, list(g.units),
        {a: (g.src(a), g.tgt(a), g.inv(a)) for a in g.arrows},
        {(a, b): g.comp(a, b) for a in g.arrows for b in g.arrows
         if g.src(a) == g.tgt(b)}))
