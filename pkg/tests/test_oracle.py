from fractions import Fraction as F

import pytest

from bigo import oracle
from bigo.errors import UnboundAtom, UnsupportedConnective
from bigo.problem import parse_atom, parse_formula
from bigo.terms import Growth, Var

f, g = Var("f"), Var("g")


def fin(**vals):
    n = len(next(iter(vals.values())))
    return oracle.FiniteAssignment(n, {Var(k): tuple(F(x) for x in v) for k, v in vals.items()})


def test_pointwise_examples():
    a = parse_atom("f = O(g)")
    assert not oracle.holds_pointwise(a, fin(f=[1], g=[0]))
    assert oracle.holds_pointwise(a, fin(f=[1], g=[2]))
    assert not oracle.holds_pointwise(a, fin(f=[1, 0], g=[0, 1]))


def test_eventually_examples():
    asg = oracle.PolyAssignment({}, {1: 1, 2: 2})
    assert not oracle.holds_eventually_poly(parse_atom("g[2] = O(g[1])"), asg)
    asg = oracle.PolyAssignment({f: (0, 0, 1), g: (0, 0, 1)})
    assert oracle.holds_eventually_poly(parse_atom("f = g + O(0)"), asg)
    asg = oracle.PolyAssignment({f: (5, 1), g: (0, 1)})
    assert oracle.holds_eventually_poly(parse_atom("f = O(g)"), asg)


def test_abs_uses_leading_coefficient():
    asg = oracle.PolyAssignment({f: (-5, 1), g: (0, 1)})
    assert oracle.eval_formula(parse_formula("|f| = O(g)"), asg, oracle.EVENTUALLY)
    asg = oracle.PolyAssignment({f: (0, -1)})
    assert oracle.eval_poly(parse_atom("|f| = O(f)").lhs, asg) == (0, 1)


def test_comparability_false_pointwise():
    assert not oracle.eval_formula(parse_formula("f = O(g) | g = O(f)"), fin(f=[1, 0], g=[0, 1]))


def test_polynomials_have_no_pointwise_reading():
    asg = oracle.PolyAssignment({f: (0, 1)})
    with pytest.raises(UnsupportedConnective):
        oracle.eval_formula(parse_formula("f = O(f)"), asg, oracle.POINTWISE)


def test_unbound_variable():
    with pytest.raises(UnboundAtom):
        oracle.eval_finite(Var("q"), fin(f=[1]))


def test_finite_model_same_under_both_readings():
    phi = parse_formula("f = O(g) | g = O(f)")
    asg = fin(f=[1, 0], g=[0, 1])
    assert oracle.eval_formula(phi, asg, oracle.EVENTUALLY) == oracle.eval_formula(phi, asg)


def test_random_search_finds_unbounded_goal():
    hit = oracle.random_search(parse_formula("f = O(g)"), 100, oracle.Profile(seed=7))
    assert hit is not None and hit.values[g] == (0,) and hit.values[f][0] > 0


def test_random_search_misses_valid_formulas():
    assert oracle.random_search(parse_formula("f = O(f + g)"), 500, oracle.Profile()) is None
    intro = parse_formula("f + g = h + O(k) & g + l = h + O(k) -> f = l + O(k)")
    assert oracle.random_search(intro, 500, oracle.Profile()) is None


def test_growth_symbols_use_standard_degrees():
    asg = oracle.PolyAssignment({}, {F(1, 2): 1})
    assert asg.lookup(Growth(F(1, 2))) == (0, 1)
