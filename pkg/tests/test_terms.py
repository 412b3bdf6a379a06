from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from bigo import oracle
from bigo.errors import NonLinearNode
from bigo.problem import parse_atom, parse_term
from bigo.terms import (ONE, ZERO, Abs, Add, BigOAtom, Growth, LinearExpr, Neg, Scale,
                        Sub, Var, format_term, linearize, reduce_atom, reduced_atom,
                        sort_atoms)

f, g, h, k = map(Var, "fghk")


def test_linearize_flattens():
    assert linearize(Add(Add(f, f), Neg(g))) == LinearExpr({f: 2, g: -1})


def test_linearize_zero_is_empty():
    assert linearize(ZERO) == LinearExpr()
    assert not linearize(Sub(f, f))


def test_linearize_rejects_abs():
    with pytest.raises(NonLinearNode):
        linearize(Add(f, Abs(g)))


def test_reduce_atom_deletes_bound_atoms():
    s, t = reduce_atom(parse_atom("3*f1 + 2*f2 = 5*f3 + O(f2 + 3*f4)"))
    assert s == LinearExpr({Var("f1"): 3, Var("f3"): -5})
    assert t == {Var("f2"), Var("f4")}


def test_reduce_atom_trivial_cases():
    assert reduce_atom(parse_atom("f = f + O(0)")) == (LinearExpr(), frozenset())
    assert reduce_atom(parse_atom("f + g = O(g)")) == (LinearExpr({f: 1}), frozenset({g}))


def test_atom_order_puts_one_and_growth_first():
    atoms = [Var("b"), Growth(2), Var("a"), ONE, Growth(F(1, 2))]
    assert sort_atoms(atoms) == [ONE, Growth(F(1, 2)), Growth(2), Var("a"), Var("b")]


def test_printing_keeps_negated_scale_apart():
    t = Neg(Scale(F(3), f))
    assert format_term(t) == "-(3 * f)"
    assert parse_term(format_term(t)) == t


names = st.sampled_from([f, g, h, k])
coefs = st.integers(-4, 4).map(F)


@st.composite
def linear_terms(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(st.one_of(names, st.just(ZERO)))
    kind = draw(st.sampled_from(["add", "sub", "neg", "scale"]))
    a = draw(linear_terms(depth - 1))
    if kind == "neg":
        return Neg(a)
    if kind == "scale":
        return Scale(draw(coefs), a)
    b = draw(linear_terms(depth - 1))
    return Add(a, b) if kind == "add" else Sub(a, b)


values = st.tuples(*[st.integers(-5, 5) for _ in range(4)])


@given(linear_terms(), values)
def test_linearize_agrees_with_evaluation(t, vals):
    asg = oracle.FiniteAssignment(1, {a: (F(v),) for a, v in zip([f, g, h, k], vals)})
    expected = oracle.eval_finite(t, asg)[0]
    got = sum((c * asg.values[a][0] for a, c in linearize(t).items()), F(0))
    assert got == expected


@settings(max_examples=200)
@given(linear_terms(), linear_terms(), linear_terms(),
       st.lists(st.tuples(*[st.integers(0, 4) for _ in range(4)]), min_size=1, max_size=3))
def test_reduction_is_equivalent_over_nonnegative_functions(lhs, rhs, bound, points):
    """Deleting bound atoms from ``lhs - rhs`` never changes the truth value."""
    bound = linearize(bound)
    bound = LinearExpr({a: abs(c) for a, c in bound.items()})
    atom = BigOAtom(lhs, rhs, bound.to_term())
    s, support = reduce_atom(atom)
    reduced = reduced_atom(s, support)
    cols = list(zip(*points))
    asg = oracle.FiniteAssignment(len(points), {a: tuple(F(x) for x in col)
                                                for a, col in zip([f, g, h, k], cols)})
    assert oracle.holds_pointwise(atom, asg) == oracle.holds_pointwise(reduced, asg)
