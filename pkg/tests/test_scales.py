import random
from fractions import Fraction as F

import pytest

from bigo import formula, generators, oracle, scales
from bigo.errors import GrowthIndexOutOfOrder, SingularSystem, UnboundAtom
from bigo.generators import horn_formula
from bigo.problem import parse_atom, parse_formula
from bigo.scales import GrowthContext
from bigo.terms import ONE, Growth, Var, formula_symbols

f, g = Var("f"), Var("g")
G1, G2 = Growth(1), Growth(2)


def atoms(*texts):
    return [parse_atom(t) for t in texts]


def test_bounded_shift_valid():
    assert scales.decide_with_one(parse_formula("f = O(1) -> f + 1 = O(1)"))


def test_one_not_bounded_by_arbitrary_function():
    v = scales.decide_with_one(parse_formula("1 = O(f)"))
    assert not v
    cx = v.counterexample
    assert cx.degree == 0 and cx.value(ONE) == (1,) and cx.scalar(f) == 0


def test_unbounded_function_is_polynomial():
    phi = parse_formula("f = O(1)")
    v = scales.decide_with_one(phi)
    assert not v
    cx = v.counterexample
    assert cx.value(ONE)[0] == 1 and all(c == 0 for c in cx.value(ONE)[1:])
    assert oracle.poly_degree(cx.value(f)) == 1
    assert not oracle.eval_formula(phi, oracle.from_counterexample(cx), oracle.EVENTUALLY)


def test_with_one_matches_reduction(rng):
    for _ in range(300):
        phi = generators.with_one_formula(rng)
        assert bool(scales.decide_with_one(phi)) == bool(formula.decide_qf(scales.one_as_variable(phi)))


def test_growth_examples():
    ctx = GrowthContext((1, 2))
    assert scales.decide_growth_horn([], parse_atom("g[1] + g[2] = O(g[2])"), ctx)
    assert scales.decide_growth_horn(atoms("f = O(g[1])"), parse_atom("f = O(g[2])"), ctx)
    v = scales.decide_growth_horn([], parse_atom("g[2] = O(g[1])"), ctx)
    assert not v
    cx = v.counterexample
    assert cx.value(G1) == (0, 1, 0) and cx.value(G2) == (0, 0, 1)
    asg = oracle.from_counterexample(cx, {1: 1, 2: 2})
    assert not oracle.holds_eventually_poly(parse_atom("g[2] = O(g[1])"), asg)


def test_growth_qf_examples():
    ctx = GrowthContext((1,))
    assert scales.decide_growth_qf(parse_formula("|f| = O(g[1]) -> f + g[1] = O(g[1])"), ctx)
    assert scales.decide_growth_qf(parse_formula("g[1] = O(g[2])"), GrowthContext((1, 2)))
    phi = parse_formula("f = O(g[1]) | g[1] = O(f)")
    v = scales.decide_growth_qf(phi, ctx)
    assert not v
    comps = v.counterexample.components
    assert len(comps) == 2
    for cx, disjunct in zip(comps, (phi.left, phi.right)):
        asg = oracle.from_counterexample(cx, {1: 1}, atoms=[f])
        assert not oracle.holds(disjunct, asg, oracle.EVENTUALLY)


def test_growth_context_checks():
    with pytest.raises(GrowthIndexOutOfOrder):
        GrowthContext((2, 1))
    with pytest.raises(UnboundAtom):
        scales.decide_growth_horn([], parse_atom("g[3] = O(f)"), GrowthContext((1,)))


def test_h_basis_examples():
    assert scales.solve_H_basis([[1, 0], [0, 1]]) == [(0, 1), (0, 0, 1)]
    assert scales.solve_H_basis([[2, 0], [1, 1]]) == [(0, F(1, 2)), (0, F(-1, 2), 1)]
    assert scales.solve_H_basis([]) == []
    with pytest.raises(SingularSystem):
        scales.solve_H_basis([[0]])


def test_decisions_do_not_read_the_standard_model(monkeypatch):
    """Degrees for counterexamples come from the chain, not from a fixed model."""
    def refuse(self):
        raise AssertionError("decision path consulted the standard model")
    monkeypatch.setattr(GrowthContext, "model_degrees", property(refuse))
    ctx = GrowthContext((1, 2))
    assert not scales.decide_growth_horn([], parse_atom("g[2] = O(g[1])"), ctx)
    assert scales.decide_growth_qf(parse_formula("g[1] + g[2] = O(g[2])"), ctx)


def _random_poly(rng, top):
    """Eventually nonnegative: any lower terms, positive leading coefficient."""
    d = rng.randint(-1, top)
    p = tuple(F(rng.randint(-3, 3)) for _ in range(d + 1))
    return p[:-1] + (F(rng.randint(1, 3)),) if p else p


def test_growth_fuzz():
    """Invalid verdicts carry polynomial counterexamples; valid ones survive
    random polynomial models; chain invariants never fire."""
    rng = random.Random(5)
    ctxs = {k: GrowthContext(tuple(range(1, k + 1))) for k in (1, 2, 3)}
    for _ in range(300):
        k = rng.choice((1, 2, 3))
        hyps, concl = generators.growth_horn(rng, k)
        phi = horn_formula(hyps, concl)
        v = scales.decide_growth_horn(hyps, concl, ctxs[k])
        degrees = {i: i for i in range(1, k + 1)}
        names = [a for a in formula_symbols(phi) if isinstance(a, Var)]
        if v:
            for _ in range(100):
                asg = oracle.PolyAssignment({a: _random_poly(rng, k + 1) for a in names}, degrees)
                assert oracle.eval_formula(phi, asg, oracle.EVENTUALLY)
        else:
            asg = oracle.from_counterexample(v.counterexample, degrees, atoms=names)
            assert not oracle.eval_formula(phi, asg, oracle.EVENTUALLY)
