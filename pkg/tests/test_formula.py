import random
from fractions import Fraction as F

import pytest

from bigo import formula, generators, oracle
from bigo.errors import BasisMismatch
from bigo.formula import BOTTOM, BOTTOM_VAR
from bigo.horn import Counterexample
from bigo.problem import parse_formula
from bigo.terms import Implies, Var, conj, disj, formula_symbols

f, g = Var("f"), Var("g")


def clause_formula(c):
    body = disj(c.disjuncts)
    return Implies(conj(c.hyps), body) if c.hyps else body


def test_horn_clause_is_its_own_cnf():
    phi = parse_formula("f = O(g) & g = O(h) -> f = O(h)")
    [c] = formula.to_clauses(phi)
    assert len(c.hyps) == 2 and len(c.disjuncts) == 1


def test_disjunction_is_one_clause():
    [c] = formula.to_clauses(parse_formula("f = O(g) | g = O(f)"))
    assert c.hyps == () and len(c.disjuncts) == 2


def test_negation_uses_bottom():
    [c] = formula.to_clauses(parse_formula("!(f = O(g))"))
    assert c.hyps == (parse_formula("f = O(g)"),) and c.disjuncts == (BOTTOM,)


def test_clauses_equivalent_to_formula(rng):
    """With the falsum variable nonzero, the clause set and the formula agree."""
    for _ in range(300):
        phi = generators.core_formula(rng)
        clauses = formula.to_clauses(phi)
        atoms = [Var(n) for n in ("f", "g", "h")]
        for _ in range(50):
            n = rng.randint(1, 2)
            vals = {a: tuple(F(rng.randint(0, 3)) for _ in range(n)) for a in atoms}
            vals[BOTTOM_VAR] = (F(1),) * n
            asg = oracle.FiniteAssignment(n, vals)
            expect = oracle.eval_formula(phi, asg)
            got = all(oracle.eval_formula(clause_formula(c), asg) for c in clauses)
            assert got == expect


def test_comparability_needs_two_points():
    v = formula.decide_qf(parse_formula("f = O(g) | g = O(f)"))
    assert not v
    cx = v.counterexample
    assert cx.domain_size == 2
    assert [cx.scalar(f, i) for i in range(2)] == [1, 0]
    assert [cx.scalar(g, i) for i in range(2)] == [0, 1]


def test_reflexivity_and_intro_entailment_valid():
    assert formula.decide_qf(parse_formula("f = O(f)"))
    assert formula.decide_qf(parse_formula(
        "f + g = h + O(k) & g + l = h + O(k) -> f = l + O(k)"))


def test_amalgamate_examples():
    a = Counterexample.constant({f: 1, g: 0})
    b = Counterexample.constant({f: 0, g: 1})
    out = formula.amalgamate([a, b])
    assert out.values[f] == ((1,), (0,)) and out.values[g] == ((0,), (1,))
    assert formula.amalgamate([a]) == a
    out = formula.amalgamate([Counterexample.constant({f: 1}), Counterexample.constant({g: 1})])
    assert out.values[f] == ((1,), (0,)) and out.values[g] == ((0,), (1,))


def test_amalgamate_rejects_polynomial_parts():
    poly = Counterexample(1, 1, {f: ((F(0), F(1)),)})
    with pytest.raises(BasisMismatch):
        formula.amalgamate([poly, Counterexample.constant({g: 1})])


def test_invalid_verdicts_verified_by_oracle():
    rng = random.Random(8)
    for _ in range(300):
        phi = generators.core_formula(rng)
        v = formula.decide_qf(phi)
        if not v:
            free = [a for a in formula_symbols(phi) if isinstance(a, Var)]
            asg = oracle.from_counterexample(v.counterexample, atoms=free)
            assert asg.is_nonnegative()
            assert not oracle.eval_formula(phi, asg)
        else:
            assert oracle.random_search(phi, 100, oracle.Profile(domain_size=2, seed=1)) is None
