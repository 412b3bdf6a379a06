"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines are printed even without
``-s``) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import statistics
import time

import pytest

from bigo import formula, generators, horn, oracle, scales, service, signs, suites
from bigo.generators import horn_formula
from bigo.horn import HornClause
from bigo.problem import Problem, parse_atom, parse_formula, parse_problem
from bigo.scales import GrowthContext
from bigo.terms import ONE, Growth, Var, formula_symbols

# pinned tolerances
INTRO_MS = 50.0           # per entailment, median of 5 runs
DUALITY_SECONDS = 10.0
HORN_FUZZ = 1000
SEARCH_SAMPLES = 2000
EQUIV_FORMULAS = 300
EVENTUAL_SAMPLES = 50
WITH_ONE_FORMULAS = 300
GROWTH_CLAUSES = 300
PERF_INSTANCES = 100
PERF_SECONDS = 1.0

INTRO = [
    "assume f + g = h + O(k)\nassume g + l = h + O(k)\nprove f = l + O(k)",
    "assume f + g = h + O(k)\nassume g = O(l)\nassume k = O(l)\nprove f = h + O(l)",
]


def _variables(phi):
    return [a for a in formula_symbols(phi) if isinstance(a, Var)]


def _median_ms(fn, runs=5):
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - start) * 1000)
    return result, statistics.median(times)


def intro_entailments():
    worst = 0.0
    for theory in ("core", "signed"):
        for text in INTRO:
            problem = parse_problem(f"theory {theory}\n{text}")
            verdict, ms = _median_ms(lambda: service.decide(problem))
            if not verdict or not service.verify(service.report_for(problem, verdict), problem):
                return False, f"{theory} entailment not valid"
            worst = max(worst, ms)
    return worst < INTRO_MS, f"4 valid, slowest median {worst:.1f} ms (limit {INTRO_MS:.0f})"


def axiom_regression():
    axioms = suites.axiom_instances()
    facts = suites.derived_facts(random.Random(0))
    bad = [name for name, phi in axioms + facts if not formula.decide_qf(phi)]
    return not bad, f"{len(axioms)} axiom instances, {len(facts)} derived facts, {len(bad)} not valid"


def separations():
    mono = parse_formula("f = O(f + g)")
    if not formula.decide_qf(mono):
        return False, "monotonicity not valid in core"
    v = signs.decide_signed(mono)
    if v:
        return False, "monotonicity valid in signed"
    asg = oracle.from_counterexample(v.counterexample, atoms=_variables(mono))
    if oracle.eval_formula(mono, asg):
        return False, "signed counterexample does not refute"
    worked = parse_formula("h = f + g -> f = O(|h|)")
    v = signs.decide_signed(worked)
    if v:
        return False, "worked example valid"
    asg = oracle.from_counterexample(v.counterexample, atoms=_variables(worked))
    if oracle.eval_formula(worked, asg):
        return False, "worked example counterexample does not refute"
    info = v.info["disjuncts"][0].info
    hyps, concl = list(info["branch_hyps"]), info["branch_concl"]
    # over nonnegative functions the branch is interchangeable with g + h = O(h)
    target = parse_atom("g + h = O(h)")
    same = bool(horn.decide_atoms(hyps + [concl], target)) and \
        bool(horn.decide_atoms(hyps + [target], concl)) and \
        not horn.decide_atoms([], target)
    return same, f"failing branch {info['signs']} matches g + h = O(h): {same}"


def duality_xor():
    rng = random.Random(0)
    start = time.perf_counter()
    columns = bad = 0
    for _ in range(500):
        A = suites.random_matrix(rng)
        for v in range(len(A[0])):
            columns += 1
            bad += not suites.duality_check(A, v)
    secs = time.perf_counter() - start
    return bad == 0 and secs < DUALITY_SECONDS, \
        f"{columns} columns, {bad} failures, {secs:.2f} s (limit {DUALITY_SECONDS:.0f})"


def differential_fuzz():
    rng = random.Random(0)
    discrepancies = valid = 0
    for i in range(HORN_FUZZ):
        hyps, concl = generators.horn_clause(rng)
        phi = horn_formula(hyps, concl)
        v = horn.decide_atoms(hyps, concl)
        if v:
            valid += 1
            ok = horn.check_certificate(HornClause.from_atoms(hyps, concl), v.certificate) and \
                oracle.random_search(phi, SEARCH_SAMPLES, oracle.Profile(seed=i)) is None
        else:
            asg = oracle.from_counterexample(v.counterexample, atoms=_variables(phi))
            ok = asg.is_nonnegative() and \
                all(oracle.holds_pointwise(a, asg) for a in hyps) and \
                not oracle.holds_pointwise(concl, asg)
        discrepancies += not ok
    return discrepancies == 0, \
        f"{HORN_FUZZ} clauses ({valid} valid), {discrepancies} discrepancies"


def amalgamation():
    phi = parse_formula("f = O(g) | g = O(f)")
    v = formula.decide_qf(phi)
    if v:
        return False, "comparability decided valid"
    cx = v.counterexample
    asg = oracle.from_counterexample(cx)
    both_false = not oracle.holds_pointwise(phi.left, asg) and \
        not oracle.holds_pointwise(phi.right, asg)
    return cx.domain_size == 2 and both_false, \
        f"domain size {cx.domain_size}, both disjuncts false: {both_false}"


def _eventually_nonnegative(rng, top=2):
    d = rng.randint(-1, top)
    p = tuple(rng.randint(-3, 3) for _ in range(d + 1))
    return p[:-1] + (rng.randint(1, 3),) if p else p


def reading_equivalence():
    rng = random.Random(0)
    mismatches = 0
    for _ in range(EQUIV_FORMULAS):
        phi = generators.core_formula(rng)
        reports = [service.run(Problem("core", reading, (), phi), timing=False)
                   for reading in ("pointwise", "eventually")]
        if reports[0].verdict != reports[1].verdict:
            mismatches += 1
            continue
        names = _variables(phi)
        v = formula.decide_qf(phi)
        if v:
            # valid formulas also hold in eventually nonnegative polynomial models
            for _ in range(EVENTUAL_SAMPLES):
                asg = oracle.PolyAssignment({a: _eventually_nonnegative(rng) for a in names})
                if not oracle.eval_formula(phi, asg, oracle.EVENTUALLY):
                    mismatches += 1
                    break
        else:
            asg = oracle.from_counterexample(v.counterexample, atoms=names)
            if oracle.eval_formula(phi, asg, oracle.POINTWISE) or \
                    oracle.eval_formula(phi, asg, oracle.EVENTUALLY):
                mismatches += 1
    return mismatches == 0, f"{EQUIV_FORMULAS} formulas, {mismatches} mismatches"


def constant_one():
    if not scales.decide_with_one(parse_formula("f = O(1) -> f + 1 = O(1)")):
        return False, "bounded shift not valid"
    v = scales.decide_with_one(parse_formula("1 = O(f)"))
    if v or v.counterexample.value(ONE) != (1,):
        return False, "1 = O(f) not refuted with the constant one"
    rng = random.Random(0)
    differ = 0
    for _ in range(WITH_ONE_FORMULAS):
        phi = generators.with_one_formula(rng)
        differ += bool(scales.decide_with_one(phi)) != \
            bool(formula.decide_qf(scales.one_as_variable(phi)))
    return differ == 0, f"examples ok, {WITH_ONE_FORMULAS} formulas, {differ} disagree with reduction"


def growth_suite():
    ctx = GrowthContext((1, 2))
    if not scales.decide_growth_horn([], parse_atom("g[1] + g[2] = O(g[2])"), ctx):
        return False, "g1 + g2 = O(g2) not valid"
    goal = parse_atom("g[2] = O(g[1])")
    v = scales.decide_growth_horn([], goal, ctx)
    if v:
        return False, "g2 = O(g1) valid"
    cx = v.counterexample
    degrees = (oracle.poly_degree(cx.value(Growth(2))), oracle.poly_degree(cx.value(Growth(1))))
    asg = oracle.from_counterexample(cx, {1: 1, 2: 2})
    if degrees != (2, 1) or oracle.holds_eventually_poly(goal, asg):
        return False, f"counterexample degrees {degrees}"
    rng = random.Random(0)
    ctxs = {k: GrowthContext(tuple(range(1, k + 1))) for k in (1, 2, 3)}
    fired = wrong = 0
    for _ in range(GROWTH_CLAUSES):
        k = rng.choice((1, 2, 3))
        hyps, concl = generators.growth_horn(rng, k)
        try:
            v = scales.decide_growth_horn(hyps, concl, ctxs[k])
        except scales.ChainInvariantViolation:
            fired += 1
            continue
        if not v:
            phi = horn_formula(hyps, concl)
            asg = oracle.from_counterexample(v.counterexample, {i: i for i in range(1, k + 1)},
                                             atoms=_variables(phi))
            wrong += oracle.eval_formula(phi, asg, oracle.EVENTUALLY)
    return fired == 0 and wrong == 0, \
        f"examples ok, {GROWTH_CLAUSES} clauses, {fired} invariant violations, {wrong} bad models"


def performance():
    rng = random.Random(0)
    atoms = generators.variables(10)
    worst = 0.0
    for _ in range(PERF_INSTANCES):
        hyps = [generators.core_atom(rng, atoms) for _ in range(10)]
        concl = generators.core_atom(rng, atoms)
        start = time.perf_counter()
        horn.decide_atoms(hyps, concl)
        worst = max(worst, time.perf_counter() - start)
    return worst < PERF_SECONDS, \
        f"{PERF_INSTANCES} instances, slowest {worst:.3f} s (limit {PERF_SECONDS:.0f} s)"


CRITERIA = [
    (1, "intro entailments", intro_entailments),
    (2, "axiom regression", axiom_regression),
    (3, "signed separations", separations),
    (4, "duality exclusive or", duality_xor),
    (5, "differential fuzz", differential_fuzz),
    (6, "amalgamation", amalgamation),
    (7, "reading equivalence", reading_equivalence),
    (8, "constant one", constant_one),
    (9, "growth scales", growth_suite),
    (10, "performance smoke", performance),
]


def report_line(number, label, fn) -> tuple:
    ok, detail = fn()
    return ok, f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {label}: {detail}"


@pytest.mark.parametrize("number, label, fn", CRITERIA, ids=[c[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(number, label, fn, capsys):
    ok, line = report_line(number, label, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report_line(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
