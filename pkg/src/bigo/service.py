"""Running problems, serializing verdicts, and re-checking reports.

``verify`` never trusts the decision code: it recomputes the clause and
branch structure from the problem, replays every Horn certificate, and
evaluates counterexamples with :mod:`bigo.oracle`.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import formula, horn, oracle, scales, signs
from .errors import BigOError
from .formula import BOTTOM_VAR, FormulaCertificate
from .horn import HornCertificate, TraceStep
from .problem import Problem
from .scales import (ChainCertificate, GrowthContext, ImpliedOrientation,
                     OrientationSplit)
from .schemas import VerdictReport
from .terms import ONE, Growth, One, Var, format_term, formula_symbols, sort_atoms


class UnverifiedResult(BigOError):
    """The decision procedure produced something its own checker rejects."""


def q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def name(atom) -> str:
    return format_term(atom)


# deciding -----------------------------------------------------------------

def growth_context(problem: Problem) -> GrowthContext:
    return GrowthContext(problem.growth_indices)


def decide(problem: Problem):
    phi = problem.formula
    if problem.theory == "core":
        return formula.decide_qf(phi)
    if problem.theory == "signed":
        return signs.decide_signed(phi)
    if problem.theory == "with-one":
        return scales.decide_with_one(phi, signed=True)
    if problem.theory == "growth":
        return scales.decide_growth_qf(phi, growth_context(problem))
    raise ValueError(f"unknown theory {problem.theory!r}")


# encoding -----------------------------------------------------------------

def encode_counterexample(cx, variables=()) -> dict:
    """Serialize ``cx``; problem variables it leaves free are reported as 0."""
    comps = [encode_counterexample(c, variables) for c in cx.components] or None
    atoms = set(cx.values)
    if not comps:
        atoms |= set(variables)
    return {
        "domain_size": cx.domain_size,
        "basis": cx.basis(),
        "values": {name(a): [[q(c) for c in cx.value(a, i)] for i in range(cx.domain_size)]
                   for a in sort_atoms(atoms)},
        "components": comps,
    }


def _combo(pairs):
    return [[i, q(c)] for i, c in pairs]


def encode_horn(c: HornCertificate) -> dict:
    return {
        "coefficients": _combo(c.coefficients),
        "bound_set": [name(a) for a in c.bound_set],
        "trace": [{"atom": name(s.atom), "combination": _combo(s.combination)}
                  for s in c.trace],
    }


def encode_chain(t) -> dict:
    if isinstance(t, ChainCertificate):
        return {"disjunct": t.disjunct, "proof": encode_horn(t.proof)}
    if isinstance(t, ImpliedOrientation):
        # pairs are (variable, scale symbol); orientation 0 bounds the variable
        return {"pair": t.pair, "implied": 0 if isinstance(t.atom.lhs, Var) else 1,
                "proof": encode_horn(t.proof), "rest": encode_chain(t.rest)}
    if isinstance(t, OrientationSplit):
        return {"pair": t.pair, "first": encode_chain(t.first),
                "second": encode_chain(t.second)}
    raise TypeError(f"not a chain certificate: {t!r}")


def _encode_inner(theory, proof):
    return encode_horn(proof) if theory in ("core", "signed") else encode_chain(proof)


def encode_certificate(theory: str, cert: FormulaCertificate, defs=()) -> dict:
    clauses = []
    for p in cert.clauses:
        if theory == "core":
            proof = encode_horn(p.proof)
        else:
            proof = {"branches": [
                {"signs": {name(a): "+" if s > 0 else "-" for a, s in b.signs.signs},
                 "proof": _encode_inner(theory, b.proof)}
                for b in p.proof.branches]}
        clauses.append({"clause": p.clause, "disjunct": p.disjunct, "proof": proof})
    return {"theory": theory,
            "definitions": [[name(d.fresh), format_term(d.body)] for d in defs],
            "clauses": clauses}


def report_for(problem: Problem, verdict, ms: float = 0.0) -> VerdictReport:
    if verdict:
        cert = encode_certificate(problem.theory, verdict.certificate,
                                  verdict.info.get("defs", ()))
        return VerdictReport(verdict="valid", certificate=cert, verified=False, ms=ms)
    variables = [a for a in formula_symbols(problem.formula) if isinstance(a, Var)]
    return VerdictReport(verdict="invalid",
                         counterexample=encode_counterexample(verdict.counterexample, variables),
                         verified=False, ms=ms)


def run(problem: Problem, timing: bool = True) -> VerdictReport:
    """Decide, serialize, and re-check; refuses to return an unchecked report."""
    start = time.perf_counter()
    verdict = decide(problem)
    ms = (time.perf_counter() - start) * 1000 if timing else 0.0
    report = report_for(problem, verdict, round(ms, 3))
    if not verify(report, problem):
        raise UnverifiedResult(f"{report.verdict} result failed its own check")
    return report.model_copy(update={"verified": True})


# checking -----------------------------------------------------------------

class _Reject(Exception):
    pass


def _table(atoms) -> dict:
    return {name(a): a for a in atoms}


def _lookup(table, key):
    try:
        return table[key]
    except (KeyError, TypeError):
        raise _Reject(f"unknown symbol {key!r}") from None


def _pairs(items):
    return tuple((int(i), Fraction(c)) for i, c in items)


def decode_horn(d, table) -> HornCertificate:
    return HornCertificate(
        _pairs(d["coefficients"]),
        tuple(_lookup(table, n) for n in d["bound_set"]),
        tuple(TraceStep(_lookup(table, s["atom"]), _pairs(s["combination"]))
              for s in d["trace"]))


def decode_chain(d, table, goals, pairs):
    if "disjunct" in d:
        j = int(d["disjunct"])
        if not 0 <= j < len(goals):
            raise _Reject("disjunct out of range")
        return ChainCertificate(j, (), goals[j], decode_horn(d["proof"], table))
    i = int(d["pair"])
    if not 0 <= i < len(pairs):
        raise _Reject("pair out of range")
    if "implied" in d:
        atom = scales._orientations(pairs[i])[int(d["implied"])]
        return ImpliedOrientation(i, atom, decode_horn(d["proof"], table),
                                  decode_chain(d["rest"], table, goals, pairs))
    return OrientationSplit(i, decode_chain(d["first"], table, goals, pairs),
                            decode_chain(d["second"], table, goals, pairs))


def _scale(problem):
    if problem.theory == "with-one":
        return [ONE]
    if problem.theory == "growth":
        return list(growth_context(problem).atoms)
    return None


def _check_horn_level(problem, hyps, concl, proof) -> bool:
    scale = _scale(problem)
    if scale is None:
        h = horn.HornClause.from_atoms(hyps, concl)
        return horn.check_certificate(h, decode_horn(proof, _table(h.vars)))
    base, goals, extra, pairs = scales.reduction(hyps, concl, scale)
    tree = decode_chain(proof, _table(extra), goals, pairs)
    return scales.check_tree(tree, base, goals, pairs)


def _prepared(problem):
    if problem.theory == "core":
        return problem.formula, ()
    return signs.prepare(problem.formula)


def _check_certificate(problem, cert) -> bool:
    if cert.get("theory") != problem.theory:
        return False
    body, defs = _prepared(problem)
    clauses = formula.to_clauses(body)
    given = {int(e["clause"]): e for e in cert["clauses"]}
    if set(given) != set(range(len(clauses))):
        return False
    for ci, clause in enumerate(clauses):
        entry = given[ci]
        j = int(entry["disjunct"])
        if not 0 <= j < len(clause.disjuncts):
            return False
        psi = clause.disjuncts[j]
        if problem.theory == "core":
            if not _check_horn_level(problem, clause.hyps, psi, entry["proof"]):
                return False
            continue
        supplied = {}
        for b in entry["proof"]["branches"]:
            supplied[tuple(sorted(b["signs"].items()))] = b["proof"]
        for sa, h2, c2 in signs.branches(clause.hyps, psi, defs):
            key = tuple(sorted((name(a), "+" if s > 0 else "-") for a, s in sa.signs))
            if key not in supplied:
                return False
            if not _check_horn_level(problem, h2, c2, supplied[key]):
                return False
    return True


def _symbols(problem):
    syms = set(formula_symbols(problem.formula)) | {ONE, BOTTOM_VAR}
    return _table(syms)


def _degrees(problem):
    if problem.theory != "growth":
        return {}
    return {i: d for i, d in growth_context(problem).model_degrees.items() if i != "*"}


def _assignment(problem, cx: dict):
    table = _symbols(problem)
    n = int(cx["domain_size"])
    values = {}
    for key, vecs in cx["values"].items():
        atom = _lookup(table, key)
        if len(vecs) != n:
            raise _Reject("wrong number of domain points")
        values[atom] = [tuple(Fraction(c) for c in vec) for vec in vecs]
    degree = len(cx["basis"]) - 1
    degrees = _degrees(problem)
    if degree == 0 and not degrees:
        asg = oracle.FiniteAssignment(n, {a: tuple(v[0] for v in vs) for a, vs in values.items()})
        if ONE in asg.values and any(x != 1 for x in asg.values[ONE]):
            raise _Reject("the constant one is not 1")
        if problem.theory == "core" and not asg.is_nonnegative():
            raise _Reject("negative value in the nonnegative theory")
        return asg, "pointwise"
    if n != 1:
        raise _Reject("polynomial models live on one point")
    poly = {a: vs[0] for a, vs in values.items()}
    asg = oracle.PolyAssignment(poly, degrees)
    for a, p in poly.items():
        if isinstance(a, One) and oracle._trim(p) != (1,):
            raise _Reject("the constant one is not 1")
        if isinstance(a, Growth) and oracle._trim(p) != oracle.monomial(degrees[a.index]):
            raise _Reject(f"{name(a)} is not its standard function")
    return asg, "eventually"


def _check_counterexample(problem, cx: dict) -> bool:
    if cx.get("components"):
        return _check_components(problem, cx["components"])
    asg, reading = _assignment(problem, cx)
    return not oracle.eval_formula(problem.formula, asg, reading)


def _check_components(problem, comps) -> bool:
    """Some clause has every hypothesis true and disjunct ``j`` false in
    component ``j``; amalgamating the components then refutes it."""
    body, defs = _prepared(problem)
    asgs = []
    for c in comps:
        asg, reading = _assignment(problem, c)
        for a in list(asg.values):
            if isinstance(a, Var) and signs.is_fresh(a):
                raise _Reject("definitions are recomputed, not supplied")
        asgs.append((oracle.extend(asg, [(d.fresh, d.body) for d in defs]), reading))
    for clause in formula.to_clauses(body):
        if len(clause.disjuncts) != len(asgs):
            continue
        if all(all(oracle.holds(h, asg, reading) for h in clause.hyps)
               and not oracle.holds(psi, asg, reading)
               for psi, (asg, reading) in zip(clause.disjuncts, asgs)):
            return True
    return False


def verify(report, problem: Problem) -> bool:
    """Re-check a report against the problem it claims to answer."""
    data = report.model_dump() if isinstance(report, VerdictReport) else dict(report)
    try:
        if data["verdict"] == "valid":
            return data.get("certificate") is not None and \
                _check_certificate(problem, data["certificate"])
        if data["verdict"] == "invalid":
            return data.get("counterexample") is not None and \
                _check_counterexample(problem, data["counterexample"])
    except (_Reject, BigOError, KeyError, ValueError, TypeError, IndexError,
            ZeroDivisionError):
        return False
    return False


def atoms_in_report(report: VerdictReport) -> list:
    cx = report.counterexample
    return sort_atoms(cx.values) if cx else []
