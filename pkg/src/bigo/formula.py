"""Quantifier-free formulas: clause decomposition and amalgamation.

A formula is valid iff each CNF clause ``hyps -> psi_1 | ... | psi_l`` is,
and a clause is valid iff one of its Horn clauses ``hyps -> psi_j`` is.
Counterexamples to the individual Horn clauses are glued side by side on a
domain with one point per disjunct.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import horn
from .errors import BasisMismatch
from .horn import Counterexample, Invalid, Valid
from .terms import And, BigOAtom, Implies, Not, Or, Var, ZERO

#: Reserved variable for the empty disjunction; ``w = O(0)`` with ``w`` set to 1.
BOTTOM_VAR = Var("⊥")
BOTTOM = BigOAtom(BOTTOM_VAR, ZERO, ZERO)


@dataclass(frozen=True)
class ImplicativeClause:
    hyps: tuple
    disjuncts: tuple


@dataclass(frozen=True)
class ClauseProof:
    clause: int
    disjunct: int
    proof: object


@dataclass(frozen=True)
class FormulaCertificate:
    clauses: tuple


def _unique(items):
    return tuple(dict.fromkeys(items))


def _cnf(f, positive):
    if isinstance(f, BigOAtom):
        return [((f, positive),)]
    if isinstance(f, Not):
        return _cnf(f.arg, not positive)
    if isinstance(f, Implies):
        return _cnf(Or(Not(f.left), f.right), positive)
    conjunctive = isinstance(f, And) == positive
    left, right = _cnf(f.left, positive), _cnf(f.right, positive)
    if conjunctive:
        return list(_unique(left + right))
    return list(_unique(_unique(a + b) for a in left for b in right))


def to_clauses(phi) -> list:
    """Distributive CNF, each clause split into hypotheses and disjuncts."""
    out = []
    for clause in _cnf(phi, True):
        hyps = tuple(a for a, pos in clause if not pos)
        disjuncts = tuple(a for a, pos in clause if pos) or (BOTTOM,)
        out.append(ImplicativeClause(hyps, disjuncts))
    return list(_unique(out))


def amalgamate(cxs) -> Counterexample:
    """Put the ``j``-th one-point model at point ``j``; missing atoms are 0."""
    cxs = list(cxs)
    if len(cxs) == 1:
        return cxs[0]
    degree = cxs[0].degree
    for cx in cxs:
        if cx.domain_size != 1 or cx.degree != degree or cx.components:
            raise BasisMismatch("amalgamation needs one-point models over one basis")
    atoms = set()
    for cx in cxs:
        atoms |= set(cx.values)
    values = {a: tuple(cx.value(a) for cx in cxs) for a in atoms}
    return Counterexample(len(cxs), degree, values)


def _fix_bottom(cx: Counterexample) -> Counterexample:
    if cx.components:
        return Counterexample(cx.domain_size, cx.degree, cx.values,
                              tuple(_fix_bottom(c) for c in cx.components))
    if BOTTOM_VAR not in cx.values:
        return cx
    one = (Fraction(1),) + (Fraction(0),) * cx.degree
    values = dict(cx.values)
    values[BOTTOM_VAR] = (one,) * cx.domain_size
    return Counterexample(cx.domain_size, cx.degree, values)


def combine(cxs) -> Counterexample:
    """Amalgamate constant models; keep polynomial ones as components."""
    cxs = list(cxs)
    if len(cxs) == 1:
        cx = cxs[0]
    elif all(cx.degree == 0 and cx.domain_size == 1 and not cx.components
             for cx in cxs):
        cx = amalgamate(cxs)
    else:
        cx = Counterexample(0, max(cx.degree for cx in cxs), {}, tuple(cxs))
    return _fix_bottom(cx)


def decide_clauses(clauses, decider):
    """Decide each clause with ``decider(hyps, psi)``; first failing clause wins."""
    proofs = []
    for ci, clause in enumerate(clauses):
        failures = []
        for j, psi in enumerate(clause.disjuncts):
            verdict = decider(clause.hyps, psi)
            if verdict:
                proofs.append(ClauseProof(ci, j, verdict.certificate))
                break
            failures.append(verdict)
        else:
            cx = combine(v.counterexample for v in failures)
            return Invalid(cx, {"clause": ci, "clauses": clauses,
                                "disjuncts": tuple(failures)})
    return Valid(FormulaCertificate(tuple(proofs)), {"clauses": clauses})


def decide_qf(phi):
    """Validity over nonnegative functions for an abs/min/max-free formula."""
    return decide_clauses(to_clauses(phi), horn.decide_atoms)
