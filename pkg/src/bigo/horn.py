"""Deciding Horn clauses over nonnegative functions.

A clause ``q_1 = O(r_1) & ... & q_n = O(r_n) -> s = O(t)`` is first brought
to reduced form.  Starting from the atoms of ``t`` the bound set ``A`` grows
by every atom that some nonnegative combination of the usable hypotheses
(those with ``r`` inside ``A``) proves to be ``O(t)``.  The clause is valid
exactly when ``s[A]`` lies in the span of those hypotheses; otherwise a
counterexample on a one-point domain is built from the dual witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import InternalInvariantViolation, UnsupportedBound
from .terms import (BigOAtom, LinearExpr, formula_symbols, linearize, reduce_atom,
                    sort_atoms)

@dataclass(frozen=True)
class HornClause:
    hyps: tuple            # ((q, r_support), ...)
    concl: tuple           # (s, t_support)
    vars: tuple            # every atom, canonical order

    @classmethod
    def from_atoms(cls, hyps: Sequence[BigOAtom], concl: BigOAtom, extra=()):
        """Reduce the atoms; bounds must have positive coefficients."""
        reduced = []
        symbols = set(extra)
        for a in list(hyps) + [concl]:
            bound = linearize(a.bound)
            if any(c < 0 for _, c in bound.items()):
                raise UnsupportedBound(
                    f"bound {a.bound} has a negative coefficient; "
                    "use the signed theory for functions of arbitrary sign")
            reduced.append(reduce_atom(a))
            symbols |= formula_symbols(a)
        return cls(tuple(reduced[:-1]), reduced[-1], tuple(sort_atoms(symbols)))

    @property
    def s(self) -> LinearExpr:
        return self.concl[0]

    @property
    def t_support(self) -> frozenset:
        return self.concl[1]

@dataclass(frozen=True)
class TraceStep:
    atom: object
    combination: tuple     # ((hyp_index, coefficient), ...)

@dataclass(frozen=True)
class SaturationState:
    A: frozenset
    Q: tuple               # ((hyp_index, q[A]), ...)
    trace: tuple = ()

@dataclass(frozen=True)
class HornCertificate:
    """``s[A] = sum coef_i * q_i[A]`` over the listed hypotheses."""

    coefficients: tuple    # ((hyp_index, coefficient), ...)
    bound_set: tuple
    trace: tuple

@dataclass(frozen=True)
class Counterexample:
    """Functions on ``{0, .., domain_size-1}``.

    Each value is, per domain point, a coefficient vector over the basis
    ``1, x, .., x^degree``.  A counterexample made of per-disjunct models
    keeps them in ``components`` instead (``values`` is then empty).
    """

    domain_size: int
    degree: int
    values: Mapping
    components: tuple = ()

    @classmethod
    def constant(cls, values: Mapping):
        return cls(1, 0, {a: ((Fraction(v),),) for a, v in values.items()})

    def value(self, atom, point=0) -> tuple:
        zero = (Fraction(0),) * (self.degree + 1)
        return self.values.get(atom, (zero,) * self.domain_size)[point]

    def scalar(self, atom, point=0) -> Fraction:
        return self.value(atom, point)[0]

    def atoms(self):
        return sort_atoms(self.values)

    def basis(self):
        return ["1"] + [("x" if i == 1 else f"x^{i}") for i in range(1, self.degree + 1)]

@dataclass(frozen=True)
class Valid:
    certificate: object = None
    info: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return True

@dataclass(frozen=True)
class Invalid:
    counterexample: Counterexample
    info: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return False

def _usable(h: HornClause, A) -> tuple:
    return tuple((i, q.delete(A)) for i, (q, r) in enumerate(h.hyps) if r <= A)

def saturate(h: HornClause, order=None) -> SaturationState:
    """Grow the bound set until no further atom is provably ``O(t)``."""
    A = set(h.t_support)
    probe = list(order) if order is not None else list(h.vars)
    trace = []
    changed = True
    while changed:
        changed = False
        for v in probe:
            if v in A:
                continue
            Q = _usable(h, A)
            if not Q:
                break
            cols = [a for a in h.vars if a not in A]
            M = [[q[a] for a in cols] for _, q in Q]
            w = linalg.positive_combination(M, cols.index(v), len(cols))
            if w is None:
                continue
            A.add(v)
            trace.append(TraceStep(v, tuple((Q[k][0], b) for k, b in enumerate(w.b) if b)))
            changed = True
    return SaturationState(frozenset(A), _usable(h, A), tuple(trace))

def build_counterexample(h: HornClause, st: SaturationState) -> Counterexample:
    """One-point model: zero on ``A``, ``e*c + d`` elsewhere (least ``e >= 0``)."""
    cols = [a for a in h.vars if a not in st.A]
    target = h.s.delete(st.A)
    rows = [[q[a] for a in cols] for _, q in st.Q]
    c = linalg.positive_kernel(rows, range(len(cols)), len(cols))
    if c is None:
        raise InternalInvariantViolation("no strictly positive kernel vector")
    c = linalg.primitive(c)
    tvec = [target[a] for a in cols]
    d = next((v for v in linalg.nullspace(rows, len(cols))
              if sum(x * y for x, y in zip(tvec, v)) != 0), None)
    if d is None:
        raise InternalInvariantViolation("s[A] lies in the span of Q")
    d = linalg.primitive(d)
    x = sum(t * ci for t, ci in zip(tvec, c))
    y = sum(t * di for t, di in zip(tvec, d))
    e = 0
    for ci, di in zip(c, d):
        e = max(e, -di // ci + 1)
    if e * x + y == 0:
        e += 1
    values = {a: 0 for a in h.vars}
    for a, ci, di in zip(cols, c, d):
        values[a] = e * ci + di
    return Counterexample.constant(values)

def decide(h: HornClause):
    st = saturate(h)
    target = h.s.delete(st.A)
    coeffs = linalg.span_membership([q for _, q in st.Q], target)
    info = {"bound_set": st.A}
    if coeffs is not None:
        cert = HornCertificate(
            tuple((st.Q[k][0], b) for k, b in enumerate(coeffs) if b),
            tuple(sort_atoms(st.A)), st.trace)
        return Valid(cert, info)
    return Invalid(build_counterexample(h, st), info)

def decide_atoms(hyps: Sequence[BigOAtom], concl: BigOAtom, extra=()):
    return decide(HornClause.from_atoms(hyps, concl, extra))

def check_certificate(h: HornClause, cert: HornCertificate) -> bool:
    """Replay the saturation trace and the final span identity exactly."""
    A = set(h.t_support)
    for step in cert.trace:
        if step.atom in A:
            return False
        combo = LinearExpr()
        for i, b in step.combination:
            if not 0 <= i < len(h.hyps):
                return False
            q, r = h.hyps[i]
            if not r <= A:
                return False
            combo = combo + q.delete(A) * b
        if any(c < 0 for _, c in combo.items()) or combo[step.atom] <= 0:
            return False
        A.add(step.atom)
    if A != set(cert.bound_set):
        return False
    total = LinearExpr()
    for i, b in cert.coefficients:
        if not 0 <= i < len(h.hyps):
            return False
        q, r = h.hyps[i]
        if not r <= A:
            return False
        total = total + q.delete(A) * b
    return total == h.s.delete(A)
