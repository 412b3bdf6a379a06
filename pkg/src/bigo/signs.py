"""Functions of arbitrary sign, with subtraction, absolute value, min and max.

Bounds are first wrapped in ``|.|`` and min/max are rewritten with absolute
values.  Every ``|t|`` with ``t`` not a single symbol is then named by a
fresh variable ``_hN`` defined by ``_hN = t``.  Afterwards each Horn clause
is checked once for every choice of sign for the variables it uses outside
``|.|``: a variable ``v`` of sign ``-`` is replaced by ``-v`` and ``|v|`` by
``v``, which leaves a clause over nonnegative functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import formula, horn
from .horn import Counterexample, Invalid, Valid
from .terms import (ATOM_TYPES, Abs, Add, BigOAtom, Implies, Max, Min, Neg, Not, Scale,
                    Sub, Var, ZERO, Zero, atom_key, conj, format_term, term_children)

FRESH_PREFIX = "_h"
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class AbsDef:
    fresh: Var
    body: object


@dataclass(frozen=True)
class SignAssignment:
    signs: tuple           # ((atom, +1 | -1), ...)

    def sign(self, atom) -> int:
        return dict(self.signs).get(atom, 1)

    def __str__(self):
        return ", ".join(f"{a}:{'+' if s > 0 else '-'}" for a, s in self.signs)


@dataclass(frozen=True)
class BranchProof:
    signs: SignAssignment
    hyps: tuple
    concl: BigOAtom
    proof: object


@dataclass(frozen=True)
class SignedCertificate:
    defs: tuple
    branches: tuple


def is_fresh(atom) -> bool:
    return isinstance(atom, Var) and atom.name.startswith(FRESH_PREFIX)


def map_atoms(phi, fn):
    """Apply ``fn`` to every BigO atom of a formula."""
    if isinstance(phi, BigOAtom):
        return fn(phi)
    if isinstance(phi, Not):
        return Not(map_atoms(phi.arg, fn))
    return type(phi)(map_atoms(phi.left, fn), map_atoms(phi.right, fn))


def map_terms(phi, fn):
    return map_atoms(phi, lambda a: BigOAtom(fn(a.lhs), fn(a.rhs), fn(a.bound)))


# normalization ------------------------------------------------------------

def _key(k):
    return (0, atom_key(k)) if isinstance(k, ATOM_TYPES) else (1, format_term(k))


def _collect(t) -> dict:
    """Linear combination over symbols and canonical ``|.|`` nodes."""
    if isinstance(t, ATOM_TYPES):
        return {t: Fraction(1)}
    if isinstance(t, Zero):
        return {}
    if isinstance(t, (Add, Sub)):
        out = dict(_collect(t.left))
        sign = 1 if isinstance(t, Add) else -1
        for k, c in _collect(t.right).items():
            out[k] = out.get(k, 0) + sign * c
        return {k: c for k, c in out.items() if c}
    if isinstance(t, Neg):
        return {k: -c for k, c in _collect(t.arg).items()}
    if isinstance(t, Scale):
        return {k: t.coef * c for k, c in _collect(t.arg).items() if t.coef * c}
    if isinstance(t, Abs):
        inner = _collect(t.arg)
        if not inner:
            return {}
        if len(inner) == 1:
            (k, c), = inner.items()
            if isinstance(k, ATOM_TYPES) or isinstance(k, Abs):
                return {Abs(k) if isinstance(k, ATOM_TYPES) else k: abs(c)}
        first = min(inner, key=_key)
        if inner[first] < 0:
            inner = {k: -c for k, c in inner.items()}
        return {Abs(_rebuild(inner)): Fraction(1)}
    raise TypeError(f"min/max must be eliminated first: {t!r}")


def _rebuild(d: dict):
    acc = None
    for k in sorted(d, key=_key):
        c = d[k]
        piece = k if abs(c) == 1 else Scale(abs(c), k)
        if acc is None:
            acc = piece if c > 0 else Neg(piece)
        else:
            acc = Add(acc, piece) if c > 0 else Sub(acc, piece)
    return ZERO if acc is None else acc


def normalize(t):
    """Collect like terms, collapse ``||t||``, ``|0|`` and ``|c*f|``."""
    return _rebuild(_collect(t))


def eliminate_minmax(t):
    if isinstance(t, (Min, Max)):
        a, b = eliminate_minmax(t.left), eliminate_minmax(t.right)
        diff = Abs(Sub(a, b))
        return Scale(HALF, Sub(Add(a, b), diff) if isinstance(t, Min) else Add(Add(a, b), diff))
    if isinstance(t, (Add, Sub)):
        return type(t)(eliminate_minmax(t.left), eliminate_minmax(t.right))
    if isinstance(t, Scale):
        return Scale(t.coef, eliminate_minmax(t.arg))
    if isinstance(t, (Neg, Abs)):
        return type(t)(eliminate_minmax(t.arg))
    return t


def wrap_bounds(phi):
    """``s = r + O(t)`` becomes ``s = r + O(|t|)``, simplified."""
    return map_atoms(phi, lambda a: BigOAtom(a.lhs, a.rhs, normalize(Abs(eliminate_minmax(a.bound)))))


# abs extraction -----------------------------------------------------------

def extract_abs(phi):
    """Name every compound ``|t|`` innermost-first; returns ``(phi', defs)``."""
    table = {}
    defs = []

    def walk(t):
        if isinstance(t, Abs):
            body = walk(t.arg)
            if isinstance(body, ATOM_TYPES):
                return Abs(body)
            if body not in table:
                fresh = Var(f"{FRESH_PREFIX}{len(defs) + 1}")
                table[body] = fresh
                defs.append(AbsDef(fresh, body))
            return Abs(table[body])
        kids = term_children(t)
        if not kids:
            return t
        if isinstance(t, Scale):
            return Scale(t.coef, walk(t.arg))
        if isinstance(t, Neg):
            return Neg(walk(t.arg))
        return type(t)(*(walk(k) for k in kids))

    return map_terms(phi, walk), tuple(defs)


def prepare(phi):
    """Wrap bounds, drop min/max, normalize, extract; returns ``(phi', defs)``."""
    phi = wrap_bounds(phi)
    phi = map_terms(phi, lambda t: normalize(eliminate_minmax(t)))
    return extract_abs(phi)


def def_atom(d: AbsDef) -> BigOAtom:
    return BigOAtom(d.fresh, d.body, ZERO)


def with_definitions(phi):
    """The equivalent formula ``defs -> phi'`` over fresh variables."""
    body, defs = prepare(phi)
    if not defs:
        return body
    return Implies(conj([def_atom(d) for d in defs]), body)


# sign branches ------------------------------------------------------------

def _outside_abs(t, out):
    if isinstance(t, Var):
        out.add(t)
    elif not isinstance(t, Abs):
        for k in term_children(t):
            _outside_abs(k, out)


def _inside(t, out):
    if isinstance(t, Var):
        out.add(t)
    for k in term_children(t):
        _inside(k, out)


def _atom_terms(a):
    return (a.lhs, a.rhs, a.bound)


def needed_defs(atoms, defs) -> tuple:
    """Definitions of the fresh variables used by ``atoms``, transitively."""
    used = set()
    for a in atoms:
        for t in _atom_terms(a):
            _inside(t, used)
    changed = True
    while changed:
        changed = False
        for d in defs:
            if d.fresh in used:
                before = len(used)
                _inside(d.body, used)
                changed |= len(used) != before
    return tuple(d for d in defs if d.fresh in used)


def substitute(t, signs: dict):
    """Replace ``v`` by ``-v`` for negative ``v`` and ``|a|`` by ``a``."""
    if isinstance(t, Abs):
        if not isinstance(t.arg, ATOM_TYPES):
            raise TypeError(f"compound abs left after extraction: {t}")
        return t.arg
    if isinstance(t, Var):
        return Neg(t) if signs.get(t, 1) < 0 else t
    if isinstance(t, Scale):
        return Scale(t.coef, substitute(t.arg, signs))
    if isinstance(t, Neg):
        return Neg(substitute(t.arg, signs))
    if isinstance(t, (Add, Sub)):
        left, right = substitute(t.left, signs), substitute(t.right, signs)
        if isinstance(right, Neg):
            return (Sub if isinstance(t, Add) else Add)(left, right.arg)
        return type(t)(left, right)
    return t


def split_atoms(atoms, defs) -> list:
    """Variables needing a sign: used outside ``|.|``; fresh ones last."""
    found = set()
    for a in atoms:
        for t in _atom_terms(a):
            _outside_abs(t, found)
    plain = sorted((v for v in found if not is_fresh(v)), key=atom_key)
    fresh = [d.fresh for d in defs if d.fresh in found]
    return plain + fresh


def sign_assignments(atoms):
    for combo in itertools.product((1, -1), repeat=len(atoms)):
        yield SignAssignment(tuple(zip(atoms, combo)))


def back_map(cx: Counterexample, signs: SignAssignment) -> Counterexample:
    """``v := sign(v) * value(alpha_v)``, dropping fresh variables."""
    if cx.components:
        return Counterexample(cx.domain_size, cx.degree, {},
                              tuple(back_map(c, signs) for c in cx.components))
    values = {}
    for a, vecs in cx.values.items():
        if is_fresh(a):
            continue
        s = signs.sign(a)
        values[a] = tuple(tuple(s * c for c in vec) for vec in vecs)
    return Counterexample(cx.domain_size, cx.degree, values)


def substitute_atom(a, signs: dict) -> BigOAtom:
    return BigOAtom(*(substitute(t, signs) for t in _atom_terms(a)))


def branches(hyps, concl, defs):
    """``(signs, hyps', concl')`` for each sign choice, skipping repeats."""
    used = needed_defs(tuple(hyps) + (concl,), defs)
    full_hyps = tuple(def_atom(d) for d in used) + tuple(hyps)
    seen = set()
    for sa in sign_assignments(split_atoms(full_hyps + (concl,), used)):
        signs = dict(sa.signs)
        h2 = tuple(dict.fromkeys(substitute_atom(a, signs) for a in full_hyps))
        c2 = substitute_atom(concl, signs)
        if (h2, c2) in seen:
            continue
        seen.add((h2, c2))
        yield sa, h2, c2


def signed_horn(hyps, concl, defs, decider=horn.decide_atoms):
    """Decide one Horn clause in every sign branch; first failing branch wins."""
    proofs = []
    for sa, h2, c2 in branches(hyps, concl, defs):
        verdict = decider(h2, c2)
        if not verdict:
            info = dict(verdict.info)
            info.update(signs=sa, branch_hyps=h2, branch_concl=c2)
            return Invalid(back_map(verdict.counterexample, sa), info)
        proofs.append(BranchProof(sa, h2, c2, verdict.certificate))
    return Valid(SignedCertificate(needed_defs(tuple(hyps) + (concl,), defs), tuple(proofs)),
                 {"branches": len(proofs)})


def decide_signed(phi, decider=horn.decide_atoms):
    """Validity over functions of arbitrary sign."""
    body, defs = prepare(phi)
    verdict = formula.decide_clauses(
        formula.to_clauses(body),
        lambda hyps, psi: signed_horn(hyps, psi, defs, decider))
    verdict.info["defs"] = defs
    return verdict
