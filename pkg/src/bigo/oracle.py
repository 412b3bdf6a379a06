"""Independent semantic evaluators.

Two models are supported: functions on a finite domain ``{0, .., n-1}``
given by their value lists, and polynomials in ``x`` over the positive
integers read "eventually".  Nothing here depends on the decision code,
so these evaluators can be used to check its answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import UnboundAtom, UnsupportedConnective
from .terms import (Abs, Add, And, BigOAtom, Growth, Implies, Max, Min, Neg, Not,
                    One, Or, Scale, Sub, Var, Zero, formula_symbols, sort_atoms)

POINTWISE = "pointwise"
EVENTUALLY = "eventually"


@dataclass(frozen=True)
class FiniteAssignment:
    domain_size: int
    values: Mapping = field(default_factory=dict)

    def lookup(self, atom) -> tuple:
        if isinstance(atom, One) and atom not in self.values:
            return (Fraction(1),) * self.domain_size
        try:
            vec = self.values[atom]
        except KeyError:
            raise UnboundAtom(f"no value for {atom}") from None
        return tuple(Fraction(v) for v in vec)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for vec in self.values.values() for v in vec)


@dataclass(frozen=True)
class PolyAssignment:
    """Polynomial values, ascending coefficients; ``g[i]`` may default to ``x^d``."""

    values: Mapping = field(default_factory=dict)
    growth_degrees: Mapping = field(default_factory=dict)

    def lookup(self, atom) -> tuple:
        if atom in self.values:
            return _trim(tuple(Fraction(v) for v in self.values[atom]))
        if isinstance(atom, One):
            return (Fraction(1),)
        if isinstance(atom, Growth) and atom.index in self.growth_degrees:
            return monomial(self.growth_degrees[atom.index])
        raise UnboundAtom(f"no value for {atom}")


# polynomial helpers -------------------------------------------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def monomial(d, c=1) -> tuple:
    return _trim((Fraction(0),) * d + (Fraction(c),))


def poly_add(p, q):
    n = max(len(p), len(q))
    p = tuple(p) + (Fraction(0),) * (n - len(p))
    q = tuple(q) + (Fraction(0),) * (n - len(q))
    return _trim(a + b for a, b in zip(p, q))


def poly_scale(p, c):
    return _trim(Fraction(c) * a for a in p)


def poly_degree(p):
    """Degree, with ``None`` standing for the zero polynomial."""
    p = _trim(p)
    return len(p) - 1 if p else None


def eventual_sign(p) -> int:
    p = _trim(p)
    return 0 if not p else (1 if p[-1] > 0 else -1)


def poly_eval(p, x):
    return sum(Fraction(c) * Fraction(x) ** i for i, c in enumerate(p))


# term evaluation ----------------------------------------------------------

def eval_finite(t, asg: FiniteAssignment) -> tuple:
    n = asg.domain_size
    if isinstance(t, (Var, One, Growth)):
        return asg.lookup(t)
    if isinstance(t, Zero):
        return (Fraction(0),) * n
    if isinstance(t, (Add, Sub, Min, Max)):
        a, b = eval_finite(t.left, asg), eval_finite(t.right, asg)
        op = {Add: lambda x, y: x + y, Sub: lambda x, y: x - y,
              Min: min, Max: max}[type(t)]
        return tuple(op(x, y) for x, y in zip(a, b))
    if isinstance(t, Neg):
        return tuple(-x for x in eval_finite(t.arg, asg))
    if isinstance(t, Scale):
        return tuple(t.coef * x for x in eval_finite(t.arg, asg))
    if isinstance(t, Abs):
        return tuple(abs(x) for x in eval_finite(t.arg, asg))
    raise TypeError(f"not a term: {t!r}")


def eval_poly(t, asg: PolyAssignment) -> tuple:
    """Evaluate to a polynomial; abs/min/max follow the eventual sign."""
    if isinstance(t, (Var, One, Growth)):
        return asg.lookup(t)
    if isinstance(t, Zero):
        return ()
    if isinstance(t, Add):
        return poly_add(eval_poly(t.left, asg), eval_poly(t.right, asg))
    if isinstance(t, Sub):
        return poly_add(eval_poly(t.left, asg), poly_scale(eval_poly(t.right, asg), -1))
    if isinstance(t, Neg):
        return poly_scale(eval_poly(t.arg, asg), -1)
    if isinstance(t, Scale):
        return poly_scale(eval_poly(t.arg, asg), t.coef)
    if isinstance(t, Abs):
        p = eval_poly(t.arg, asg)
        return poly_scale(p, -1) if eventual_sign(p) < 0 else p
    if isinstance(t, (Min, Max)):
        a, b = eval_poly(t.left, asg), eval_poly(t.right, asg)
        a_bigger = eventual_sign(poly_add(a, poly_scale(b, -1))) > 0
        return (a if a_bigger else b) if isinstance(t, Max) else (b if a_bigger else a)
    raise TypeError(f"not a term: {t!r}")


# atoms and formulas -------------------------------------------------------

def holds_pointwise(a: BigOAtom, asg: FiniteAssignment) -> bool:
    """On a finite domain a constant exists iff lhs = rhs wherever the bound is 0."""
    lhs, rhs, bound = (eval_finite(t, asg) for t in (a.lhs, a.rhs, a.bound))
    return all(l == r for l, r, b in zip(lhs, rhs, bound) if b == 0)


def holds_eventually_poly(a: BigOAtom, asg: PolyAssignment) -> bool:
    diff = poly_add(eval_poly(a.lhs, asg), poly_scale(eval_poly(a.rhs, asg), -1))
    dd, db = poly_degree(diff), poly_degree(eval_poly(a.bound, asg))
    if dd is None:
        return True
    return db is not None and dd <= db


def holds(a: BigOAtom, asg, reading=POINTWISE) -> bool:
    if isinstance(asg, PolyAssignment):
        if reading != EVENTUALLY:
            raise UnsupportedConnective(
                "polynomial assignments are only evaluated under the eventually reading")
        return holds_eventually_poly(a, asg)
    # a finite assignment is read as a periodic function, where "eventually"
    # and "everywhere" coincide
    return holds_pointwise(a, asg)


def eval_formula(phi, asg, reading=POINTWISE) -> bool:
    if isinstance(phi, BigOAtom):
        return holds(phi, asg, reading)
    if isinstance(phi, Not):
        return not eval_formula(phi.arg, asg, reading)
    if isinstance(phi, And):
        return eval_formula(phi.left, asg, reading) and eval_formula(phi.right, asg, reading)
    if isinstance(phi, Or):
        return eval_formula(phi.left, asg, reading) or eval_formula(phi.right, asg, reading)
    if isinstance(phi, Implies):
        return (not eval_formula(phi.left, asg, reading)) or eval_formula(phi.right, asg, reading)
    raise TypeError(f"not a formula: {phi!r}")


def from_counterexample(cx, growth_degrees=None, atoms=()):
    """Turn a reported model into an assignment this module can evaluate.

    ``atoms`` lists further atoms to bind; a model leaves them at zero.
    """
    atoms = set(cx.values) | set(atoms)
    if cx.degree == 0 and not growth_degrees:
        return FiniteAssignment(cx.domain_size, {
            a: tuple(cx.value(a, i)[0] for i in range(cx.domain_size)) for a in atoms})
    if cx.domain_size != 1:
        raise UnsupportedConnective("polynomial models live on a single point")
    return PolyAssignment({a: cx.value(a) for a in atoms}, dict(growth_degrees or {}))


def extend(asg, defs):
    """Add values for defined atoms ``h := body``, in order."""
    values = dict(asg.values)
    for h, body in defs:
        if isinstance(asg, PolyAssignment):
            values[h] = eval_poly(body, PolyAssignment(values, asg.growth_degrees))
        else:
            values[h] = eval_finite(body, FiniteAssignment(asg.domain_size, values))
    if isinstance(asg, PolyAssignment):
        return PolyAssignment(values, asg.growth_degrees)
    return FiniteAssignment(asg.domain_size, values)


# random search ------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    domain_size: int = 1
    low: int = 0
    high: int = 4
    nonneg: bool = True
    seed: int = 0


def random_search(phi, budget: int, profile: Profile = Profile()):
    """First falsifying assignment among ``budget`` seeded samples, or None."""
    rng = random.Random(profile.seed)
    low = max(profile.low, 0) if profile.nonneg else profile.low
    symbols = [a for a in sort_atoms(formula_symbols(phi)) if not isinstance(a, One)]
    if any(isinstance(a, Growth) for a in symbols):
        raise UnsupportedConnective("growth symbols have no finite-domain meaning")
    for _ in range(budget):
        values = {a: tuple(Fraction(rng.randint(low, profile.high))
                           for _ in range(profile.domain_size)) for a in symbols}
        asg = FiniteAssignment(profile.domain_size, values)
        if not eval_formula(phi, asg):
            return asg
    return None
