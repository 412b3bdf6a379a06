"""Seeded random terms, atoms and formulas for fuzzing."""

from __future__ import annotations

import random
from fractions import Fraction

from .terms import (ONE, Abs, Add, And, BigOAtom, Growth, Implies, Max, Min, Neg, Not,
                    Or, Scale, Sub, Var, ZERO, conj)

NAMES = ("f", "g", "h", "k", "l", "m", "n", "p", "q", "r")


def variables(n):
    return [Var(NAMES[i]) if i < len(NAMES) else Var(f"f{i}") for i in range(n)]


def linear(rng: random.Random, atoms, lo=-3, hi=3, density=0.6):
    """Random linear combination; may be zero."""
    out = None
    for a in atoms:
        if rng.random() > density:
            continue
        c = rng.randint(lo, hi)
        if c == 0:
            continue
        piece = a if c == 1 else Scale(Fraction(c), a)
        out = piece if out is None else Add(out, piece)
    return ZERO if out is None else out


def positive_bound(rng, atoms, hi=3, density=0.4):
    return linear(rng, atoms, 1, hi, density)


def core_atom(rng, atoms, lo=-3, hi=3):
    lhs = linear(rng, atoms, lo, hi)
    rhs = linear(rng, atoms, lo, hi, 0.3) if rng.random() < 0.3 else ZERO
    return BigOAtom(lhs, rhs, positive_bound(rng, atoms, hi))


def horn_clause(rng, max_vars=5, max_hyps=4, lo=-3, hi=3, atoms=None):
    """``(hyps, concl)`` over nonnegative variables."""
    atoms = atoms or variables(rng.randint(1, max_vars))
    hyps = [core_atom(rng, atoms, lo, hi) for _ in range(rng.randint(0, max_hyps))]
    return hyps, core_atom(rng, atoms, lo, hi)


def horn_formula(hyps, concl):
    return Implies(conj(hyps), concl) if hyps else concl


def _formula(rng, depth, make_atom):
    if depth <= 0 or rng.random() < 0.3:
        return make_atom()
    op = rng.choice(("and", "or", "imp", "not"))
    if op == "not":
        return Not(_formula(rng, depth - 1, make_atom))
    left = _formula(rng, depth - 1, make_atom)
    right = _formula(rng, depth - 1, make_atom)
    return {"and": And, "or": Or, "imp": Implies}[op](left, right)


def core_formula(rng, max_vars=3, depth=4):
    atoms = variables(rng.randint(1, max_vars))
    return _formula(rng, depth, lambda: core_atom(rng, atoms, -2, 2))


def signed_term(rng, atoms, depth=2):
    if depth <= 0 or rng.random() < 0.35:
        if rng.random() < 0.15:
            return ZERO
        a = rng.choice(atoms)
        c = rng.randint(-2, 2) or 1
        return a if c == 1 else Scale(Fraction(c), a)
    op = rng.choice(("add", "sub", "neg", "abs", "min", "max"))
    if op in ("neg", "abs"):
        return (Neg if op == "neg" else Abs)(signed_term(rng, atoms, depth - 1))
    kind = {"add": Add, "sub": Sub, "min": Min, "max": Max}[op]
    return kind(signed_term(rng, atoms, depth - 1), signed_term(rng, atoms, depth - 1))


def signed_atom(rng, atoms):
    rhs = signed_term(rng, atoms, 1) if rng.random() < 0.3 else ZERO
    return BigOAtom(signed_term(rng, atoms), rhs, signed_term(rng, atoms, 1))


def signed_formula(rng, max_vars=2, depth=2):
    atoms = variables(rng.randint(1, max_vars))
    return _formula(rng, depth, lambda: signed_atom(rng, atoms))


def with_one_formula(rng, max_vars=3, depth=3):
    atoms = variables(rng.randint(1, max_vars)) + [ONE]
    return _formula(rng, depth, lambda: core_atom(rng, atoms, -2, 2))


def growth_horn(rng, k=2, max_vars=3, max_hyps=3):
    scale = [Growth(Fraction(i)) for i in range(1, k + 1)]
    atoms = variables(rng.randint(1, max_vars)) + scale
    hyps = [core_atom(rng, atoms, -2, 2) for _ in range(rng.randint(0, max_hyps))]
    return hyps, core_atom(rng, atoms, -2, 2)
