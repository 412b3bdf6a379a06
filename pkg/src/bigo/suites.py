"""Built-in regression suites: axiom instances, derived facts, LP duality."""

from __future__ import annotations

import itertools
import random

from . import linalg
from .terms import Add, BigOAtom, Implies, And, Var, ZERO, big_o


def _sum(terms):
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def _times(k, f):
    """``k f`` as the ``k``-fold sum ``f + .. + f``."""
    return _sum([f] * k)


def _iff(a, b):
    return And(Implies(a, b), Implies(b, a))


def axiom_instances(names=("f", "g", "h"), max_k=5):
    """Every axiom scheme instantiated with variables from ``names``."""
    vs = [Var(n) for n in names]
    out = []

    def each(arity):
        return itertools.product(vs, repeat=arity)

    for f, g in each(2):
        out.append(("equality", _iff(BigOAtom(f, g), BigOAtom(f, g, ZERO))))
    for f, g, h in each(3):
        out.append(("associativity", BigOAtom(Add(f, Add(g, h)), Add(Add(f, g), h))))
    for f, g in each(2):
        out.append(("commutativity", BigOAtom(Add(f, g), Add(g, f))))
        out.append(("identity", BigOAtom(Add(f, ZERO), f)))
    for f, g, h in each(3):
        out.append(("reflexivity", big_o(f, h, f)))
        out.append(("symmetry", Implies(big_o(f, h, g), big_o(g, h, f))))
        out.append(("monotonicity", big_o(f, Add(f, g))))
    for f, g, h, k in each(4):
        out.append(("transitivity of =",
                    Implies(And(big_o(f, h, g), big_o(g, h, k)), big_o(f, h, k))))
        out.append(("transitivity of O",
                    Implies(And(big_o(f, h, g), big_o(h, k)), big_o(f, k, g))))
    for f1, g1, f2, g2, h in each(5):
        out.append(("linearity a",
                    Implies(And(big_o(f1, h, g1), big_o(f2, h, g2)),
                            big_o(Add(f1, f2), h, Add(g1, g2)))))
        out.append(("linearity b",
                    Implies(And(big_o(Add(f1, f2), h, Add(g1, g2)), big_o(f1, h, g1)),
                            big_o(f2, h, g2))))
    for k in range(1, max_k + 1):
        for f, g, h in each(3):
            out.append((f"linearity c (k={k})",
                        Implies(big_o(_times(k, f), h, _times(k, g)), big_o(f, h, g))))
    return out


def derived_facts(rng: random.Random, names=("f", "g", "h"), max_k=10, samples=20):
    vs = [Var(n) for n in names]
    out = []
    for f, g, h in itertools.product(vs, repeat=3):
        out.append(("sum bound", Implies(big_o(Add(f, g), h), big_o(f, h))))
    for f1, g1, h1, f2, g2, h2 in itertools.product(vs, repeat=6):
        out.append(("strengthened linearity",
                    Implies(And(big_o(f1, h1, g1), big_o(f2, h2, g2)),
                            big_o(Add(f1, f2), Add(h1, h2), Add(g1, g2)))))
    for _ in range(samples):
        m = rng.randint(1, len(vs))
        fs = rng.sample(vs, m)
        ks = [rng.randint(1, max_k) for _ in fs]
        scaled = _sum([_times(k, f) for k, f in zip(ks, fs)])
        plain = _sum(fs)
        out.append(("scaled sum", And(big_o(scaled, plain), big_o(plain, scaled))))
    return out


def random_matrix(rng, max_n=6, max_m=6, lo=-5, hi=5):
    n, m = rng.randint(1, max_n), rng.randint(1, max_m)
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def duality_check(A, v) -> bool:
    """Exactly one of the two witnesses exists, and it re-verifies."""
    m = len(A[0]) if A else 0
    comb = linalg.positive_combination(A, v, m)
    kern = linalg.kernel_witness(A, v, m)
    if (comb is None) == (kern is None):
        return False
    return (comb or kern).verify()
