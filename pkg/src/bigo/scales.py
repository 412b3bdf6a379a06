"""The constant function 1 and increasing growth scales ``g[a] < g[b] < ...``.

Both are reduced to the nonnegative core.  For scale symbols
``g_1 < .. < g_k`` a Horn clause ``H -> s = O(t)`` holds in every model iff
one of the clauses

    H & g_i = O(g_{i+1}) -> g_1 = O(0)
    H & g_i = O(g_{i+1}) -> g_{j+1} = O(g_j)      (1 <= j < k)
    H & g_i = O(g_{i+1}) -> s = O(t)

is valid.  The constant 1 is the case ``k = 1`` with ``g_1 = 1``.

When all of them fail, the bound sets ``A_0 <= .. <= A_k`` and models
``c^0 .. c^k`` of the individual runs are stacked into polynomials
``f = c^0(f) H_1 + .. + c^(k-1)(f) H_k + c^k(f) x^(k+1)`` where the ``H_i``
are chosen so that each ``g_i`` comes out as ``x^i`` (or ``1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import formula, horn, oracle, signs
from .errors import (ChainInvariantViolation, GrowthIndexOutOfOrder,
                     InternalInvariantViolation, SingularSystem, UnboundAtom)
from .horn import Counterexample, Invalid, Valid
from .terms import (ONE, Abs, BigOAtom, Growth, Implies, Neg, Not, One, Scale, Var,
                    ZERO, formula_symbols, sort_atoms, term_children)


@dataclass(frozen=True)
class GrowthContext:
    indices: tuple

    def __post_init__(self):
        idx = tuple(Fraction(i) for i in self.indices)
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise GrowthIndexOutOfOrder("growth indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def atoms(self) -> tuple:
        return tuple(Growth(i) for i in self.indices)

    @property
    def model_degrees(self) -> dict:
        """Standard model: ``g`` number ``i`` is ``x^i``, ``G_*`` is ``x^(k+1)``."""
        out = {a: i + 1 for i, a in enumerate(self.indices)}
        out["*"] = self.k + 1
        return out

    @classmethod
    def of(cls, phi, indices=()):
        found = {a.index for a in formula_symbols(phi) if isinstance(a, Growth)}
        return cls(tuple(sorted(set(indices) | found)))


@dataclass(frozen=True)
class ChainCertificate:
    """Horn certificate for ``hyps -> concl``, the ``disjunct``-th reduction query."""

    disjunct: int
    hyps: tuple
    concl: BigOAtom
    proof: horn.HornCertificate


@dataclass(frozen=True)
class ImpliedOrientation:
    """Pair ``pair`` already follows from the current hypotheses via ``proof``."""

    pair: int
    atom: BigOAtom
    proof: horn.HornCertificate
    rest: object


@dataclass(frozen=True)
class OrientationSplit:
    """Both orientations of pair ``pair`` lead to a valid reduction."""

    pair: int
    first: object
    second: object


def solve_H_basis(coeffs, degrees=None) -> list:
    """Solve ``sum_j a[i][j] H_j = x^deg_i`` for ``H`` by forward substitution."""
    k = len(coeffs)
    degrees = list(range(1, k + 1)) if degrees is None else list(degrees)
    H = []
    for i in range(k):
        diag = Fraction(coeffs[i][i])
        if diag == 0:
            raise SingularSystem(f"zero diagonal entry in row {i}")
        p = oracle.monomial(degrees[i])
        for j in range(i):
            p = oracle.poly_add(p, oracle.poly_scale(H[j], -Fraction(coeffs[i][j])))
        H.append(oracle.poly_scale(p, 1 / diag))
    return H


def _queries(hyps, concl, scale):
    order = [BigOAtom(a, ZERO, b) for a, b in zip(scale, scale[1:])]
    goals = [BigOAtom(scale[0], ZERO, ZERO)] if scale else []
    goals += [BigOAtom(b, ZERO, a) for a, b in zip(scale, scale[1:])]
    return tuple(hyps) + tuple(order), goals + [concl]


def _run_all(base, goals, extra):
    """Decide every reduction query; return ``(index, Valid)`` or the Invalid list."""
    out = []
    for j, g in enumerate(goals):
        v = horn.decide_atoms(base, g, extra)
        if v:
            return j, v
        out.append(v)
    return None, out


def comparability_pairs(extra, scale) -> list:
    vars_ = [a for a in sort_atoms(extra) if isinstance(a, Var)]
    return [(v, g) for v in vars_ for g in scale]


def _orientations(pair):
    v, g = pair
    return BigOAtom(v, ZERO, g), BigOAtom(g, ZERO, v)


def _search(base, goals, extra, pairs, i):
    """Return ``(proof tree, None)`` if every orientation branch below makes
    the reduction valid, else ``(None, (hyps, runs))`` for a branch that
    leaves all reduction queries invalid."""
    j, runs = _run_all(base, goals, extra)
    if j is not None:
        return ChainCertificate(j, base, goals[j], runs.certificate), None
    if i == len(pairs):
        return None, (base, runs)
    for atom in _orientations(pairs[i]):
        known = horn.decide_atoms(base, atom, extra)
        if known:
            # the other orientation only adds hypotheses to this branch
            tree, bad = _search(base, goals, extra, pairs, i + 1)
            return (ImpliedOrientation(i, atom, known.certificate, tree) if tree else None), bad
    first, second = _orientations(pairs[i])
    left, bad = _search(base + (first,), goals, extra, pairs, i + 1)
    if bad:
        return None, bad
    right, bad = _search(base + (second,), goals, extra, pairs, i + 1)
    if bad:
        return None, bad
    return OrientationSplit(i, left, right), None


def check_tree(tree, base, goals, pairs, i=0) -> bool:
    """Replay a proof tree produced by the orientation search."""
    base = tuple(base)
    if isinstance(tree, ChainCertificate):
        if not 0 <= tree.disjunct < len(goals) or tree.concl != goals[tree.disjunct]:
            return False
        h = horn.HornClause.from_atoms(base, tree.concl)
        return horn.check_certificate(h, tree.proof)
    if i >= len(pairs):
        return False
    if isinstance(tree, ImpliedOrientation):
        if tree.pair != i or tree.atom not in _orientations(pairs[i]):
            return False
        h = horn.HornClause.from_atoms(base, tree.atom)
        return horn.check_certificate(h, tree.proof) and \
            check_tree(tree.rest, base, goals, pairs, i + 1)
    if isinstance(tree, OrientationSplit):
        first, second = _orientations(pairs[i])
        return tree.pair == i and \
            check_tree(tree.first, base + (first,), goals, pairs, i + 1) and \
            check_tree(tree.second, base + (second,), goals, pairs, i + 1)
    return False


def _check_chain(sets, scale, t_support, s_expr, idx, models):
    for lo, hi in zip(sets, sets[1:]):
        if not lo <= hi:
            raise ChainInvariantViolation("bound sets are not nested")
    for i, g in enumerate(scale, start=1):
        if g not in sets[i] or g in sets[i - 1]:
            raise ChainInvariantViolation(f"{g} is not new in bound set {i}")
    if not t_support <= sets[idx]:
        raise ChainInvariantViolation("bound of the goal escapes its bound set")
    if sum(c * models[idx].get(a, 0) for a, c in s_expr.items()) == 0:
        raise ChainInvariantViolation("goal left side vanishes in the spliced model")
    for A, c in zip(sets, models):
        for a in A:
            if c.get(a, 0) != 0:
                raise ChainInvariantViolation(f"{a} is in a bound set but nonzero")


def reduction(hyps, concl, scale):
    """Hypotheses, queries, symbols and orientation pairs of the reduction."""
    scale = list(scale)
    base, goals = _queries(hyps, concl, scale)
    extra = set(scale)
    for a in tuple(base) + tuple(goals):
        extra |= formula_symbols(a)
    pairs = comparability_pairs(extra, scale) if len(scale) >= 2 else []
    return tuple(base), goals, extra, pairs


def check_chain_certificate(hyps, concl, scale, tree) -> bool:
    base, goals, _, pairs = reduction(hyps, concl, scale)
    return check_tree(tree, base, goals, pairs)


def chain_decide(hyps, concl, scale, degrees=None, star=None):
    """Decide ``hyps -> concl`` with ``scale`` read as strictly increasing functions.

    ``degrees`` gives the monomial degree of each scale symbol in the
    counterexample and ``star`` the degree of the top level.
    """
    scale = list(scale)
    k = len(scale)
    degrees = list(range(1, k + 1)) if degrees is None else list(degrees)
    star = (degrees[-1] + 1 if k else 1) if star is None else star
    base, goals, extra, pairs = reduction(hyps, concl, scale)
    tree, bad = _search(tuple(base), goals, extra, pairs, 0)
    if tree is not None:
        return Valid(tree, {"hyps": tuple(base), "goals": tuple(goals), "pairs": tuple(pairs)})
    base, runs = bad
    if k == 0:
        return runs[0]

    syms = frozenset(extra)
    sets = [frozenset(v.info["bound_set"]) for v in runs[:k]] + [syms]
    models = [{a: v.counterexample.scalar(a) for a in v.counterexample.values} for v in runs[:k]]
    models.append({})
    B = frozenset(runs[k].info["bound_set"])
    d = {a: runs[k].counterexample.scalar(a) for a in runs[k].counterexample.values}
    idx = sum(1 for g in scale if g in B)
    if any(g not in B for g in scale[:idx]):
        raise ChainInvariantViolation("goal bound set is not closed downwards")
    sets[idx], models[idx] = B, d
    h = horn.HornClause.from_atoms(base, concl, extra)
    _check_chain(sets, scale, h.t_support, h.s, idx, models)

    a = [[models[m].get(scale[i], 0) for m in range(k)] for i in range(k)]
    H = solve_H_basis(a, degrees)
    top = oracle.monomial(star)
    values = {}
    for f in sort_atoms(syms):
        p = ()
        for m in range(k):
            p = oracle.poly_add(p, oracle.poly_scale(H[m], models[m].get(f, 0)))
        p = oracle.poly_add(p, oracle.poly_scale(top, models[k].get(f, 0)))
        values[f] = p
    for g, deg in zip(scale, degrees):
        if values[g] != oracle.monomial(deg):
            raise ChainInvariantViolation(f"{g} does not come out as x^{deg}")
    asg = oracle.PolyAssignment(values)
    if not all(oracle.holds_eventually_poly(q, asg) for q in base) or \
            oracle.holds_eventually_poly(concl, asg):
        raise InternalInvariantViolation("stacked model does not refute the clause")
    width = max(len(p) for p in values.values())
    padded = {f: ((tuple(p) + (Fraction(0),) * (width - len(p))),)
              for f, p in values.items()}
    info = {"bound_sets": tuple(sets), "splice": idx, "hyps": tuple(base)}
    return Invalid(Counterexample(1, width - 1, padded), info)


# constant one -------------------------------------------------------------

def with_one_horn(hyps, concl):
    """Horn clause with ``1`` read as the constant function."""
    return chain_decide(hyps, concl, [ONE], degrees=[0], star=1)


def decide_with_one(phi, signed=False):
    if signed:
        return signs.decide_signed(phi, with_one_horn)
    return formula.decide_clauses(formula.to_clauses(phi), with_one_horn)


def one_as_variable(phi, name="g1"):
    """``g1 != O(0) -> phi[1 := g1]``, the plain-variable reading of ``1``."""
    g = Var(name)

    def swap(t):
        if isinstance(t, One):
            return g
        kids = [swap(c) for c in term_children(t)]
        if not kids:
            return t
        if isinstance(t, Scale):
            return Scale(t.coef, kids[0])
        if isinstance(t, (Neg, Abs)):
            return type(t)(kids[0])
        return type(t)(*kids)

    return Implies(Not(BigOAtom(g, ZERO, ZERO)), signs.map_terms(phi, swap))


# growth scales ------------------------------------------------------------

def _check_scale(atoms, ctx: GrowthContext):
    known = set(ctx.atoms)
    for a in atoms:
        if isinstance(a, Growth) and a not in known:
            raise UnboundAtom(f"{a} is not among the declared growth indices")


def decide_growth_horn(hyps, concl, ctx: GrowthContext):
    atoms = set()
    for a in tuple(hyps) + (concl,):
        atoms |= formula_symbols(a)
    _check_scale(atoms, ctx)
    return chain_decide(hyps, concl, list(ctx.atoms))


def decide_growth_qf(phi, ctx: GrowthContext = None):
    """Validity under the eventually reading with the declared scale."""
    ctx = ctx or GrowthContext.of(phi)
    _check_scale(formula_symbols(phi), ctx)
    return signs.decide_signed(phi, lambda h, c: decide_growth_horn(h, c, ctx))
