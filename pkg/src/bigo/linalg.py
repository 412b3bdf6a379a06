"""Exact rational linear algebra and Fourier-Motzkin feasibility.

Everything here works on ``Fraction`` entries; matrices are plain lists of
rows.  Column indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, IndexOutOfRange

EQ = "eq"
GEQ = "geq"


@dataclass(frozen=True)
class LinConstraint:
    """``coeffs . x  (= | >=)  rhs``."""

    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (EQ, GEQ):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def holds(self, point) -> bool:
        lhs = sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))
        return lhs == self.rhs if self.relation == EQ else lhs >= self.rhs


def geq(coeffs, rhs=0):
    return LinConstraint(tuple(coeffs), GEQ, rhs)


def eq(coeffs, rhs=0):
    return LinConstraint(tuple(coeffs), EQ, rhs)


def as_matrix(rows) -> list:
    rows = [[Fraction(x) for x in row] for row in rows]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged matrix")
    return rows


def mat_vec(A, x) -> list:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]


def vec_mat(b, A, ncols) -> list:
    out = [Fraction(0)] * ncols
    for bi, row in zip(b, A):
        if bi:
            for j, a in enumerate(row):
                out[j] += bi * a
    return out


# -- Gaussian elimination ----------------------------------------------------

def rref(A, ncols=None):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    R = [list(r) for r in as_matrix(A)]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def solve(A, y, ncols):
    """A particular solution of ``A x = y`` (free variables set to 0), or None."""
    A = as_matrix(A)
    aug = [row + [Fraction(v)] for row, v in zip(A, y)]
    R, pivots = rref(aug, ncols)
    for row in R[len(pivots):]:
        if row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][ncols]
    return x


def nullspace(A, ncols) -> list:
    """Basis of ``{x : A x = 0}``, one vector per free column, in column order."""
    R, pivots = rref(A, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fc]
        basis.append(v)
    return basis


def span_membership(rows, target):
    """Coefficients ``b`` with ``sum b_i rows_i == target``, or None.

    ``rows`` and ``target`` are :class:`~bigo.terms.LinearExpr` values (any
    mapping-like object with ``support`` and item access works).
    """
    atoms = set(target.support())
    for r in rows:
        atoms |= r.support()
    from .terms import sort_atoms

    cols = sort_atoms(atoms)
    if not rows:
        return () if not target else None
    # columns of the system are the rows; one equation per atom
    A = [[r[a] for r in rows] for a in cols]
    y = [target[a] for a in cols]
    b = solve(A, y, len(rows))
    return None if b is None else tuple(b)


# -- Fourier-Motzkin ---------------------------------------------------------

class _Ineq:
    __slots__ = ("coeffs", "rhs", "history")

    def __init__(self, coeffs, rhs, history):
        self.coeffs = coeffs
        self.rhs = rhs
        self.history = history


def _normalize(coeffs, rhs):
    lead = next((abs(c) for c in coeffs if c != 0), None)
    if lead is None or lead == 1:
        return coeffs, rhs
    return [c / lead for c in coeffs], rhs / lead


def _dedupe(ineqs):
    best = {}
    for q in ineqs:
        key = tuple(q.coeffs)
        cur = best.get(key)
        if (cur is None or q.rhs > cur.rhs
                or (q.rhs == cur.rhs and len(q.history) < len(cur.history))):
            best[key] = q
    return list(best.values())


_INFEASIBLE = object()
_STUCK = object()


def _fm(dim, eqs, ineqs, prune):
    subs = []
    eqs = [(list(c), r) for c, r in eqs]
    ineqs = [(list(c), r) for c, r in ineqs]
    while eqs:
        coeffs, rhs = eqs.pop(0)
        p = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if p is None:
            if rhs != 0:
                return _INFEASIBLE
            continue
        a = coeffs[p]
        expr = [-c / a for c in coeffs]
        expr[p] = Fraction(0)
        const = rhs / a
        subs.append((p, expr, const))

        def substitute(c, r):
            k = c[p]
            if k == 0:
                return c, r
            c = [x + k * e for x, e in zip(c, expr)]
            c[p] = Fraction(0)
            return c, r - k * const

        eqs = [substitute(c, r) for c, r in eqs]
        ineqs = [substitute(c, r) for c, r in ineqs]

    pivots = {p for p, _, _ in subs}
    current = []
    for i, (c, r) in enumerate(ineqs):
        if not any(c):
            if r > 0:
                return _INFEASIBLE
            continue
        c, r = _normalize(c, r)
        current.append(_Ineq(c, r, frozenset([i])))
    current = _dedupe(current)

    stages = []
    order = [j for j in range(dim) if j not in pivots]
    for step, j in enumerate(order):
        stages.append((j, current))
        pos = [q for q in current if q.coeffs[j] > 0]
        neg = [q for q in current if q.coeffs[j] < 0]
        nxt = [q for q in current if q.coeffs[j] == 0]
        for P in pos:
            for N in neg:
                hist = P.history | N.history
                # Imbert: after eliminating step+1 variables a combination of
                # more than step+2 originals is redundant
                if prune and len(hist) > step + 2:
                    continue
                a, b = P.coeffs[j], -N.coeffs[j]
                c = [b * x + a * y for x, y in zip(P.coeffs, N.coeffs)]
                c[j] = Fraction(0)
                r = b * P.rhs + a * N.rhs
                if not any(c):
                    if r > 0:
                        return _INFEASIBLE
                    continue
                c, r = _normalize(c, r)
                nxt.append(_Ineq(c, r, hist))
        current = _dedupe(nxt)

    x = [Fraction(0)] * dim
    for j, cons in reversed(stages):
        lo = hi = None
        for q in cons:
            a = q.coeffs[j]
            if a == 0:
                continue
            rest = sum((c * v for k, (c, v) in enumerate(zip(q.coeffs, x)) if k != j),
                       Fraction(0))
            bound = (q.rhs - rest) / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if lo > hi:
                return _STUCK
            x[j] = (lo + hi) / 2
        elif lo is not None:
            x[j] = lo
        elif hi is not None:
            x[j] = hi
        else:
            x[j] = Fraction(0)
    for p, expr, const in reversed(subs):
        x[p] = const + sum((e * v for e, v in zip(expr, x)), Fraction(0))
    return x


def fm_feasible(constraints: Sequence[LinConstraint], dim: int | None = None):
    """A rational point satisfying every constraint, or None if infeasible.

    Equalities are eliminated by exact substitution; the remaining
    inequalities by Fourier-Motzkin in ascending variable order, pruning
    combinations with Imbert's first acceleration rule.  The witness is
    rebuilt by back-substitution (interval midpoint, closed endpoint of a
    half-line, 0 when unconstrained) and re-checked exactly.
    """
    constraints = list(constraints)
    if dim is None:
        if not constraints:
            raise DimensionMismatch("dimension required for an empty system")
        dim = len(constraints[0].coeffs)
    for c in constraints:
        if len(c.coeffs) != dim:
            raise DimensionMismatch(f"constraint of length {len(c.coeffs)} in dimension {dim}")
    eqs = [(c.coeffs, c.rhs) for c in constraints if c.relation == EQ]
    ineqs = [(c.coeffs, c.rhs) for c in constraints if c.relation == GEQ]
    for prune in (True, False):
        x = _fm(dim, eqs, ineqs, prune)
        if x is _INFEASIBLE:
            # pruning only drops constraints, so a contradiction is final
            return None
        if x is not _STUCK and all(c.holds(x) for c in constraints):
            return tuple(x)
    raise AssertionError("Fourier-Motzkin produced a point violating its input")


# -- duality witnesses -------------------------------------------------------

def _check_index(A, v, ncols=None):
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not 0 <= v < m:
        raise IndexOutOfRange(f"column {v} outside 0..{m - 1}")
    return m


@dataclass(frozen=True)
class CombinationWitness:
    """``b`` with ``bA >= 0`` componentwise and ``(bA)_v >= 1``."""

    b: tuple
    A: tuple
    v: int

    def __post_init__(self):
        if not self.verify():
            raise ValueError("not a combination witness")

    def verify(self) -> bool:
        m = len(self.A[0]) if self.A else 0
        prod = vec_mat(self.b, self.A, m)
        return all(x >= 0 for x in prod) and prod[self.v] >= 1

    @property
    def combination(self):
        return tuple(vec_mat(self.b, self.A, len(self.A[0]) if self.A else 0))


@dataclass(frozen=True)
class KernelWitness:
    """``f >= 0`` with ``A f = 0`` and ``f_v > 0``."""

    f: tuple
    A: tuple
    v: int

    def __post_init__(self):
        if not self.verify():
            raise ValueError("not a kernel witness")

    def verify(self) -> bool:
        return all(x >= 0 for x in self.f) and self.f[self.v] > 0 and \
            all(x == 0 for x in mat_vec(self.A, self.f))


def positive_combination(A, v: int, ncols: int | None = None):
    """Search ``b`` making ``bA`` nonnegative with a positive ``v``-th entry."""
    A = as_matrix(A)
    m = _check_index(A, v, ncols)
    n = len(A)
    if n == 0:
        return None
    cons = [geq([A[i][j] for i in range(n)], 1 if j == v else 0) for j in range(m)]
    b = fm_feasible(cons, n)
    if b is None:
        return None
    return CombinationWitness(b, tuple(tuple(r) for r in A), v)


def kernel_witness(A, v: int, ncols: int | None = None):
    """Search ``f >= 0`` with ``A f = 0`` and ``f_v >= 1``; scaled so ``f_v = 1``."""
    A = as_matrix(A)
    m = _check_index(A, v, ncols)
    cons = [geq([1 if k == j else 0 for k in range(m)], 0) for j in range(m)]
    cons.append(geq([1 if k == v else 0 for k in range(m)], 1))
    cons += [eq(row, 0) for row in A]
    f = fm_feasible(cons, m)
    if f is None:
        return None
    f = tuple(x / f[v] for x in f)
    return KernelWitness(f, tuple(tuple(r) for r in A), v)


def positive_kernel(A, indices, ncols: int | None = None):
    """Sum of kernel witnesses for every index; None if one is missing."""
    A = as_matrix(A)
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    total = [Fraction(0)] * m
    for v in sorted(indices):
        w = kernel_witness(A, v, m)
        if w is None:
            return None
        total = [t + x for t, x in zip(total, w.f)]
    return tuple(total)


def integer_scale(v) -> tuple:
    """Multiply by the lcm of the denominators."""
    v = [Fraction(x) for x in v]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return tuple(int(x * lcm) for x in v)


def primitive(v) -> tuple:
    """Integer multiple of ``v`` whose entries have gcd 1 (sign kept)."""
    ints = integer_scale(v)
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return ints
    return tuple(x // g for x in ints)
