"""Terms and formulas of the big-O language, and their linear normal forms.

A term is built from atoms (function variables, the constant one function
and growth symbols) with ``+``, ``-``, scaling by a rational, ``min``,
``max`` and ``|.|``.  An atomic formula ``lhs = rhs + O(bound)`` is a
:class:`BigOAtom`; formulas combine atoms with the usual connectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NonLinearNode


def fmt_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class _TermOps:
    """Operator sugar so tests and callers can write ``f + 2 * g``."""

    def __add__(self, other):
        return Add(self, other)

    def __sub__(self, other):
        return Sub(self, other)

    def __neg__(self):
        return Neg(self)

    def __rmul__(self, coef):
        return Scale(Fraction(coef), self)

    def __str__(self):
        return format_term(self)


# -- atoms -------------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class Var(_TermOps):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be nonempty")


@dataclass(frozen=True, eq=True)
class One(_TermOps):
    """The constant function returning one."""


@dataclass(frozen=True, eq=True)
class Growth(_TermOps):
    index: Fraction

    def __post_init__(self):
        object.__setattr__(self, "index", Fraction(self.index))


Atom = Union[Var, One, Growth]
ATOM_TYPES = (Var, One, Growth)


def atom_key(atom):
    # One < Growth (by index) < Var (by name)
    if isinstance(atom, One):
        return (0, Fraction(0), "")
    if isinstance(atom, Growth):
        return (1, atom.index, "")
    return (2, Fraction(0), atom.name)


def sort_atoms(atoms: Iterable) -> list:
    return sorted(atoms, key=atom_key)


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class Zero(_TermOps):
    pass


@dataclass(frozen=True, eq=True)
class Add(_TermOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Sub(_TermOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Neg(_TermOps):
    arg: object


@dataclass(frozen=True, eq=True)
class Scale(_TermOps):
    coef: Fraction
    arg: object

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))


@dataclass(frozen=True, eq=True)
class Min(_TermOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Max(_TermOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Abs(_TermOps):
    arg: object


ZERO = Zero()
ONE = One()

Term = Union[Var, One, Growth, Zero, Add, Sub, Neg, Scale, Min, Max, Abs]


# -- formulas ----------------------------------------------------------------

class _FormulaOps:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True, eq=True)
class BigOAtom(_FormulaOps):
    """``lhs = rhs + O(bound)``; a plain equality has bound ``ZERO``."""

    lhs: object
    rhs: object = ZERO
    bound: object = ZERO


@dataclass(frozen=True, eq=True)
class Not(_FormulaOps):
    arg: object


@dataclass(frozen=True, eq=True)
class And(_FormulaOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Or(_FormulaOps):
    left: object
    right: object


@dataclass(frozen=True, eq=True)
class Implies(_FormulaOps):
    left: object
    right: object


Formula = Union[BigOAtom, Not, And, Or, Implies]


def big_o(lhs, bound, rhs=ZERO) -> BigOAtom:
    """Shorthand for ``lhs = rhs + O(bound)``."""
    return BigOAtom(lhs, rhs, bound)


def conj(formulas):
    formulas = list(formulas)
    if not formulas:
        raise ValueError("empty conjunction")
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def disj(formulas):
    formulas = list(formulas)
    if not formulas:
        raise ValueError("empty disjunction")
    out = formulas[0]
    for f in formulas[1:]:
        out = Or(out, f)
    return out


def term_children(t):
    if isinstance(t, (Add, Sub, Min, Max)):
        return (t.left, t.right)
    if isinstance(t, (Neg, Scale, Abs)):
        return (t.arg,)
    return ()


def term_atoms(t) -> set:
    if isinstance(t, ATOM_TYPES):
        return {t}
    out = set()
    for c in term_children(t):
        out |= term_atoms(c)
    return out


def formula_atoms(phi) -> list:
    """BigO atoms of a formula, in left-to-right order, without repeats."""
    seen = {}

    def walk(f):
        if isinstance(f, BigOAtom):
            seen.setdefault(f, None)
        elif isinstance(f, Not):
            walk(f.arg)
        else:
            walk(f.left)
            walk(f.right)

    walk(phi)
    return list(seen)


def formula_symbols(phi) -> set:
    """Every term-level atom (variable, one, growth symbol) in a formula."""
    out = set()
    for a in formula_atoms(phi):
        out |= term_atoms(a.lhs) | term_atoms(a.rhs) | term_atoms(a.bound)
    return out


def is_linear(t) -> bool:
    if isinstance(t, (Min, Max, Abs)):
        return False
    return all(is_linear(c) for c in term_children(t))


# -- linear forms ------------------------------------------------------------

class LinearExpr:
    """Immutable map from atoms to nonzero exact rational coefficients."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping | None = None):
        items = {}
        for atom, c in (coeffs or {}).items():
            c = Fraction(c)
            if c != 0:
                items[atom] = c
        self._coeffs = items
        self._hash = None

    @classmethod
    def of(cls, atom, coef=1):
        return cls({atom: coef})

    def __getitem__(self, atom) -> Fraction:
        return self._coeffs.get(atom, Fraction(0))

    def __contains__(self, atom):
        return atom in self._coeffs

    def __iter__(self):
        return iter(sort_atoms(self._coeffs))

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def items(self):
        return [(a, self._coeffs[a]) for a in sort_atoms(self._coeffs)]

    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    def __add__(self, other):
        out = dict(self._coeffs)
        for a, c in other._coeffs.items():
            out[a] = out.get(a, 0) + c
        return LinearExpr(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LinearExpr({a: -c for a, c in self._coeffs.items()})

    def __mul__(self, k):
        k = Fraction(k)
        return LinearExpr({a: k * c for a, c in self._coeffs.items()})

    __rmul__ = __mul__

    def delete(self, atoms) -> "LinearExpr":
        """``q[A]``: drop the coefficients of every atom in ``atoms``."""
        atoms = set(atoms)
        return LinearExpr({a: c for a, c in self._coeffs.items() if a not in atoms})

    def dot(self, values: Mapping) -> Fraction:
        return sum((c * Fraction(values.get(a, 0)) for a, c in self._coeffs.items()),
                   Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, LinearExpr):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def __repr__(self):
        return f"LinearExpr({self})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for atom, c in self.items():
            name = format_term(atom)
            mag = abs(c)
            body = name if mag == 1 else f"{fmt_rational(mag)}*{name}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def to_term(self):
        out = None
        for atom, c in self.items():
            piece = atom if c == 1 else Scale(c, atom)
            out = piece if out is None else Add(out, piece)
        return ZERO if out is None else out


def sum_term(atoms) -> object:
    """The term ``a1 + a2 + ...`` over the atoms in canonical order."""
    out = None
    for a in sort_atoms(atoms):
        out = a if out is None else Add(out, a)
    return ZERO if out is None else out


def linearize(t) -> LinearExpr:
    if isinstance(t, ATOM_TYPES):
        return LinearExpr.of(t)
    if isinstance(t, Zero):
        return LinearExpr()
    if isinstance(t, Add):
        return linearize(t.left) + linearize(t.right)
    if isinstance(t, Sub):
        return linearize(t.left) - linearize(t.right)
    if isinstance(t, Neg):
        return -linearize(t.arg)
    if isinstance(t, Scale):
        return linearize(t.arg) * t.coef
    if isinstance(t, (Min, Max, Abs)):
        raise NonLinearNode(f"{type(t).__name__} node in {format_term(t)}")
    raise TypeError(f"not a term: {t!r}")


def bound_support(t) -> frozenset:
    return linearize(t).support()


def reduce_atom(a: BigOAtom):
    """Normalize ``lhs = rhs + O(bound)`` to ``(s, T)``.

    ``T`` is the set of atoms of the bound and ``s`` is ``lhs - rhs`` with the
    atoms of ``T`` deleted, so the atom is equivalent to ``s = O(sum of T)``
    over nonnegative functions.
    """
    support = bound_support(a.bound)
    s = linearize(Sub(a.lhs, a.rhs)).delete(support)
    return s, support


def reduced_atom(s: LinearExpr, support) -> BigOAtom:
    """The atom ``s = O(sum of support)`` whose reduction is ``(s, support)``."""
    return BigOAtom(s.to_term(), ZERO, sum_term(support))


# -- printing ----------------------------------------------------------------

_SUM, _UNARY, _PRIMARY = 0, 1, 2


def _term(t, need):
    if isinstance(t, Zero):
        s, level = "0", _PRIMARY
    elif isinstance(t, Var):
        s, level = t.name, _PRIMARY
    elif isinstance(t, One):
        s, level = "1", _PRIMARY
    elif isinstance(t, Growth):
        s, level = f"g[{fmt_rational(t.index)}]", _PRIMARY
    elif isinstance(t, Add):
        s, level = f"{_term(t.left, _SUM)} + {_term(t.right, _UNARY)}", _SUM
    elif isinstance(t, Sub):
        s, level = f"{_term(t.left, _SUM)} - {_term(t.right, _UNARY)}", _SUM
    elif isinstance(t, Neg):
        # "-3 * f" reads back as a negative coefficient, so keep -(3 * f) apart
        inner = _PRIMARY if isinstance(t.arg, Scale) else _UNARY
        s, level = "-" + _term(t.arg, inner), _UNARY
    elif isinstance(t, Scale):
        s, level = f"{fmt_rational(t.coef)} * {_term(t.arg, _UNARY)}", _UNARY
    elif isinstance(t, Min):
        s, level = f"min({_term(t.left, _SUM)}, {_term(t.right, _SUM)})", _PRIMARY
    elif isinstance(t, Max):
        s, level = f"max({_term(t.left, _SUM)}, {_term(t.right, _SUM)})", _PRIMARY
    elif isinstance(t, Abs):
        s, level = f"|{_term(t.arg, _SUM)}|", _PRIMARY
    else:
        raise TypeError(f"not a term: {t!r}")
    return s if level >= need else f"({s})"


def format_term(t) -> str:
    return _term(t, _SUM)


def format_atom(a: BigOAtom) -> str:
    lhs = format_term(a.lhs)
    if isinstance(a.rhs, Zero):
        return f"{lhs} = O({format_term(a.bound)})"
    rhs = format_term(a.rhs)
    if isinstance(a.bound, Zero):
        return f"{lhs} = {rhs}"
    return f"{lhs} = {rhs} + O({format_term(a.bound)})"


_IMP, _OR, _AND, _NOT, _ATOM = range(5)


def _formula(f, need):
    if isinstance(f, BigOAtom):
        s, level = format_atom(f), _ATOM
    elif isinstance(f, Not):
        s, level = "!" + _formula(f.arg, _NOT), _NOT
    elif isinstance(f, And):
        s, level = f"{_formula(f.left, _AND)} & {_formula(f.right, _NOT)}", _AND
    elif isinstance(f, Or):
        s, level = f"{_formula(f.left, _OR)} | {_formula(f.right, _AND)}", _OR
    elif isinstance(f, Implies):
        s, level = f"{_formula(f.left, _OR)} -> {_formula(f.right, _IMP)}", _IMP
    else:
        raise TypeError(f"not a formula: {f!r}")
    return s if level >= need else f"({s})"


def format_formula(f) -> str:
    return _formula(f, _IMP)
