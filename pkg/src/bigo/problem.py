"""Problem files: a theory, optional growth indices, assumptions and goals.

    theory signed
    assume f + g = h + O(k)
    prove f = O(|h| + k) | g = O(k)

Lines starting with ``#`` are comments.  Several ``prove`` lines are
conjoined.  ``1`` is the constant one function and ``g[q]`` the growth
symbol with rational index ``q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (GrowthIndexOutOfOrder, ProblemError, ProblemSyntaxError,
                     UnknownTheory)
from .terms import (ONE, ZERO, Abs, Add, And, BigOAtom, Growth, Implies, Max, Min,
                    Neg, Not, One, Or, Scale, Sub, Var, conj, fmt_rational,
                    format_atom, format_formula, formula_symbols, term_children)

THEORIES = ("core", "signed", "with-one", "growth")
READINGS = ("pointwise", "eventually")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<op>->|[-+*/=|&!(),\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str            # num, ident, bigo, growth, min, max, op, eof
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, offset: int = 0) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind, value = m.lastgroup, m.group()
        col = offset + pos + 1
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "ident" and pos < len(text):
            nxt = text[pos]
            special = {("O", "("): "bigo", ("g", "["): "growth",
                       ("min", "("): "min", ("max", "("): "max"}.get((value, nxt))
            if special:
                out.append(Token(special, value + nxt, line, col))
                pos += 1
                continue
        out.append(Token(kind, value, line, col))
    out.append(Token("eof", "", line, offset + len(text) + 1))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_op(self, text) -> bool:
        return self.at("op", text)

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of line"
        raise ProblemSyntaxError(f"{msg}, found {found!r}", tok.line, tok.column)

    def expect_op(self, text):
        if not self.at_op(text):
            self.fail(f"expected {text!r}")
        self.i += 1

    # rationals and terms ---------------------------------------------

    def rational(self) -> Fraction:
        if not self.at("num"):
            self.fail("expected a number")
        num = int(self.tok.text)
        self.i += 1
        if self.at_op("/") and self.peek().kind == "num":
            self.i += 1
            den = int(self.tok.text)
            if den == 0:
                self.fail("zero denominator")
            self.i += 1
            return Fraction(num, den)
        return Fraction(num)

    def term(self):
        t = self.unary()
        while self.at_op("+") or self.at_op("-"):
            if self.at_op("+") and self.peek().kind == "bigo":
                break
            op = self.tok.text
            self.i += 1
            right = self.unary()
            t = Add(t, right) if op == "+" else Sub(t, right)
        return t

    def unary(self):
        if self.at_op("-"):
            self.i += 1
            if self.at("num"):
                c = self.rational()
                if self.at_op("*"):
                    self.i += 1
                    return Scale(-c, self.unary())
                return Neg(self._constant(c))
            return Neg(self.unary())
        if self.at("num"):
            c = self.rational()
            if self.at_op("*"):
                self.i += 1
                return Scale(c, self.unary())
            return self._constant(c)
        return self.primary()

    @staticmethod
    def _constant(c):
        if c == 0:
            return ZERO
        if c == 1:
            return ONE
        return Scale(c, ONE)

    def primary(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return Var(t.text)
        if t.kind == "growth":
            self.i += 1
            neg = self.at_op("-")
            if neg:
                self.i += 1
            idx = -self.rational() if neg else self.rational()
            self.expect_op("]")
            return Growth(idx)
        if t.kind in ("min", "max"):
            self.i += 1
            a = self.term()
            self.expect_op(",")
            b = self.term()
            self.expect_op(")")
            return (Min if t.kind == "min" else Max)(a, b)
        if self.at_op("|"):
            self.i += 1
            a = self.term()
            self.expect_op("|")
            return Abs(a)
        if self.at_op("("):
            self.i += 1
            a = self.term()
            self.expect_op(")")
            return a
        self.fail("expected a term")

    # atoms and formulas ----------------------------------------------

    def atom(self) -> BigOAtom:
        lhs = self.term()
        self.expect_op("=")
        if self.at("bigo"):
            return BigOAtom(lhs, ZERO, self._big_o())
        rhs = self.term()
        if self.at_op("+") and self.peek().kind == "bigo":
            self.i += 1
            return BigOAtom(lhs, rhs, self._big_o())
        return BigOAtom(lhs, rhs, ZERO)

    def _big_o(self):
        self.i += 1
        bound = self.term()
        self.expect_op(")")
        return bound

    def formula(self):
        left = self.disjunction()
        if self.at_op("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.at_op("|"):
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.negation()
        while self.at_op("&"):
            self.i += 1
            f = And(f, self.negation())
        return f

    def negation(self):
        if self.at_op("!"):
            self.i += 1
            return Not(self.negation())
        if self.at_op("("):
            # either a parenthesized formula or an atom whose lhs starts with "("
            save = self.i
            try:
                self.i += 1
                f = self.formula()
                self.expect_op(")")
                if not self.at_op("="):
                    return f
            except ProblemSyntaxError:
                pass
            self.i = save
        return self.atom()

    def end(self):
        if not self.at("eof"):
            self.fail("unexpected trailing input")


def parse_term(text: str):
    p = _Parser(tokenize(text))
    t = p.term()
    p.end()
    return t


def parse_atom(text: str) -> BigOAtom:
    p = _Parser(tokenize(text))
    a = p.atom()
    p.end()
    return a


def parse_formula(text: str):
    p = _Parser(tokenize(text))
    f = p.formula()
    p.end()
    return f


@dataclass(frozen=True)
class Problem:
    theory: str = "signed"
    reading: str = "pointwise"
    assumptions: tuple = ()
    goal: object = None
    growth_indices: tuple = field(default=())

    @property
    def formula(self):
        if not self.assumptions:
            return self.goal
        return Implies(conj(self.assumptions), self.goal)


def default_reading(theory: str) -> str:
    return "eventually" if theory == "growth" else "pointwise"


def _symbols_check(problem: Problem, line=None):
    syms = formula_symbols(problem.formula)
    if problem.theory != "with-one" and any(isinstance(a, One) for a in syms):
        raise ProblemError("the constant 1 needs theory with-one", line)
    growth = {a.index for a in syms if isinstance(a, Growth)}
    if problem.theory != "growth" and growth:
        raise ProblemError("growth symbols need theory growth", line)
    if problem.theory == "core":
        for a in [problem.goal, *problem.assumptions]:
            for b in _atoms_of(a):
                if any(_has_nonlinear(t) for t in (b.lhs, b.rhs, b.bound)):
                    raise ProblemError("abs, min and max need theory signed", line)
    missing = growth - set(problem.growth_indices)
    if missing:
        raise ProblemError("undeclared growth index " +
                           ", ".join(fmt_rational(q) for q in sorted(missing)), line)


def _atoms_of(f):
    if isinstance(f, BigOAtom):
        return [f]
    if isinstance(f, Not):
        return _atoms_of(f.arg)
    return _atoms_of(f.left) + _atoms_of(f.right)


def _has_nonlinear(t) -> bool:
    return isinstance(t, (Abs, Min, Max)) or any(_has_nonlinear(c) for c in term_children(t))


def parse_problem(text: str, reading: str = None) -> Problem:
    theory = None
    theory_line = None
    indices = None
    assumptions = []
    goals = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        keyword = stripped.split(None, 1)[0]
        offset = len(line) - len(line.lstrip()) + len(keyword)
        rest = line[offset:]
        if keyword == "theory":
            name = rest.strip()
            if name not in THEORIES:
                raise UnknownTheory(f"unknown theory {name!r}", n, offset + 2)
            if theory is not None:
                raise ProblemError("theory given twice", n, 1)
            theory, theory_line = name, n
        elif keyword == "growth":
            p = _Parser(tokenize(rest, n, offset))
            vals = []
            while not p.at("eof"):
                tok = p.tok
                neg = p.at_op("-")
                if neg:
                    p.i += 1
                q = p.rational()
                q = -q if neg else q
                if vals and q <= vals[-1]:
                    raise GrowthIndexOutOfOrder("growth indices must be strictly increasing",
                                                n, tok.column)
                vals.append(q)
            if not vals:
                raise ProblemSyntaxError("growth needs at least one index", n, offset + 1)
            indices = (indices or ()) + tuple(vals)
            if any(a >= b for a, b in zip(indices, indices[1:])):
                raise GrowthIndexOutOfOrder("growth indices must be strictly increasing", n, 1)
        elif keyword == "assume":
            p = _Parser(tokenize(rest, n, offset))
            assumptions.append(p.atom())
            p.end()
        elif keyword == "prove":
            p = _Parser(tokenize(rest, n, offset))
            goals.append(p.formula())
            p.end()
        else:
            raise ProblemSyntaxError(f"unknown directive {keyword!r}", n,
                                     len(line) - len(line.lstrip()) + 1)
    if not goals:
        raise ProblemError("no prove line")
    theory = theory or "signed"
    if indices is not None and theory != "growth":
        raise ProblemError("growth indices given for a theory other than growth")
    goal = conj(goals)
    if theory == "growth" and indices is None:
        indices = tuple(sorted({a.index for a in formula_symbols(goal)
                                | set().union(*(formula_symbols(a) for a in assumptions))
                                if isinstance(a, Growth)}))
    reading = reading or default_reading(theory)
    if reading not in READINGS:
        raise ProblemError(f"unknown reading {reading!r}")
    if theory == "growth" and reading != "eventually":
        raise ProblemError("theory growth is only available with the eventually reading")
    problem = Problem(theory, reading, tuple(assumptions), goal, tuple(indices or ()))
    _symbols_check(problem, theory_line)
    return problem


def format_problem(problem: Problem) -> str:
    lines = [f"theory {problem.theory}"]
    if problem.theory == "growth" and problem.growth_indices:
        lines.append("growth " + " ".join(fmt_rational(q) for q in problem.growth_indices))
    lines += [f"assume {format_atom(a)}" for a in problem.assumptions]
    lines.append(f"prove {format_formula(problem.goal)}")
    return "\n".join(lines) + "\n"
