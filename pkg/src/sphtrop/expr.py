"""Expression language for matrix entries, ideal generators and families.

Grammar (see docs/grammar.ebnf for the authoritative EBNF):

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , exponent ] ;
    atom    = NUMBER | "t" | matrix entry "x[i][j]" | parameter "sN"
            | free variable | "(" , expr , ")" ;

Exponents are integers, except on the bare series variable t where a
parenthesised rational such as t^(1/3) is allowed.  There is no
implicit multiplication and whitespace is insignificant.  Identifiers
outside the documented set are rejected at parse time with the byte
offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .series import DEFAULT_PRECISION, PuiseuxSeries

__all__ = [
    "Expression", "Num", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "ParseError", "MissingAssignment",
    "parse", "evaluate", "to_string", "parse_series", "variables",
]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class MissingAssignment(LookupError):
    def __init__(self, name: str):
        super().__init__(f"no value assigned to variable {name!r}")
        self.name = name


# -- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Expression:
    pass


@dataclass(frozen=True)
class Num(Expression):
    value: Fraction


@dataclass(frozen=True)
class Var(Expression):
    name: str  # "t", "x[i][j]", "sN", or a declared free variable


@dataclass(frozen=True)
class Neg(Expression):
    arg: Expression


@dataclass(frozen=True)
class Add(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Sub(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Mul(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Div(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Pow(Expression):
    base: Expression
    exponent: Fraction


# -- tokenizer --------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|([()\[\]+\-*/^]))")

_PARAM_RE = re.compile(r"s[0-9]+\Z")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        else:
            tokens.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, free_vars):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.free_vars = frozenset(free_vars)

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str):
        kind, value, pos = self.next()
        if kind != "sym" or value != sym:
            raise ParseError(f"expected {sym!r}", pos)

    def parse(self) -> Expression:
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value in "+-":
                self.next()
                rhs = self.term()
                e = Add(e, rhs) if value == "+" else Sub(e, rhs)
            else:
                return e

    def term(self) -> Expression:
        e = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value in "*/":
                self.next()
                rhs = self.unary()
                e = Mul(e, rhs) if value == "*" else Div(e, rhs)
            else:
                return e

    def unary(self) -> Expression:
        kind, value, _ = self.peek()
        if kind == "sym" and value == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "sym" and value == "^":
            self.next()
            exponent, epos = self.exponent()
            if exponent.denominator != 1 and not (isinstance(base, Var) and base.name == "t"):
                raise ParseError("fractional exponents are only allowed on t", epos)
            return Pow(base, exponent)
        return base

    def exponent(self) -> tuple[Fraction, int]:
        # A bare exponent is a signed integer; the rational form p/q must
        # be parenthesised so that x^2/3 stays (x^2)/3.
        kind, value, pos = self.peek()
        if kind == "sym" and value == "(":
            self.next()
            frac = self.signed_rational(allow_slash=True)
            self.expect_sym(")")
            return frac, pos
        return self.signed_rational(allow_slash=False), pos

    def signed_rational(self, allow_slash: bool) -> Fraction:
        sign = 1
        kind, value, pos = self.peek()
        if kind == "sym" and value == "-":
            self.next()
            sign = -1
            kind, value, pos = self.peek()
        if kind != "num":
            raise ParseError("expected an exponent", pos)
        self.next()
        num = int(value)
        if allow_slash:
            kind2, value2, _ = self.peek()
            if kind2 == "sym" and value2 == "/":
                self.next()
                kind3, value3, pos3 = self.next()
                if kind3 != "num":
                    raise ParseError("expected a denominator", pos3)
                return Fraction(sign * num, int(value3))
        return Fraction(sign * num)

    def atom(self) -> Expression:
        kind, value, pos = self.next()
        if kind == "num":
            return Num(Fraction(int(value)))
        if kind == "sym" and value == "(":
            e = self.expr()
            self.expect_sym(")")
            return e
        if kind == "ident":
            if value == "t":
                return Var("t")
            if value == "x" and self._at_sym("["):
                i = self._bracket_index()
                j = self._bracket_index()
                return Var(f"x[{i}][{j}]")
            if _PARAM_RE.match(value):
                return Var(value)
            if value in self.free_vars:
                return Var(value)
            raise ParseError(f"unknown identifier {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)

    def _at_sym(self, sym: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "sym" and value == sym

    def _bracket_index(self) -> int:
        self.expect_sym("[")
        kind, value, pos = self.next()
        if kind != "num":
            raise ParseError("expected a matrix index", pos)
        idx = int(value)
        if idx < 1:
            raise ParseError("matrix indices are 1-based", pos)
        self.expect_sym("]")
        return idx


def parse(text: str, free_vars=()) -> Expression:
    """Parse an expression; unknown identifiers are rejected.

    ``free_vars`` lists additional bare identifiers that are legal, e.g.
    ("x", "y") for plane-curve equations or ("x1", ..., "xn") for vector
    coordinates.
    """
    return _Parser(text, free_vars).parse()


# -- evaluation --------------------------------------------------------------


def evaluate(e: Expression, assignment, precision=DEFAULT_PRECISION) -> PuiseuxSeries:
    """Evaluate in the series field under a variable assignment.

    The series variable t is supplied automatically unless the
    assignment overrides it.  Division by a zero-to-precision series
    raises IndeterminateValuation from the series layer.
    """
    if isinstance(e, Num):
        return PuiseuxSeries.constant(e.value, precision)
    if isinstance(e, Var):
        if e.name in assignment:
            return assignment[e.name]
        if e.name == "t":
            return PuiseuxSeries.t(precision)
        raise MissingAssignment(e.name)
    if isinstance(e, Neg):
        return -evaluate(e.arg, assignment, precision)
    if isinstance(e, Add):
        return evaluate(e.left, assignment, precision) + evaluate(e.right, assignment, precision)
    if isinstance(e, Sub):
        return evaluate(e.left, assignment, precision) - evaluate(e.right, assignment, precision)
    if isinstance(e, Mul):
        return evaluate(e.left, assignment, precision) * evaluate(e.right, assignment, precision)
    if isinstance(e, Div):
        num = evaluate(e.left, assignment, precision)
        return num * evaluate(e.right, assignment, precision).invert()
    if isinstance(e, Pow):
        if isinstance(e.base, Var) and e.base.name == "t" and "t" not in assignment:
            # A literal power of the series variable is exact.
            return PuiseuxSeries.monomial(1, e.exponent, precision)
        base = evaluate(e.base, assignment, precision)
        if e.exponent.denominator == 1:
            return base ** int(e.exponent)
        if e.exponent >= 0:
            return base.scale_exponents(e.exponent)
        return base.scale_exponents(-e.exponent).invert()
    raise TypeError(f"not an expression node: {e!r}")


def variables(e: Expression) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Neg):
        return variables(e.arg)
    if isinstance(e, Pow):
        return variables(e.base)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return variables(e.left) | variables(e.right)
    raise TypeError(f"not an expression node: {e!r}")


# -- printing ----------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def to_string(e: Expression) -> str:
    """Canonical printer; reparsing the output yields an equal tree."""
    return _print(e, 0)


def _print(e: Expression, parent: int) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        body = "-" + _print(e.arg, _PREC_NEG)
        return f"({body})" if parent > _PREC_NEG else body
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        body = _print(e.left, _PREC_ADD) + op + _print(e.right, _PREC_ADD + 1)
        return f"({body})" if parent > _PREC_ADD else body
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        body = _print(e.left, _PREC_MUL) + op + _print(e.right, _PREC_MUL + 1)
        return f"({body})" if parent > _PREC_MUL else body
    if isinstance(e, Pow):
        exp = e.exponent
        if exp.denominator == 1 and exp >= 0:
            suffix = f"^{exp}"
        elif exp.denominator == 1:
            suffix = f"^({exp})"
        else:
            suffix = f"^({exp})"
        return _print(e.base, _PREC_POW + 1) + suffix
    raise TypeError(f"not an expression node: {e!r}")


def parse_series(text: str, precision=DEFAULT_PRECISION) -> PuiseuxSeries:
    """Parse a closed series literal such as ``3*t^-2 + 1/2*t + t^(1/3)``."""
    return evaluate(parse(text), {}, precision)
