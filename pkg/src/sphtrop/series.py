"""Truncated Puiseux/Laurent series over the rationals.

A series is a finite set of exact rational coefficients on the exponent
grid (1/m)*Z, together with a rational precision cutoff P: coefficients
at exponents below P are known exactly, everything at or beyond P is
unknown.  A series with no stored terms is "zero to precision": it
cannot be distinguished from an exact zero, so its valuation is
indeterminate.

Exponents, coefficients and precisions are exact rationals; values with
denominator 1 are stored as plain ints (ints and Fractions interoperate
exactly and hash identically, and integer arithmetic is much faster on
the common Laurent-series case).  Floats are refused everywhere.

All values are immutable after construction and every operation is a
pure function, so series can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

__all__ = [
    "DEFAULT_PRECISION",
    "IndeterminateValuation",
    "PuiseuxSeries",
]

#: Default exponent cutoff.  Worked examples in this domain stay below
#: exponent ~12, so 32 leaves generous headroom for precision loss.
DEFAULT_PRECISION = Fraction(32)


class IndeterminateValuation(ArithmeticError):
    """Raised when a valuation is requested of a zero-to-precision series.

    Such a series is zero as far as it is known; its true valuation is
    only bounded below by the precision cutoff, which is carried in the
    ``precision`` attribute when available.
    """

    def __init__(self, message: str = "series is zero to working precision",
                 precision=None):
        super().__init__(message)
        self.precision = precision


def _rat(x):
    # Canonical exact rational: int when the denominator is 1.
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class PuiseuxSeries:
    """A truncated formal series sum c_e * t^e with rational exponents."""

    __slots__ = ("terms", "precision", "ramification")

    def __init__(self, terms, precision=DEFAULT_PRECISION, ramification=None):
        precision = _rat(precision)
        clean = {}
        for e, c in terms.items():
            e = _rat(e)
            c = _rat(c)
            if c == 0 or e >= precision:
                continue
            acc = clean.get(e)
            if acc is None:
                clean[e] = c
            elif acc + c == 0:
                del clean[e]
            else:
                clean[e] = acc + c
        m = 1
        for e in clean:
            m = lcm(m, e.denominator)
        if ramification is not None:
            if any(ramification % e.denominator for e in clean):
                raise ValueError("exponents do not fit the declared ramification grid")
            m = lcm(m, int(ramification))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "ramification", m)

    @classmethod
    def _make(cls, terms, precision):
        # Internal fast path: inputs are already exact rationals.
        clean = {e: c for e, c in terms.items() if c and e < precision}
        m = 1
        for e in clean:
            m = lcm(m, e.denominator)
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", clean)
        object.__setattr__(obj, "precision", precision)
        object.__setattr__(obj, "ramification", m)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, precision=DEFAULT_PRECISION) -> "PuiseuxSeries":
        return cls({}, precision)

    @classmethod
    def constant(cls, value, precision=DEFAULT_PRECISION) -> "PuiseuxSeries":
        return cls({0: _rat(value)}, precision)

    @classmethod
    def one(cls, precision=DEFAULT_PRECISION) -> "PuiseuxSeries":
        return cls.constant(1, precision)

    @classmethod
    def monomial(cls, coeff, exponent, precision=DEFAULT_PRECISION) -> "PuiseuxSeries":
        return cls({_rat(exponent): _rat(coeff)}, precision)

    @classmethod
    def t(cls, precision=DEFAULT_PRECISION) -> "PuiseuxSeries":
        return cls.monomial(1, 1, precision)

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero_to_precision(self) -> bool:
        return not self.terms

    def valuation(self):
        """Least exponent carrying a nonzero coefficient."""
        if not self.terms:
            raise IndeterminateValuation(precision=self.precision)
        return min(self.terms)

    def _val_or_precision(self):
        # Lower bound on the valuation that is always defined.
        return min(self.terms) if self.terms else self.precision

    def leading_coefficient(self):
        return self.terms[self.valuation()]

    def coefficient(self, exponent):
        return self.terms.get(_rat(exponent), 0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            # Exact scalars cost no precision.
            out = dict(self.terms)
            out[0] = out.get(0, 0) + _rat(other)
            return PuiseuxSeries._make(out, self.precision)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        precision = min(self.precision, other.precision)
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e, 0) + c
            out[e] = acc
        return PuiseuxSeries._make(out, precision)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._make({e: -c for e, c in self.terms.items()},
                                   self.precision)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        # Unknown tails contribute from exponent P_a + val(b) (resp.
        # P_b + val(a)) onward; for an empty factor its own precision is
        # the only lower bound on the valuation.
        precision = min(self.precision + other._val_or_precision(),
                        other.precision + self._val_or_precision())
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                if e < precision:
                    out[e] = get(e, 0) + c1 * c2
        return PuiseuxSeries._make(out, precision)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "PuiseuxSeries":
        c = _rat(c)
        if c == 0:
            return PuiseuxSeries._make({}, self.precision)
        return PuiseuxSeries._make({e: c * v for e, v in self.terms.items()},
                                   self.precision)

    def shift(self, exponent) -> "PuiseuxSeries":
        """Exact multiplication by the monomial t^exponent."""
        e0 = _rat(exponent)
        return PuiseuxSeries._make({e + e0: c for e, c in self.terms.items()},
                                   self.precision + e0)

    def invert(self) -> "PuiseuxSeries":
        """Multiplicative inverse, correct up to the derived precision.

        Factors out the leading monomial and inverts the remaining unit
        of the power-series ring by the standard convolution recurrence.
        """
        v = self.valuation()
        c = self.terms[v]
        unit = self.shift(-v).scalar_mul(Fraction(1, 1) / c)  # 1 + higher order
        rel_precision = self.precision - v
        m = unit.ramification
        steps = int(rel_precision * m)
        if rel_precision * m > steps:
            steps += 1
        steps = max(steps, 1)
        a = [0] * steps
        for e, coeff in unit.terms.items():
            a[int(e * m)] = coeff
        b = [0] * steps
        b[0] = 1
        for k in range(1, steps):
            s = 0
            for j in range(1, k + 1):
                if a[j] and b[k - j]:
                    s += a[j] * b[k - j]
            if s:
                b[k] = -s
        inv_unit = PuiseuxSeries(
            {Fraction(k, m): b[k] for k in range(steps) if b[k]},
            rel_precision)
        return inv_unit.scalar_mul(Fraction(1, 1) / c).shift(-v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(Fraction(1, 1) / other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self * other.invert()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("series exponents must be integers")
        if n < 0:
            return self.invert() ** (-n)
        result = PuiseuxSeries._make({0: 1}, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale_exponents(self, c) -> "PuiseuxSeries":
        """Substitute t -> t^c for a nonnegative rational c.

        For c > 0 every exponent and the precision are scaled by c.  For
        c = 0 all terms collapse onto exponent 0 and their coefficients
        are summed; the precision is kept (scaling it to 0 would forbid
        storing the collapsed constant at all).
        """
        c = _rat(c)
        if c < 0:
            raise ValueError("exponent scaling requires c >= 0")
        if c == 0:
            total = sum(self.terms.values())
            return PuiseuxSeries({0: total}, self.precision)
        return PuiseuxSeries({e * c: v for e, v in self.terms.items()},
                             self.precision * c)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other, self.precision)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.terms == other.terms and self.precision == other.precision

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """True when self - other is zero to the common precision."""
        return (self - other).is_zero_to_precision

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"PuiseuxSeries({format_series(self)!r}, precision={self.precision})"


def format_series(s: PuiseuxSeries) -> str:
    """Canonical text form, parseable by the expression grammar."""
    if not s.terms:
        return "0"
    parts = []
    for e in sorted(s.terms):
        c = s.terms[e]
        if e == 0:
            body = str(abs(c))
        else:
            if e == 1:
                tpart = "t"
            elif e.denominator == 1:
                tpart = f"t^{e}"
            else:
                tpart = f"t^({e})"
            if abs(c) == 1:
                body = tpart
            else:
                body = f"{abs(c)}*{tpart}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)
