"""Square matrices over truncated Puiseux series.

Invariant factors are computed two independent ways:

* from determinantal valuations d_k (minimum valuation over all k-by-k
  minors), via alpha_i = d_{n-i+1} - d_{n-i}; and
* by diagonalising with unimodular row/column operations over the power
  series ring (Smith normal form, diagonal sorted decreasingly).

Agreement of the two routes is the central cross-check of the library
and is exercised heavily by the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .series import DEFAULT_PRECISION, IndeterminateValuation, PuiseuxSeries

__all__ = [
    "SeriesMatrix",
    "determinantal_valuations",
    "invariant_factors_minors",
    "smith_normal_form",
]


def _promote(entry, precision):
    if isinstance(entry, PuiseuxSeries):
        return entry
    return PuiseuxSeries.constant(entry, precision)


class SeriesMatrix:
    """An n-by-n matrix of PuiseuxSeries entries."""

    __slots__ = ("n", "entries")

    def __init__(self, rows, precision=DEFAULT_PRECISION):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        entries = tuple(tuple(_promote(e, precision) for e in row) for row in rows)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesMatrix is immutable")

    @classmethod
    def identity(cls, n, precision=DEFAULT_PRECISION) -> "SeriesMatrix":
        one = PuiseuxSeries.one(precision)
        zero = PuiseuxSeries.zero(precision)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diag, precision=DEFAULT_PRECISION) -> "SeriesMatrix":
        diag = [_promote(d, precision) for d in diag]
        zero = PuiseuxSeries.zero(precision)
        n = len(diag)
        return cls([[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return SeriesMatrix(rows)

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix([[self.entries[j][i] for j in range(self.n)]
                             for i in range(self.n)])

    def scalar_mul(self, s: PuiseuxSeries) -> "SeriesMatrix":
        return SeriesMatrix([[s * e for e in row] for row in self.entries])

    def determinant(self) -> PuiseuxSeries:
        table = minor_table(self)
        full = tuple(range(self.n))
        return table[(full, full)]

    def __str__(self):
        return "; ".join(", ".join(str(e) for e in row) for row in self.entries)

    def __repr__(self):
        return f"SeriesMatrix({self})"


def minor_table(M: SeriesMatrix) -> dict:
    """Determinants of all square submatrices, keyed by (rows, cols).

    Laplace expansion along the first row of the row subset; memoisation
    over column subsets makes every size-(k-1) subdeterminant shared by
    all of its size-k parents.
    """
    n = M.n
    table: dict[tuple, PuiseuxSeries] = {}
    for i in range(n):
        for j in range(n):
            table[((i,), (j,))] = M.entries[i][j]
    for size in range(2, n + 1):
        for rows in combinations(range(n), size):
            r0 = rows[0]
            rest = rows[1:]
            for cols in combinations(range(n), size):
                acc = None
                for pos, c in enumerate(cols):
                    sub = table[(rest, cols[:pos] + cols[pos + 1:])]
                    term = M.entries[r0][c] * sub
                    if pos % 2:
                        term = -term
                    acc = term if acc is None else acc + term
                table[(rows, cols)] = acc
    return table


def determinantal_valuations(M: SeriesMatrix) -> tuple[Fraction, ...]:
    """d_k = min valuation over all k-by-k minors, for k = 1..n.

    Raises IndeterminateValuation when some size class cannot be
    certified: either every minor of that size is zero to precision, or
    a zero-to-precision minor's cutoff lies below the observed minimum.
    """
    table = minor_table(M)
    n = M.n
    out = []
    for size in range(1, n + 1):
        best = None
        blind = None  # lowest precision bound among indeterminate minors
        for rows in combinations(range(n), size):
            for cols in combinations(range(n), size):
                minor = table[(rows, cols)]
                if minor.terms:
                    v = minor.valuation()
                    if best is None or v < best:
                        best = v
                else:
                    p = minor.precision
                    if blind is None or p < blind:
                        blind = p
        if best is None:
            raise IndeterminateValuation(
                f"every {size}x{size} minor is zero to working precision",
                precision=blind)
        if blind is not None and blind < best:
            raise IndeterminateValuation(
                f"a {size}x{size} minor is indeterminate below the observed minimum",
                precision=blind)
        out.append(best)
    return tuple(out)


def invariant_factors_minors(M: SeriesMatrix) -> tuple[Fraction, ...]:
    """Invariant factors in weakly decreasing order, by the minor method."""
    d = determinantal_valuations(M)
    n = M.n
    alphas = []
    for i in range(1, n + 1):
        upper = d[n - i]  # d_{n-i+1}
        lower = d[n - i - 1] if n - i - 1 >= 0 else Fraction(0)  # d_{n-i}
        alphas.append(upper - lower)
    result = tuple(alphas)
    # Determinantal-divisor theory over a valuation ring guarantees this.
    assert all(result[i] >= result[i + 1] for i in range(n - 1)), result
    return result


def smith_normal_form(M: SeriesMatrix):
    """Diagonalise g*M*h = D over the power-series ring.

    g and h are unimodular (entries of valuation >= 0, determinant of
    valuation 0); D is diagonal with pure monomial entries t^alpha_i,
    alpha_1 >= ... >= alpha_n.  Pivots are chosen with minimal valuation,
    ties broken by smallest (row, col).  Raises IndeterminateValuation
    when precision is exhausted before a pivot can be found.
    """
    n = M.n
    a = [list(row) for row in M.entries]
    p0 = min(e.precision for row in a for e in row)
    one = PuiseuxSeries.one(p0)
    zero = PuiseuxSeries.zero(p0)
    g = [[one if i == j else zero for j in range(n)] for i in range(n)]
    h = [[one if i == j else zero for j in range(n)] for i in range(n)]

    for k in range(n):
        pivot_pos = None
        pivot_val = None
        for i in range(k, n):
            for j in range(k, n):
                if a[i][j].terms:
                    v = a[i][j].valuation()
                    if pivot_val is None or v < pivot_val:
                        pivot_val, pivot_pos = v, (i, j)
        if pivot_pos is None:
            raise IndeterminateValuation(
                "no usable pivot: remaining entries are zero to precision; "
                "rerun at higher precision")
        pi, pj = pivot_pos
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            g[k], g[pi] = g[pi], g[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            for row in h:
                row[k], row[pj] = row[pj], row[k]
        pivot_inv = a[k][k].invert()
        for i in range(k + 1, n):
            if a[i][k].terms:
                q = a[i][k] * pivot_inv  # valuation >= 0 by pivot minimality
                for j in range(n):
                    a[i][j] = a[i][j] - q * a[k][j]
                    g[i][j] = g[i][j] - q * g[k][j]
        for j in range(k + 1, n):
            if a[k][j].terms:
                q = a[k][j] * pivot_inv
                for i in range(n):
                    a[i][j] = a[i][j] - a[i][k] * q
                    h[i][j] = h[i][j] - h[i][k] * q

    # Scale each column so the diagonal becomes a pure monomial.
    for k in range(n):
        d = a[k][k]
        v = d.valuation()
        unit_inv = d.shift(-v).invert()
        for i in range(n):
            a[i][k] = a[i][k] * unit_inv
            h[i][k] = h[i][k] * unit_inv
        a[k][k] = PuiseuxSeries.monomial(1, v, a[k][k].precision)

    # Sort the diagonal decreasingly: D -> P D P^T, g -> P g, h -> h P^T.
    order = sorted(range(n), key=lambda k: (-a[k][k].valuation(), k))
    a = [[a[i][j] for j in order] for i in order]
    g = [g[i] for i in order]
    h = [[row[j] for j in order] for row in h]
    return SeriesMatrix(g), SeriesMatrix(a), SeriesMatrix(h)
