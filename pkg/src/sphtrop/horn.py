"""Horn inequalities for invariant factors of matrix products.

Which triples of invariant-factor tuples (alpha, beta, gamma') can occur
for matrices x, y and z' = x*y over the power-series ring is governed by
a trace equality together with a recursively defined family of
inequalities indexed by triples of subsets of {1..n}.

Ordering convention: all tuples here are weakly DECREASING, and the
subset inequalities index directly into the decreasing tuples.  The
classical literature states the same system for decreasing sequences;
because a silent ordering mismatch is the main correctness risk in this
module, the convention is not taken on faith but calibrated against the
brute-force ``realizability_oracle`` below (see docs/horn_convention.md
and the acceptance suite, which sweeps an exhaustive integer box).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from random import Random
from typing import NamedTuple

from .matrix import SeriesMatrix, invariant_factors_minors
from .series import PuiseuxSeries

__all__ = [
    "IndexTriple", "HornQuery", "DimensionMismatch",
    "enumerate_U", "enumerate_T", "horn_check",
    "realizability_oracle", "rep_variety_membership",
]


class DimensionMismatch(ValueError):
    pass


class IndexTriple(NamedTuple):
    I: tuple[int, ...]
    J: tuple[int, ...]
    K: tuple[int, ...]

    def __str__(self):
        def fmt(s):
            return "{" + ",".join(str(i) for i in s) + "}"
        return f"{fmt(self.I)}|{fmt(self.J)}|{fmt(self.K)}"


class HornQuery(NamedTuple):
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    gamma_prime: tuple[Fraction, ...]


@lru_cache(maxsize=None)
def enumerate_U(n: int, r: int) -> tuple[IndexTriple, ...]:
    """All (I,J,K) with sum(I) + sum(J) = sum(K) + r(r+1)/2, in lex order."""
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    target_offset = r * (r + 1) // 2
    subsets = list(combinations(range(1, n + 1), r))
    out = []
    for I in subsets:
        si = sum(I)
        for J in subsets:
            sij = si + sum(J)
            for K in subsets:
                if sij == sum(K) + target_offset:
                    out.append(IndexTriple(I, J, K))
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_T(n: int, r: int) -> tuple[IndexTriple, ...]:
    """The recursive filtering of U_r^n.

    A triple (I,J,K) survives when for every p < r and every
    (F,G,H) in T_p^r -- note: triples inside {1..r}, not {1..n} --
    the selected elements satisfy
    sum(I[f]) + sum(J[g]) <= sum(K[h]) + p(p+1)/2.
    """
    out = []
    for triple in enumerate_U(n, r):
        I, J, K = triple
        ok = True
        for p in range(1, r):
            for F, G, H in enumerate_T(r, p):
                lhs = sum(I[f - 1] for f in F) + sum(J[g - 1] for g in G)
                rhs = sum(K[h - 1] for h in H) + p * (p + 1) // 2
                if lhs > rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(triple)
    return tuple(out)


def _check_tuple(t, name):
    t = tuple(Fraction(x) for x in t)
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"{name} must be weakly decreasing, got {t}")
    return t


def horn_check(query: HornQuery) -> bool:
    """Decide the equality and the full inequality system for a query."""
    alpha = _check_tuple(query.alpha, "alpha")
    beta = _check_tuple(query.beta, "beta")
    gamma_prime = _check_tuple(query.gamma_prime, "gamma_prime")
    n = len(alpha)
    if len(beta) != n or len(gamma_prime) != n:
        raise DimensionMismatch("all three tuples must have equal length")
    if sum(alpha) + sum(beta) != sum(gamma_prime):
        return False
    for r in range(1, n):
        for I, J, K in enumerate_T(n, r):
            lhs = sum(gamma_prime[k - 1] for k in K)
            rhs = sum(alpha[i - 1] for i in I) + sum(beta[j - 1] for j in J)
            if lhs > rhs:
                return False
    return True


# -- brute-force ground truth -------------------------------------------------

_ORACLE_PRECISION = Fraction(24)
_attained_cache: dict = {}


def _factors(m: SeriesMatrix) -> tuple:
    return invariant_factors_minors(m)


def _diag(exponents) -> SeriesMatrix:
    return SeriesMatrix.diagonal(
        [PuiseuxSeries.monomial(1, e, _ORACLE_PRECISION) for e in exponents])


def _permutation_matrix(perm, n) -> SeriesMatrix:
    zero = PuiseuxSeries.zero(_ORACLE_PRECISION)
    one = PuiseuxSeries.one(_ORACLE_PRECISION)
    return SeriesMatrix([[one if perm[i] == j else zero for j in range(n)]
                         for i in range(n)])


_UNITS = (-3, -2, -1, 1, 2, 3)


def _random_dressed(rng: Random, n: int, exponents) -> SeriesMatrix:
    """diag(t^exponents) dressed with random unimodular factors.

    Shears with coefficients c*t^k (k >= 0), unit row scalings and
    permutations on both sides are elementary operations over the power
    series ring, so the result has invariant factors exactly
    sorted(exponents, decreasing).  Applied in place: far cheaper than
    composing matrix products.
    """
    P = _ORACLE_PRECISION
    zero = PuiseuxSeries.zero(P)
    a = [[PuiseuxSeries.monomial(1, exponents[i], P) if i == j else zero
          for j in range(n)] for i in range(n)]
    for _ in range(rng.randint(1, 2)):  # row shears: a left factor
        i, j = rng.sample(range(n), 2)
        mono = PuiseuxSeries.monomial(rng.choice((-2, -1, 1, 2)),
                                      rng.randint(0, 3), P)
        a[i] = [a[i][c] + mono * a[j][c] for c in range(n)]
    for _ in range(rng.randint(1, 2)):  # column shears: a right factor
        i, j = rng.sample(range(n), 2)
        mono = PuiseuxSeries.monomial(rng.choice((-2, -1, 1, 2)),
                                      rng.randint(0, 3), P)
        for r in range(n):
            a[r][i] = a[r][i] + mono * a[r][j]
    rperm = rng.sample(range(n), n)
    cperm = rng.sample(range(n), n)
    units = [rng.choice(_UNITS) for _ in range(n)]
    return SeriesMatrix([[a[rperm[i]][cperm[j]].scalar_mul(units[i])
                          for j in range(n)] for i in range(n)])


def _structured_pairs(alpha, beta, n):
    """Deterministic draws that realise every attainable target for n=2.

    Permuted diagonal products cover the extremes for any n.  For n=2 an
    upper-triangular x with a swept corner exponent, paired with
    y = x^{-1} diag(t^{g1}, t^{g2}), walks the whole attainable interval.
    """
    pairs = []
    for perm in permutations(range(n)):
        x = _diag(alpha)
        y = _diag([beta[p] for p in perm])
        pairs.append((x, y))
    if n == 2:
        a1, a2 = alpha
        total = sum(alpha) + sum(beta)
        zero = PuiseuxSeries.zero(_ORACLE_PRECISION)
        lo = max(beta[0] + a2, beta[1] + a1)
        hi = beta[0] + a1
        g1 = hi
        while g1 >= lo:
            g2 = total - g1
            if g1 >= g2:
                k = a1 + a2 + beta[1] - g2
                x = SeriesMatrix([
                    [PuiseuxSeries.monomial(1, a1, _ORACLE_PRECISION),
                     PuiseuxSeries.monomial(1, k, _ORACLE_PRECISION)],
                    [zero, PuiseuxSeries.monomial(1, a2, _ORACLE_PRECISION)]])
                xinv = SeriesMatrix([
                    [PuiseuxSeries.monomial(1, -a1, _ORACLE_PRECISION),
                     PuiseuxSeries.monomial(-1, k - a1 - a2, _ORACLE_PRECISION)],
                    [zero, PuiseuxSeries.monomial(1, -a2, _ORACLE_PRECISION)]])
                y = xinv * _diag((g1, g2))
                pairs.append((x, y))
            g1 -= 1
    return pairs


def _attained_set(alpha, beta, draws: int, seed) -> frozenset:
    key = (alpha, beta, draws, seed)
    cached = _attained_cache.get(key)
    if cached is not None:
        return cached
    # Invariant factors of x*y and of y^T*x^T agree, so the attainable
    # set is symmetric in (alpha, beta); compute one representative.
    if beta < alpha:
        result = _attained_set(beta, alpha, draws, seed)
        _attained_cache[key] = result
        return result
    n = len(alpha)
    attained = set()
    used = 0
    for x, y in _structured_pairs(alpha, beta, n):
        used += 1
        if _factors(x) != alpha or _factors(y) != beta:
            continue
        attained.add(_factors(x * y))
    rng = Random(f"horn-oracle:{seed}:{alpha}:{beta}")
    while used < draws:
        used += 1
        x = _random_dressed(rng, n, alpha)
        y = _random_dressed(rng, n, beta)
        attained.add(_factors(x * y))
    result = frozenset(attained)
    _attained_cache[key] = result
    return result


def realizability_oracle(query: HornQuery, draws: int = 1000, seed=0) -> bool:
    """Search for matrices witnessing the query by construction.

    Draws x and y as unimodular dressings of diag(t^alpha) and
    diag(t^beta) (plus a deterministic sweep of triangular witnesses)
    and reports whether gamma_prime ever appeared as the invariant
    factors of x*y.  A True answer is a proof; False only means no
    witness was found within the draw budget.
    """
    alpha = _check_tuple(query.alpha, "alpha")
    beta = _check_tuple(query.beta, "beta")
    gamma_prime = _check_tuple(query.gamma_prime, "gamma_prime")
    if len(beta) != len(alpha) or len(gamma_prime) != len(alpha):
        raise DimensionMismatch("all three tuples must have equal length")
    return gamma_prime in _attained_set(alpha, beta, draws, seed)


def rep_variety_membership(group: str, n: int, point) -> bool:
    """Can (alpha, beta, gamma) be the value of a triple with x*y*z = e?

    ``point`` is a triple of weakly decreasing tuples: full n-tuples for
    GL, or (n-1)-tuples for SL whose last entries are reconstructed from
    the determinant-one condition.  gamma is converted to the invariant
    factors of z^{-1} (reverse and negate) before the Horn test.
    """
    kind = group.upper()
    if kind not in {"GL", "SL"}:
        raise ValueError("group must be GL or SL")
    alpha, beta, gamma = (tuple(Fraction(x) for x in t) for t in point)
    expect = n if kind == "GL" else n - 1
    if any(len(t) != expect for t in (alpha, beta, gamma)):
        raise DimensionMismatch(f"{kind}_{n} tuples must have length {expect}")
    if kind == "SL":
        alpha = alpha + (-sum(alpha),)
        beta = beta + (-sum(beta),)
        gamma = gamma + (-sum(gamma),)
        for t in (alpha, beta, gamma):
            if any(t[i] < t[i + 1] for i in range(n - 1)):
                return False
    gamma_prime = tuple(-x for x in reversed(gamma))
    return horn_check(HornQuery(alpha, beta, gamma_prime))
