from fractions import Fraction
from random import Random

import pytest

from sphtrop import DEFAULT_PRECISION, PuiseuxSeries, SeriesMatrix


def random_series(rng: Random, lo=-5, hi=5, max_extra=3, ramification=1,
                  precision=DEFAULT_PRECISION) -> PuiseuxSeries:
    """A random series with determinate valuation in [lo, hi]."""
    v = Fraction(rng.randint(lo * ramification, hi * ramification), ramification)
    terms = {v: rng.choice([1, -1]) * rng.randint(1, 9)}
    for _ in range(rng.randint(0, max_extra)):
        e = v + Fraction(rng.randint(1, 8), ramification)
        terms[e] = terms.get(e, 0) + rng.choice([1, -1]) * rng.randint(1, 9)
    s = PuiseuxSeries(terms, precision)
    if s.is_zero_to_precision:  # accidental cancellation of the only term
        return PuiseuxSeries({v: 1}, precision)
    return s


def random_invertible_matrix(rng: Random, n: int, lo=-5, hi=5,
                             ramification=1) -> SeriesMatrix:
    while True:
        m = SeriesMatrix([[random_series(rng, lo, hi, ramification=ramification)
                           for _ in range(n)] for _ in range(n)])
        if not m.determinant().is_zero_to_precision:
            return m


@pytest.fixture
def rng():
    return Random(0xC0FFEE)
