from fractions import Fraction as F
from itertools import combinations, product
from random import Random

import pytest

from sphtrop import (DimensionMismatch, HornQuery, IndexTriple, enumerate_T,
                     enumerate_U, horn_check, realizability_oracle,
                     rep_variety_membership)


def q(alpha, beta, gamma_prime):
    return HornQuery(tuple(map(F, alpha)), tuple(map(F, beta)),
                     tuple(map(F, gamma_prime)))


class TestEnumerateU:
    def test_n2_r1(self):
        assert [str(t) for t in enumerate_U(2, 1)] == [
            "{1}|{1}|{1}", "{1}|{2}|{2}", "{2}|{1}|{2}"]

    def test_n2_r2(self):
        assert enumerate_U(2, 2) == (IndexTriple((1, 2), (1, 2), (1, 2)),)

    def test_sum_identity_recheck(self):
        for n in (2, 3, 4):
            for r in range(1, n + 1):
                for I, J, K in enumerate_U(n, r):
                    assert sum(I) + sum(J) == sum(K) + r * (r + 1) // 2

    def test_lexicographic_order(self):
        triples = enumerate_U(4, 2)
        assert list(triples) == sorted(triples)


class TestEnumerateT:
    def test_r1_equals_u(self):
        for n in (2, 3, 4):
            assert enumerate_T(n, 1) == enumerate_U(n, 1)

    def test_n2_r2_by_hand(self):
        # the only candidate survives the p=1 filter over T_1^2
        assert enumerate_T(2, 2) == (IndexTriple((1, 2), (1, 2), (1, 2)),)

    def test_subset_of_u(self):
        for n in (2, 3, 4):
            for r in range(1, n + 1):
                assert set(enumerate_T(n, r)) <= set(enumerate_U(n, r))

    def test_against_direct_reimplementation(self):
        # independent unmemoised filter, recursion written out separately
        def direct_T(n, r):
            def u(n_, r_):
                subsets = list(combinations(range(1, n_ + 1), r_))
                return [(I, J, K) for I in subsets for J in subsets for K in subsets
                        if sum(I) + sum(J) == sum(K) + r_ * (r_ + 1) // 2]

            def t(n_, r_):
                keep = []
                for I, J, K in u(n_, r_):
                    good = True
                    for p in range(1, r_):
                        for FF, GG, HH in t(r_, p):
                            lhs = sum(I[f - 1] for f in FF) + sum(J[g - 1] for g in GG)
                            if lhs > sum(K[h - 1] for h in HH) + p * (p + 1) // 2:
                                good = False
                                break
                        if not good:
                            break
                    if good:
                        keep.append((I, J, K))
                return keep

            return t(n, r)

        for n, r in [(3, 2), (4, 2), (4, 3)]:
            expected = direct_T(n, r)
            got = [(x.I, x.J, x.K) for x in enumerate_T(n, r)]
            assert got == expected


class TestHornCheck:
    def test_all_zero(self):
        assert horn_check(q((0, 0, 0), (0, 0, 0), (0, 0, 0)))

    def test_so4_style_pass_and_fail(self):
        assert horn_check(q((1, 0, 0, -1), (1, 0, 0, -1), (0, 0, 0, 0)))
        # equality already fails: sums are 1+1 != 0
        assert not horn_check(q((1, 1, 0, -1), (1, 1, 0, -1), (0, 0, 0, 0)))

    def test_sl2_reduces_to_triangle_inequalities(self):
        for a, b, c in product(range(4), repeat=3):
            expected = a <= b + c and b <= c + a and c <= a + b
            got = horn_check(q((a, -a), (b, -b), (c, -c)))
            assert got == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            horn_check(q((1, 0), (1, 0), (1, 0, 0)))

    def test_non_decreasing_rejected(self):
        with pytest.raises(ValueError):
            horn_check(q((0, 1), (0, 0), (1, 0)))

    def test_swap_symmetry(self):
        rng = Random(13)
        for _ in range(100):
            n = rng.choice([2, 3])
            alpha = tuple(sorted((rng.randint(-4, 4) for _ in range(n)), reverse=True))
            beta = tuple(sorted((rng.randint(-4, 4) for _ in range(n)), reverse=True))
            total = sum(alpha) + sum(beta)
            gp = sorted((rng.randint(-4, 4) for _ in range(n - 1)), reverse=True)
            last = total - sum(gp)
            if gp and last > gp[-1]:
                continue
            gamma_prime = tuple(gp) + (last,)
            assert horn_check(q(alpha, beta, gamma_prime)) == \
                horn_check(q(beta, alpha, gamma_prime))

    def test_positive_scaling_invariance(self):
        rng = Random(17)
        for _ in range(50):
            alpha = tuple(sorted((rng.randint(-3, 3) for _ in range(3)), reverse=True))
            beta = tuple(sorted((rng.randint(-3, 3) for _ in range(3)), reverse=True))
            gp = tuple(sorted((rng.randint(-3, 3) for _ in range(3)), reverse=True))
            c = F(rng.randint(1, 5), rng.randint(1, 5))
            plain = horn_check(q(alpha, beta, gp))
            scaled = horn_check(HornQuery(tuple(F(a) * c for a in alpha),
                                          tuple(F(b) * c for b in beta),
                                          tuple(F(g) * c for g in gp)))
            assert plain == scaled


class TestOracle:
    def test_witnessed_example(self):
        assert realizability_oracle(q((1, 0), (0, -1), (0, 0)), draws=100, seed=4)

    def test_sum_mismatch_never_attained(self):
        assert not realizability_oracle(q((1, 0), (0, 0), (0, 0)), draws=100, seed=4)

    def test_agreement_slice_n2(self):
        # the exhaustive [-2,2] box is run by the acceptance suite
        pairs = [(a, b) for a in range(-1, 2) for b in range(-1, 2) if a >= b]
        for alpha in pairs:
            for beta in pairs:
                total = sum(alpha) + sum(beta)
                for g1 in range(-2, 3):
                    g2 = total - g1
                    if not (-2 <= g2 <= 2 and g1 >= g2):
                        continue
                    query = q(alpha, beta, (g1, g2))
                    assert horn_check(query) == realizability_oracle(
                        query, draws=400, seed=6)

    def test_oracle_sound_for_n3(self):
        # every attained triple passes horn_check
        rng = Random(23)
        checked = 0
        while checked < 200:
            alpha = tuple(sorted((rng.randint(-2, 2) for _ in range(3)), reverse=True))
            beta = tuple(sorted((rng.randint(-2, 2) for _ in range(3)), reverse=True))
            total = sum(alpha) + sum(beta)
            gp = sorted((rng.randint(-4, 4) for _ in range(2)), reverse=True)
            last = total - sum(gp)
            if last > gp[-1]:
                continue
            checked += 1
            query = q(alpha, beta, tuple(gp) + (last,))
            if realizability_oracle(query, draws=120, seed=8):
                assert horn_check(query)

    def test_oracle_eventually_finds_horn_true_n3(self):
        # for a handful of pairs, every triple the inequalities admit is
        # eventually witnessed (the oracle caches its draw family per pair)
        rng = Random(29)
        for _ in range(5):
            alpha = tuple(sorted((rng.randint(-2, 2) for _ in range(3)), reverse=True))
            beta = tuple(sorted((rng.randint(-2, 2) for _ in range(3)), reverse=True))
            total = sum(alpha) + sum(beta)
            hi = alpha[0] + beta[0]
            for g1 in range(-6, hi + 1):
                for g2 in range(-6, g1 + 1):
                    g3 = total - g1 - g2
                    if g3 > g2:
                        continue
                    query = q(alpha, beta, (g1, g2, g3))
                    if horn_check(query):
                        assert realizability_oracle(query, draws=3000, seed=31)


class TestRepVariety:
    def test_sl2_triangle_points(self):
        assert rep_variety_membership("SL", 2, ((1,), (1,), (1,)))
        assert not rep_variety_membership("SL", 2, ((3,), (1,), (1,)))

    def test_gl1_scalar_rule(self):
        for a, b, c in product(range(-3, 4), repeat=3):
            expected = a + b == -c
            assert rep_variety_membership("GL", 1, ((a,), (b,), (c,))) == expected

    def test_gl2_identity_triple(self):
        assert rep_variety_membership("GL", 2, ((1, 0), (0, -1), (0, 0)))

    def test_dimension_check(self):
        with pytest.raises(DimensionMismatch):
            rep_variety_membership("GL", 2, ((1,), (1,), (1,)))
