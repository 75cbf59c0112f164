from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from incmat.combinat import (
    N,
    N_sum,
    binomial,
    cascade_decompose,
    colex_rank,
    colex_unrank,
    kk_lower_shadow_bound,
    kk_upper_shadow_min,
    ncomp_holds,
    nspeed_holds,
)
from incmat.kset import kset


def brute_lower_shadow_min(n, m, k, p):
    best = None
    for fam in combinations(combinations(range(n), k), m):
        sh = {sub for e in fam for sub in combinations(e, k - p)}
        best = len(sh) if best is None else min(best, len(sh))
    return best


def brute_upper_shadow_min(n, m, k, p):
    best = None
    for fam in combinations(combinations(range(n), k), m):
        sh = {sup for sup in combinations(range(n), k + p) if any(set(e) <= set(sup) for e in fam)}
        best = len(sh) if best is None else min(best, len(sh))
    return best


class TestBinomial:
    def test_values(self):
        assert binomial(5, 2) == 10
        assert binomial(5, 6) == 0
        assert binomial(5, -1) == 0
        assert binomial(0, 0) == 1

    def test_negative_top_rejected(self):
        with pytest.raises(ValueError):
            binomial(-1, 2)


class TestColex:
    def test_examples(self):
        assert colex_rank(kset([1, 2, 3])) == 0
        assert colex_rank([1, 2, 4]) == 1

    def test_round_trip_small(self):
        for k in range(1, 5):
            for c in combinations(range(1, 9), k):
                S = kset(c)
                assert colex_unrank(colex_rank(S), k, 8) == S

    def test_bijection_on_ten(self):
        for k in range(0, 6):
            images = [colex_unrank(i, k, 10) for i in range(comb(10, k))]
            assert len(set(images)) == comb(10, k)
            assert [colex_rank(S) for S in images] == list(range(comb(10, k)))
            # colex order of masks is the integer order
            assert images == sorted(images)

    def test_errors(self):
        with pytest.raises(ValueError):
            colex_unrank(comb(5, 2), 2, 5)
        with pytest.raises(ValueError):
            colex_unrank(0, 6, 5)


class TestCascade:
    @pytest.mark.parametrize(
        "m,k,terms",
        [(5, 3, [(4, 3), (2, 2)]), (20, 3, [(6, 3)]), (7, 3, [(4, 3), (3, 2)])],
    )
    def test_examples(self, m, k, terms):
        assert [tuple(t) for t in cascade_decompose(m, k).terms] == terms

    def test_reconstruction_grid(self):
        for k in range(1, 9):
            for m in range(1, 501):
                dec = cascade_decompose(m, k)
                assert dec.total() == m
                tops = [a for a, _ in dec.terms]
                idx = [i for _, i in dec.terms]
                assert all(a > b for a, b in zip(tops, tops[1:]))
                assert idx == list(range(k, k - len(idx), -1))
                assert all(a >= i for a, i in dec.terms)

    def test_zero_is_error_by_default(self):
        with pytest.raises(ValueError):
            cascade_decompose(0, 3)
        assert cascade_decompose(0, 3, allow_zero=True).terms == ()

    @given(st.integers(1, 10**6), st.integers(1, 12))
    def test_uniqueness_property(self, m, k):
        dec = cascade_decompose(m, k)
        assert sum(comb(a, i) for a, i in dec.terms) == m


class TestKruskalKatona:
    def test_examples(self):
        assert kk_lower_shadow_bound(5, 3, 1) == 8
        assert kk_lower_shadow_bound(1, 4, 2) == 6

    def test_oracle_small(self):
        for m in range(1, 9):
            assert kk_lower_shadow_bound(m, 3, 1) == brute_lower_shadow_min(6, m, 3, 1)

    def test_equality_at_binomials(self):
        for x in range(4, 9):
            for k in (2, 3):
                for p in (1, 2):
                    assert kk_lower_shadow_bound(comb(x, k), k, p) == comb(x, k - p)

    def test_monotone_in_m(self):
        for k in range(1, 6):
            for p in range(1, k + 1):
                vals = [kk_lower_shadow_bound(m, k, p) for m in range(1, 300)]
                assert vals == sorted(vals)

    def test_p_greater_than_k(self):
        with pytest.raises(ValueError):
            kk_lower_shadow_bound(3, 2, 3)

    def test_upper_examples(self):
        assert kk_upper_shadow_min(6, 2, 1, 1) == 9
        assert brute_upper_shadow_min(6, 2, 1, 1) == 9
        for n in range(3, 8):
            for k in range(1, n):
                for p in range(1, n - k + 1):
                    assert kk_upper_shadow_min(n, comb(n, k), k, p) == comb(n, k + p)

    def test_upper_oracle(self):
        for m in range(1, 6):
            assert kk_upper_shadow_min(6, m, 2, 1) == brute_upper_shadow_min(6, m, 2, 1)

    def test_upper_star_identity(self):
        for r in range(2, 5):
            for s in range(1, r):
                for n in range(r, 13):
                    for t in range(1, n - s + 1):
                        expect = comb(n - s + 1, r - s + 1) - comb(n - s + 1 - t, r - s + 1)
                        assert kk_upper_shadow_min(n, t, s, r - s) == expect

    def test_upper_range(self):
        with pytest.raises(ValueError):
            kk_upper_shadow_min(5, 11, 2, 1)


class TestN:
    def test_examples(self):
        assert N(10, 2, 3, 1) == 64 == N_sum(10, 2, 3, 1)
        for r in range(1, 6):
            for s in range(1, r + 1):
                for n in range(r, 13):
                    assert N(n, 1, r, s) == comb(n - s, r - s)
                    assert N(n, 0, r, s) == 0

    def test_mono_and_redef(self):
        for n in range(1, 16):
            for r in range(1, 6):
                for s in range(1, r + 1):
                    for t in range(0, n + 1):
                        assert N(n, t, r, s) == N_sum(n, t, r, s)
                        # left side is defined for t <= n - 1
                        if s >= 2 and t <= n - 1:
                            assert N(n - 1, t, r - 1, s - 1) == N(n, t, r, s)

    def test_errors(self):
        with pytest.raises(ValueError):
            N(5, 1, 1, 2)
        with pytest.raises(ValueError):
            N(5, 6, 2, 1)


class TestNLemmas:
    def test_examples(self):
        assert nspeed_holds(100, 5, 90, 2, 1, Fraction(1, 2))
        assert ncomp_holds(100, 5, 2, 1, Fraction(1, 2))
        for n, t in [(10, 3), (20, 1), (12, 5)]:
            assert not nspeed_holds(n, t, t, 3, 1, Fraction(1, 2))

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            nspeed_holds(100, 5, 90, 2, 1, Fraction(1))
        with pytest.raises(ValueError):
            ncomp_holds(100, 5, 2, 1, 0)
