from __future__ import annotations

import io
from math import comb

import numpy as np
import pytest
import sympy

from incmat import linalg
from incmat.combinat import colex_rank
from incmat.hypergraph import complete, construct_G, construct_R, random_hypergraph, shadow
from incmat.kset import kset
from incmat.matrix import (
    CERTIFIED,
    EXACT,
    MODULAR,
    build_matrix,
    format_matrix_market,
    nullspace_vectors,
    rank,
    read_matrix_market,
)


def sympy_rank(M):
    if not M.rows:
        return 0
    return sympy.Matrix(M.dense()).rank()


C4 = construct_R(4, 2, 1)


class TestBuild:
    def test_shapes(self):
        M = build_matrix(complete(4, 2), 1)
        assert M.shape == (6, 4)
        assert all(len(row) == 2 for row in M.rows)

    def test_s_equals_r(self):
        G = random_hypergraph(7, 3, 0.5, seed=2)
        M = build_matrix(G, 3)
        assert [row for row in M.rows] == [(colex_rank(e),) for e in G.edges]

    def test_s_zero(self):
        M = build_matrix(complete(5, 2), 0)
        assert M.ncols == 1 and all(row == (0,) for row in M.rows)

    def test_entries(self):
        G = random_hypergraph(7, 3, 0.5, seed=4)
        M = build_matrix(G, 2)
        for e, row in zip(G.edges, M.rows):
            assert len(row) == comb(3, 2)
            assert {colex_rank(S) for S in shadow([e], 1, "lower", 7)} == set(row)

    def test_errors(self):
        with pytest.raises(ValueError):
            build_matrix(complete(5, 2), 3)
        assert build_matrix(random_hypergraph(5, 2, 0.0, seed=0), 1).nrows == 0


class TestRank:
    def test_gottlieb_small(self):
        for n in range(0, 8):
            for r in range(0, n + 1):
                for s in range(0, r + 1):
                    M = build_matrix(complete(n, r), s)
                    assert rank(M).rank == min(comb(n, r), comb(n, s))

    def test_examples(self):
        assert rank(build_matrix(C4, 1)).rank == 3
        K4 = build_matrix(complete(4, 2), 1)
        assert rank(K4, "modular", p=2).rank == 3
        assert rank(K4, "exact").rank == 4

    def test_certificate_fields(self):
        M = build_matrix(construct_G(8, 2, 3, 1), 1)
        ex = rank(M, "exact")
        assert (ex.rank, ex.nullity, ex.method, ex.verified) == (6, 2, EXACT, True)
        mod = rank(M, "modular", p=1_000_003)
        assert mod.method == MODULAR and mod.primes_used == [1_000_003] and not mod.verified
        cert = rank(M, "certified", rng=1)
        assert cert.rank == 6 and cert.verified and cert.rank + cert.nullity == M.ncols
        assert cert.method in (CERTIFIED, EXACT)

    def test_empty_matrix(self):
        M = build_matrix(random_hypergraph(6, 3, 0.0, seed=0), 2)
        for mode, kw in [("exact", {}), ("certified", {}), ("modular", {"p": 7})]:
            assert rank(M, mode, **kw).rank == 0

    def test_bad_modulus(self):
        M = build_matrix(C4, 1)
        with pytest.raises(ValueError):
            rank(M, "modular", p=15)
        with pytest.raises(ValueError):
            rank(M, "modular", p=(1 << 62) + 135)
        with pytest.raises(ValueError):
            rank(M, "modular")
        with pytest.raises(ValueError):
            rank(M, "fast")

    def test_large_prime_path(self):
        p = sympy.prevprime(1 << 62)
        G = random_hypergraph(8, 3, 0.4, seed=8)
        M = build_matrix(G, 2)
        assert rank(M, "modular", p=p).rank == sympy_rank(M)

    def test_against_sympy(self):
        rng = np.random.default_rng(12)
        for _ in range(60):
            n = int(rng.integers(3, 9))
            r = int(rng.integers(1, min(n, 4) + 1))
            s = int(rng.integers(0, r + 1))
            G = random_hypergraph(n, r, float(rng.uniform(0.2, 0.9)), rng=rng)
            M = build_matrix(G, s)
            truth = sympy_rank(M)
            assert rank(M, "exact").rank == truth
            assert rank(M, "certified", rng=rng).rank == truth
            for _ in range(3):
                p = linalg.random_prime(rng, 2, 1000)
                assert rank(M, "modular", p=p).rank <= truth

    def test_nonzero_column_bound(self):
        for G in [construct_G(8, 2, 3, 1), construct_R(7, 3, 2), random_hypergraph(8, 4, 0.3, seed=1)]:
            for s in range(1, G.r):
                M = build_matrix(G, s)
                assert rank(M).rank <= len(shadow(G.edges, G.r - s, "lower", G.n))


class TestNullspace:
    def test_c4(self):
        M = build_matrix(C4, 1)
        assert nullspace_vectors(M, "exact") == [[1, -1, 1, -1]]
        assert nullspace_vectors(M, "modular", rng=0) == [[1, -1, 1, -1]]

    def test_R_base_vector(self):
        for r in range(3, 7):
            M = build_matrix(construct_R(r + 2, r, 1), 1)
            basis = nullspace_vectors(M)
            assert basis == [[1] * (r + 1) + [-(r - 1)]]

    def test_full_rank_is_empty(self):
        for n, r, s in [(6, 3, 2), (7, 3, 1), (8, 4, 3)]:
            assert nullspace_vectors(build_matrix(complete(n, r), s)) == []

    def test_modes_agree_and_normalised(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            n = int(rng.integers(4, 9))
            G = random_hypergraph(n, 3, float(rng.uniform(0.1, 0.6)), rng=rng)
            M = build_matrix(G, 2)
            a = nullspace_vectors(M, "exact")
            b = nullspace_vectors(M, "auto", rng=rng)
            assert a == b
            assert len(a) == M.ncols - sympy_rank(M)
            for v in a:
                nz = [x for x in v if x]
                assert nz[0] > 0
                assert np.gcd.reduce([abs(x) for x in nz]) == 1
                assert all(sum(v[j] for j in row) == 0 for row in M.rows)

    def test_no_rows(self):
        M = build_matrix(random_hypergraph(4, 2, 0.0, seed=0), 1)
        assert nullspace_vectors(M) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


class TestLinalg:
    def test_gf2(self):
        assert linalg.rank_gf2([0b011, 0b110, 0b101]) == 2
        assert linalg.rank_gf2([]) == 0

    def test_rational_reconstruct(self):
        m = 1_000_000_007
        for num, den in [(3, 7), (-5, 11), (0, 1), (12, 1)]:
            a = num * pow(den, -1, m) % m
            assert linalg.rational_reconstruct(a, m) == sympy.Rational(num, den)

    def test_exact_rank_transposed(self):
        rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1], [0, 2, 2]]
        assert linalg.rank_exact(rows, 3) == sympy.Matrix(rows).rank() == 2


class TestMatrixMarket:
    def test_round_trip(self):
        for G, s in [(construct_G(8, 2, 3, 1), 1), (construct_R(6, 3, 2), 2), (C4, 1)]:
            M = build_matrix(G, s)
            text = format_matrix_market(M, {"seed": 0})
            back = read_matrix_market(io.StringIO(text))
            assert (back.n, back.r, back.s, back.rows) == (M.n, M.r, M.s, M.rows)

    def test_header(self):
        text = format_matrix_market(build_matrix(C4, 1))
        lines = text.splitlines()
        assert lines[0] == "%%MatrixMarket matrix coordinate integer general"
        assert lines[1] == "% inclusion matrix n=4 r=2 s=1"
        assert "4 4 8" in lines
        assert "1 1 1" in lines and "0 " not in text.split("\n", 4)[-1]

    def test_rejects_foreign(self):
        with pytest.raises(ValueError):
            read_matrix_market(io.StringIO("%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 1 1\n"))
        bad = format_matrix_market(build_matrix(C4, 1)).replace("4 4 8", "4 4 9")
        with pytest.raises(ValueError):
            read_matrix_market(io.StringIO(bad))

    def test_kset_colex_columns(self):
        M = build_matrix(complete(4, 3), 2)
        assert M.rows[0] == tuple(sorted(colex_rank(kset(p)) for p in [(1, 2), (1, 3), (2, 3)]))
