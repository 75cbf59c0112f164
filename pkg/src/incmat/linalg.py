"""Exact and modular linear algebra on small dense integer matrices.

Matrices are lists of integer rows.  Three engines live here:

* fraction-free (Bareiss) elimination over the integers, for exact ranks,
  plus a gcd-cancelling Gauss-Jordan pass for exact kernels;
* elimination over GF(p): bit-packed XOR rows for p = 2, vectorised int64
  numpy rows for odd p < 2**31 and plain Python integers above that;
* multi-modular kernel lifting (CRT + rational reconstruction), whose
  output is only trusted after exact multiplication against the matrix.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Sequence

import numpy as np

Matrix = Sequence[Sequence[int]]

NUMPY_PRIME_LIMIT = 1 << 31
MODULUS_LIMIT = 1 << 62


def is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


def random_prime(rng: np.random.Generator, low: int = 1 << 30, high: int = NUMPY_PRIME_LIMIT) -> int:
    """A prime drawn from [low, high) via the supplied generator."""
    from sympy import nextprime, prevprime

    start = int(rng.integers(low, high))
    p = int(nextprime(start - 1))
    return p if p < high else int(prevprime(high))


# -- exact ---------------------------------------------------------------


def rank_exact(rows: Matrix, ncols: int) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    # Work on whichever orientation has fewer columns; rank is transpose-invariant.
    A = [list(r) for r in rows]
    m = len(A)
    if m == 0 or ncols == 0:
        return 0
    if m < ncols:
        A = [list(col) for col in zip(*A)]
        m, ncols = ncols, m
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(rank, m):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        prow = A[rank]
        p = prow[c]
        tail = range(c + 1, ncols)
        for i in range(rank + 1, m):
            row = A[i]
            a = row[c]
            if a:
                for j in tail:
                    row[j] = (p * row[j] - a * prow[j]) // prev
            elif p != prev:
                for j in tail:
                    row[j] = p * row[j] // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rref_exact(rows: Matrix, ncols: int) -> tuple[list[list[int]], list[int]]:
    """Integer Gauss-Jordan form.

    Each returned row has a nonzero entry in its pivot column and zeros in
    every other pivot column; rows are divided by their content after each
    step so entries stay small.
    """
    A = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        prow = A[rank]
        p = prow[c]
        for i in range(len(A)):
            if i == rank or not A[i][c]:
                continue
            row = A[i]
            a = row[c]
            new = [p * x - a * y for x, y in zip(row, prow)]
            g = reduce(gcd, new, 0)
            if g > 1:
                new = [x // g for x in new]
            A[i] = new
        pivots.append(c)
        rank += 1
        if rank == len(A):
            break
    return A[:rank], pivots


def normalize(vec: Sequence) -> list[int]:
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    fr = [Fraction(x) for x in vec]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return ints if lead > 0 else [-x for x in ints]


def kernel_from_rref(R: Sequence[Sequence], pivots: Sequence[int], ncols: int, pivot_vals=None) -> list[list[int]]:
    """Canonical kernel basis: one vector per free column, normalized."""
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            d = R[i][c] if pivot_vals is None else pivot_vals[i]
            v[c] = Fraction(-R[i][f], d)
        basis.append(normalize(v))
    return basis


def kernel_exact(rows: Matrix, ncols: int) -> list[list[int]]:
    R, pivots = rref_exact(rows, ncols)
    return kernel_from_rref(R, pivots, ncols)


def in_kernel(sparse_rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Exact check that a 0/1 matrix given by its row supports kills ``v``."""
    return all(sum(v[j] for j in row) == 0 for row in sparse_rows)


def in_kernel_dense(rows: Matrix, v: Sequence[int]) -> bool:
    return all(sum(a * x for a, x in zip(row, v)) == 0 for row in rows)


# -- modular -------------------------------------------------------------


def rank_gf2(row_masks: Sequence[int]) -> int:
    """Rank over GF(2) of rows packed as integer bitmasks."""
    pivots: dict[int, int] = {}
    for v in row_masks:
        while v:
            h = v.bit_length() - 1
            w = pivots.get(h)
            if w is None:
                pivots[h] = v
                break
            v ^= w
    return len(pivots)


def pack_rows(rows: Matrix) -> list[int]:
    out = []
    for row in rows:
        bits = 0
        for j, a in enumerate(row):
            if a & 1:
                bits |= 1 << j
        out.append(bits)
    return out


def _rref_mod_p_numpy(rows: Matrix, ncols: int, p: int, full: bool):
    A = np.asarray(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    m = A.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        if not full:
            col[:r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r]) % p) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_mod_p_python(rows: Matrix, ncols: int, p: int, full: bool):
    A = [[x % p for x in row] for row in rows]
    m = len(A)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        prow = [x * inv % p for x in A[r]]
        A[r] = prow
        for i in range(0 if full else r + 1, m):
            a = A[i][c]
            if i != r and a:
                A[i] = [(x - a * y) % p for x, y in zip(A[i], prow)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref_mod_p(rows: Matrix, ncols: int, p: int, full: bool = True):
    """Row-reduced echelon form over GF(p) and its pivot columns."""
    if len(rows) == 0 or ncols == 0:
        return [], []
    if p < NUMPY_PRIME_LIMIT:
        return _rref_mod_p_numpy(rows, ncols, p, full)
    return _rref_mod_p_python(rows, ncols, p, full)


def rank_mod_p(rows: Matrix, ncols: int, p: int) -> int:
    if p == 2:
        return rank_gf2(pack_rows(rows))
    return len(rref_mod_p(rows, ncols, p, full=False)[1])


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Smallest-height fraction congruent to ``a`` mod ``m``, if one exists."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def kernel_multimodular(
    rows: Matrix,
    ncols: int,
    rng: np.random.Generator,
    max_primes: int = 8,
) -> tuple[int, list[list[int]]] | None:
    """Kernel basis by CRT over random primes, verified exactly.

    Returns ``(rank, basis)`` once every reconstructed vector passes exact
    multiplication, or ``None`` if that does not happen within
    ``max_primes`` primes.  The rank is the largest modular rank seen, so
    together with ``len(basis) == ncols - rank`` it is exact.
    """
    best_rank = -1
    best_pivots: list[int] | None = None
    residues: list[list[int]] | None = None
    modulus = 1
    for _ in range(max_primes):
        p = random_prime(rng)
        R, pivots = rref_mod_p(rows, ncols, p, full=True)
        if len(pivots) > best_rank or (len(pivots) == best_rank and pivots < best_pivots):
            # a strictly better pivot set means earlier primes were unlucky
            best_rank, best_pivots = len(pivots), list(pivots)
            residues, modulus = None, 1
        elif pivots != best_pivots:
            continue
        R = [[int(x) for x in row] for row in R]
        free = [f for f in range(ncols) if f not in set(pivots)]
        current = [[-R[i][f] % p for i in range(len(pivots))] for f in free]
        if residues is None:
            residues = current
            modulus = p
        else:
            inv = pow(modulus, -1, p)
            residues = [
                [a + modulus * ((b - a) * inv % p) for a, b in zip(old, new)]
                for old, new in zip(residues, current)
            ]
            modulus *= p
        basis = _lift(residues, modulus, best_pivots, free, ncols)
        if basis is not None and all(in_kernel_dense(rows, v) for v in basis):
            return best_rank, basis
    return None


def _lift(residues, modulus, pivots, free, ncols):
    basis = []
    for f, res in zip(free, residues):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, a in zip(pivots, res):
            q = rational_reconstruct(a, modulus)
            if q is None:
                return None
            v[c] = q
        basis.append(normalize(v))
    return basis
