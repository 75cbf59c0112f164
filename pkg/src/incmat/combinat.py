"""Exact binomial arithmetic, colex indexing and the shadow/extremal formulas."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Union

from .kset import KSet, kset, members

SetLike = Union[KSet, Iterable[int]]


def binomial(n: int, k: int) -> int:
    """Exact ``C(n, k)``; zero when ``k < 0`` or ``k > n``."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def choose(n: int, k: int) -> int:
    # Counting convention used inside the formulas: no k-subsets of a
    # "negative-size" ground set.
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _bits(S: SetLike) -> KSet:
    return S if isinstance(S, int) else kset(S)


def colex_rank(S: SetLike) -> int:
    """Position of ``S`` among all ``|S|``-subsets in colex order.

    ``S`` may be a bitmask or an iterable of vertex labels.
    """
    return sum(comb(v - 1, i) for i, v in enumerate(members(_bits(S)), start=1))


def colex_unrank(idx: int, k: int, n: int) -> KSet:
    if k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    total = comb(n, k)
    if not 0 <= idx < total:
        raise ValueError(f"index {idx} out of range for C({n},{k})={total}")
    bits = 0
    top = n
    for i in range(k, 0, -1):
        # largest c with C(c, i) <= idx, c < top
        c = top - 1
        while comb(c, i) > idx:
            c -= 1
        bits |= 1 << c
        idx -= comb(c, i)
        top = c
    return bits


@dataclass(frozen=True)
class CascadeDecomposition:
    """``m = sum C(top, index)`` with strictly decreasing tops."""

    m: int
    k: int
    terms: tuple[tuple[int, int], ...]

    def total(self) -> int:
        return sum(comb(top, i) for top, i in self.terms)


def cascade_decompose(m: int, k: int, allow_zero: bool = False) -> CascadeDecomposition:
    """Greedy k-binomial (cascade) representation of ``m``.

    >>> cascade_decompose(7, 3).terms
    ((4, 3), (3, 2))
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if m < 0 or (m == 0 and not allow_zero):
        raise ValueError(f"cascade decomposition needs m >= 1, got {m}")
    terms = []
    rest = m
    i = k
    while rest > 0:
        # smallest top with C(top, i) > rest, minus one
        top = i
        while comb(top + 1, i) <= rest:
            top += 1
        terms.append((top, i))
        rest -= comb(top, i)
        i -= 1
    return CascadeDecomposition(m, k, tuple(terms))


def kk_lower_shadow_bound(m: int, k: int, p: int) -> int:
    """Kruskal-Katona lower bound on the lower p-shadow of m k-sets."""
    if p < 1 or p > k:
        raise ValueError(f"need 1 <= p <= k, got p={p}, k={k}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return sum(choose(top, i - p) for top, i in cascade_decompose(m, k).terms)


def kk_upper_shadow_min(n: int, m: int, k: int, p: int) -> int:
    """K(n, m, k, p): least possible upper p-shadow of m k-subsets of [n]."""
    if k + p > n:
        raise ValueError(f"need k + p <= n, got k={k}, p={p}, n={n}")
    if not 1 <= m <= binomial(n, k):
        raise ValueError(f"m={m} out of range 1..C({n},{k})")
    if k == n:
        return 0
    return sum(choose(top, i - p) for top, i in cascade_decompose(m, n - k).terms)


def _check_nrange(n: int, t: int, r: int, s: int) -> None:
    if not r >= s >= 1:
        raise ValueError(f"need r >= s >= 1, got r={r}, s={s}")
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")


def N(n: int, t: int, r: int, s: int) -> int:
    """Size of the upper (r-s)-shadow of a t-element s-star configuration."""
    _check_nrange(n, t, r, s)
    return choose(n - s + 1, r - s + 1) - choose(n - s + 1 - t, r - s + 1)


def N_sum(n: int, t: int, r: int, s: int) -> int:
    """``N`` evaluated as a sum of t binomials; must agree with :func:`N`."""
    _check_nrange(n, t, r, s)
    return sum(choose(n - s + 1 - i, r - s) for i in range(1, t + 1))


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, float):
        raise TypeError("alpha must be an exact rational, not a float")
    if isinstance(alpha, str):
        alpha = Fraction(alpha)
    if not isinstance(alpha, Rational):
        raise TypeError(f"alpha must be rational, got {type(alpha).__name__}")
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def nspeed_holds(n: int, t: int, p: int, r: int, s: int, alpha) -> bool:
    """Whether ``alpha * N(n,p,r,s) > N(n,t,r,s)`` holds exactly."""
    alpha = _as_fraction(alpha)
    if r <= s:
        raise ValueError(f"need r > s, got r={r}, s={s}")
    return alpha * N(n, p, r, s) > N(n, t, r, s)


def ncomp_holds(n: int, t: int, r: int, s: int, alpha) -> bool:
    """Whether ``N(n,t,r,s) - alpha * C(n-s, r-s) < N(n-1,t,r,s)`` holds exactly."""
    alpha = _as_fraction(alpha)
    if r <= s:
        raise ValueError(f"need r > s, got r={r}, s={s}")
    return N(n, t, r, s) - alpha * binomial(n - s, r - s) < N(n - 1, t, r, s)
