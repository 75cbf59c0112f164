"""Vertex subsets of [1..n] packed into a single integer bitmask.

Bit ``i - 1`` is set iff vertex ``i`` is present.  For sets of equal size,
integer order of the masks coincides with colexicographic order, which is
why every edge list in the package is simply sorted numerically.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

KSet = int

MAX_VERTICES = 64


def kset(vertices: Iterable[int]) -> KSet:
    bits = 0
    for v in vertices:
        if v < 1:
            raise ValueError(f"vertex labels start at 1, got {v}")
        bits |= 1 << (v - 1)
    return bits


def members(bits: KSet) -> tuple[int, ...]:
    """Sorted vertex labels of a mask."""
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length())
        bits ^= low
    return tuple(out)


def size(bits: KSet) -> int:
    return bits.bit_count()


def full(n: int) -> KSet:
    return (1 << n) - 1


def within(bits: KSet, n: int) -> bool:
    return bits >> n == 0


def subsets_of_size(bits: KSet, k: int) -> Iterator[KSet]:
    """All k-subsets of ``bits`` in colex order."""
    elems = [1 << (v - 1) for v in members(bits)]
    for combo in combinations(elems, k):
        yield sum(combo)


def all_ksets(n: int, k: int) -> list[KSet]:
    """Every k-subset of [n], colex order (Gosper's hack)."""
    if k < 0 or k > n:
        return []
    if k == 0:
        return [0]
    out = []
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        out.append(x)
        c = x & -x
        y = x + c
        x = (((x ^ y) >> 2) // c) | y
    return out


def drop_vertex(bits: KSet, x: int) -> KSet:
    """Remove vertex ``x`` and shift higher labels down by one."""
    low = bits & ((1 << (x - 1)) - 1)
    return low | ((bits >> x) << (x - 1))


def insert_vertex(bits: KSet, x: int) -> KSet:
    """Inverse of :func:`drop_vertex` for masks that should not contain ``x``."""
    low = bits & ((1 << (x - 1)) - 1)
    return low | ((bits >> (x - 1)) << x)


def format_kset(bits: KSet) -> str:
    return "{" + ",".join(map(str, members(bits))) + "}"
