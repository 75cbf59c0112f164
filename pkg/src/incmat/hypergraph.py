"""Uniform hypergraphs on [1..n] and the named constructions built from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, TextIO

import numpy as np

from .combinat import choose
from .kset import (
    MAX_VERTICES,
    KSet,
    all_ksets,
    drop_vertex,
    full,
    kset,
    members,
    within,
)


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform edge family on the labeled vertex set [1..n].

    Edges are bitmasks kept sorted (colex) and duplicate-free.  Build
    instances through :meth:`from_edges` unless the edge tuple is already
    canonical.
    """

    n: int
    r: int
    edges: tuple[KSet, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 0..{MAX_VERTICES}, got {self.n}")
        if self.r < 0:
            raise ValueError(f"uniformity must be nonnegative, got {self.r}")
        prev = -1
        for e in self.edges:
            if e <= prev:
                raise ValueError("edges must be strictly increasing in colex order")
            if e.bit_count() != self.r or not within(e, self.n):
                raise ValueError(f"edge {members(e)} is not an {self.r}-subset of [{self.n}]")
            prev = e

    @classmethod
    def from_edges(cls, n: int, r: int, edges: Iterable) -> "Hypergraph":
        masks = {e if isinstance(e, int) else kset(e) for e in edges}
        return cls(n, r, tuple(sorted(masks)))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        bits = e if isinstance(e, int) else kset(e)
        return bits in self.edge_set

    @property
    def edge_set(self) -> frozenset[KSet]:
        # cached lazily; the dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_edge_set"]
        except KeyError:
            es = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", es)
            return es

    def edge_lists(self) -> list[tuple[int, ...]]:
        return [members(e) for e in self.edges]

    def degree(self, x: int) -> int:
        bit = 1 << (x - 1)
        return sum(1 for e in self.edges if e & bit)

    def induced(self, vertices: KSet) -> "Hypergraph":
        """Edges inside ``vertices``; labels are kept (not compacted)."""
        return Hypergraph(self.n, self.r, tuple(e for e in self.edges if e & ~vertices == 0))

    def without_edges(self, removed: Iterable[KSet]) -> "Hypergraph":
        gone = set(removed)
        return Hypergraph(self.n, self.r, tuple(e for e in self.edges if e not in gone))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, m={len(self.edges)})"


def complete(n: int, r: int) -> Hypergraph:
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    return Hypergraph(n, r, tuple(all_ksets(n, r)))


def empty(n: int, r: int) -> Hypergraph:
    return Hypergraph(n, r, ())


def complement(G: Hypergraph) -> Hypergraph:
    present = G.edge_set
    return Hypergraph(G.n, G.r, tuple(e for e in all_ksets(G.n, G.r) if e not in present))


def _check_vertex(H: Hypergraph, x: int) -> None:
    if not 1 <= x <= H.n:
        raise ValueError(f"vertex {x} outside [1..{H.n}]")


def delete_vertex(H: Hypergraph, x: int) -> Hypergraph:
    """H - x: edges avoiding x, labels above x shifted down."""
    _check_vertex(H, x)
    bit = 1 << (x - 1)
    edges = tuple(drop_vertex(e, x) for e in H.edges if not e & bit)
    return Hypergraph(H.n - 1, H.r, edges)


def link(H: Hypergraph, x: int) -> Hypergraph:
    """H/x: edges through x with x stripped, labels above x shifted down."""
    _check_vertex(H, x)
    if H.r == 0:
        raise ValueError("the link of a 0-graph is undefined")
    bit = 1 << (x - 1)
    edges = tuple(drop_vertex(e ^ bit, x) for e in H.edges if e & bit)
    # dropping a vertex preserves relative order, so edges stay sorted
    return Hypergraph(H.n - 1, H.r - 1, edges)


def shadow(F: Iterable[KSet], p: int, direction: str, n: int) -> set[KSet]:
    """Lower or upper p-shadow of a uniform family of subsets of [n]."""
    if p < 1:
        raise ValueError(f"shadow order must be >= 1, got {p}")
    fam = [e if isinstance(e, int) else kset(e) for e in F]
    if not fam:
        return set()
    k = fam[0].bit_count()
    if any(e.bit_count() != k for e in fam):
        raise ValueError("shadow requires a uniform family")
    out: set[KSet] = set()
    if direction == "lower":
        if p > k:
            raise ValueError(f"lower {p}-shadow of {k}-sets is undefined")
        for e in fam:
            out.update(sum(c) for c in combinations([1 << (v - 1) for v in members(e)], k - p))
    elif direction == "upper":
        if k + p > n:
            raise ValueError(f"upper {p}-shadow of {k}-sets needs k + p <= n (n={n})")
        everything = full(n)
        for e in fam:
            rest = [1 << (v - 1) for v in members(everything & ~e)]
            out.update(e | sum(c) for c in combinations(rest, p))
    else:
        raise ValueError(f"direction must be 'lower' or 'upper', got {direction!r}")
    return out


def setwise_complement(F: Iterable[KSet], n: int) -> set[KSet]:
    everything = full(n)
    return {everything & ~e for e in F}


def s_degree(G: Hypergraph, S: KSet | Sequence[int]) -> int:
    bits = S if isinstance(S, int) else kset(S)
    if bits.bit_count() > G.r:
        raise ValueError("|S| exceeds the uniformity")
    return sum(1 for e in G.edges if e & bits == bits)


def max_s_degree(G: Hypergraph, s: int) -> int:
    counts: dict[KSet, int] = {}
    for e in G.edges:
        for c in combinations([1 << (v - 1) for v in members(e)], s):
            key = sum(c)
            counts[key] = counts.get(key, 0) + 1
    return max(counts.values(), default=0)


def star_configuration(n: int, t: int, s: int) -> list[KSet]:
    """Canonical S_{n,t,s}: {1..s-1} together with each of s, ..., s+t-1."""
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    if not 1 <= t <= n - s + 1:
        raise ValueError(f"need 1 <= t <= n-s+1, got t={t} (n={n}, s={s})")
    core = full(s - 1)
    return [core | (1 << (s - 2 + i)) for i in range(1, t + 1)]


def star_shadow(n: int, t: int, r: int, s: int) -> Hypergraph:
    """Upper (r-s)-shadow of S_{n,t,s} as an r-graph."""
    stars = star_configuration(n, t, s)
    return Hypergraph.from_edges(n, r, shadow(stars, r - s, "upper", n))


def construct_G(n: int, t: int, r: int, s: int) -> Hypergraph:
    """K_n^r minus every edge that contains a member of S_{n,t,s}."""
    if not r > s >= 1:
        raise ValueError(f"need r > s >= 1, got r={r}, s={s}")
    if n < r:
        raise ValueError(f"need n >= r, got n={n}, r={r}")
    stars = star_configuration(n, t, s)
    edges = tuple(e for e in all_ksets(n, r) if not any(e & S == S for S in stars))
    return Hypergraph(n, r, edges)


def construct_R(n: int, r: int, s: int) -> Hypergraph:
    """Rank-deficient r-graph with few missing edges (the tightness example)."""
    if not r > s >= 1:
        raise ValueError(f"need r > s >= 1, got r={r}, s={s}")
    if n < r + 2:
        raise ValueError(f"need n >= r + 2, got n={n}, r={r}")
    if s == 1:
        if r == 2:
            return Hypergraph.from_edges(n, 2, [(1, 2), (2, 3), (3, 4), (1, 4)])
        apex = 1 << (r + 1)
        return Hypergraph.from_edges(n, r, [apex | e for e in all_ksets(r + 1, r - 1)])
    inner = construct_R(n - 1, r - 1, s - 1)
    top = 1 << (n - 1)
    return Hypergraph.from_edges(n, r, all_ksets(n - 1, r) + [top | e for e in inner.edges])


def hamilton_cycle_length(n: int, r: int) -> int:
    """The n' in [n-r+1, n] with n' = r-1 (mod r)."""
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    n_prime = n - ((n - (r - 1)) % r)
    if n_prime <= r:
        raise ValueError(
            f"no admissible cycle length: the n' = {r - 1} (mod {r}) in "
            f"[{n - r + 1}, {n}] is {n_prime}, too short for a tight cycle of {r}-sets"
        )
    extra = n - n_prime
    if extra * (r - 1) > n_prime:
        raise ValueError(
            f"{extra} disjoint attachment blocks of size {r - 1} do not fit on a cycle of length {n_prime}"
        )
    return n_prime


def hamilton_frame(n: int, r: int) -> Hypergraph:
    """(r-1)-tight cycle on [n'] plus one pendant edge per extra vertex."""
    return Hypergraph.from_edges(n, r, hamilton_edges(n, r))


def hamilton_edges(n: int, r: int) -> list[KSet]:
    """Edges of :func:`hamilton_frame` in construction order: cycle first, then attachments."""
    n_prime = hamilton_cycle_length(n, r)
    cycle = [kset(((i + j) % n_prime) + 1 for j in range(r)) for i in range(n_prime)]
    attach = [
        kset([n_prime + j, *range((j - 1) * (r - 1) + 1, j * (r - 1) + 1)])
        for j in range(1, n - n_prime + 1)
    ]
    return cycle + attach


def random_hypergraph(n: int, r: int, p: float, seed=None, rng=None) -> Hypergraph:
    """Binomial random r-graph: each r-set kept independently with probability p.

    Pass either an integer ``seed`` or an explicit ``numpy.random.Generator``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if rng is None:
        rng = np.random.default_rng(seed)
    sets = all_ksets(n, r)
    keep = rng.random(len(sets)) < p
    return Hypergraph(n, r, tuple(e for e, k in zip(sets, keep) if k))


def lambda_removal(F: Hypergraph, s: int, alpha) -> tuple[int, list[int]]:
    """Greedy max-degree peeling count.

    Removes a vertex of maximum degree (smallest label on ties) until the
    maximum degree is at most ``alpha * C(|V| - s, r - s)`` and returns the
    number of removals with the removal order.
    """
    alpha = Fraction(alpha)
    if alpha <= 0 or alpha > 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not F.r >= s >= 0:
        raise ValueError(f"need r >= s >= 0, got r={F.r}, s={s}")
    alive = list(range(1, F.n + 1))
    edges = list(F.edges)
    order: list[int] = []
    while True:
        degrees = {v: 0 for v in alive}
        for e in edges:
            for v in members(e):
                degrees[v] += 1
        top = max(degrees.values(), default=0)
        if top <= alpha * choose(len(alive) - s, F.r - s):
            return len(order), order
        x = min(v for v in alive if degrees[v] == top)
        bit = 1 << (x - 1)
        edges = [e for e in edges if not e & bit]
        alive.remove(x)
        order.append(x)


def read_hypergraph(fh: TextIO) -> Hypergraph:
    """Parse the plain-text format: ``n m r`` then m ascending edge lines."""
    lines = fh.read().split("\n")
    while len(lines) > 1 and not lines[-1].strip():
        lines.pop()
    if not lines[0].strip():
        raise ValueError("empty hypergraph file")
    try:
        n, m, r = (int(x) for x in lines[0].split())
    except ValueError:
        raise ValueError(f"bad header line {lines[0]!r}; expected 'n m r'") from None
    body = [ln.strip() for ln in lines[1:]]
    if r > 0 and len(body) != m or r == 0 and len(body) > m:
        raise ValueError(f"header announces {m} edges, file has {len(body)}")
    if r == 0:
        body = [""] * m  # edges of a 0-graph print as blank lines
    edges = []
    for ln in body:
        verts = [int(x) for x in ln.split()]
        if len(verts) != r or verts != sorted(verts):
            raise ValueError(f"edge line {ln!r} is not {r} ascending labels")
        edges.append(kset(verts))
    if edges != sorted(edges) or len(set(edges)) != len(edges):
        raise ValueError("edge lines must be distinct and in colex order")
    return Hypergraph(n, r, tuple(edges))


def write_hypergraph(G: Hypergraph, fh: TextIO) -> None:
    fh.write(format_hypergraph(G))


def format_hypergraph(G: Hypergraph) -> str:
    out = [f"{G.n} {len(G.edges)} {G.r}"]
    out.extend(" ".join(map(str, members(e))) for e in G.edges)
    return "\n".join(out) + "\n"
