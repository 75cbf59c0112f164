"""Dependence sequences (integer kernel vectors) and the structural checks on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinat import binomial, colex_rank, colex_unrank
from .hypergraph import Hypergraph, complement
from .kset import KSet, all_ksets, full, members, subsets_of_size
from .matrix import InclusionMatrix, build_matrix, nullspace_vectors


@dataclass(frozen=True)
class DependenceSequence:
    """Integer weights on the s-subsets of [n] (colex indexed) killing every row."""

    n: int
    s: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != binomial(self.n, self.s):
            raise ValueError("alpha must have one entry per s-subset")

    def __getitem__(self, S) -> int:
        return self.alpha[colex_rank(S)]

    @property
    def trivial(self) -> bool:
        return not any(self.alpha)

    @property
    def support(self) -> Hypergraph:
        return associated_graph(self)

    def annihilates(self, M: InclusionMatrix) -> bool:
        return all(sum(self.alpha[j] for j in row) == 0 for row in M.rows)

    def to_json(self) -> list[str]:
        return [str(a) for a in self.alpha]


def nullspace(M: InclusionMatrix, method: str = "auto", rng=None) -> list[DependenceSequence]:
    return [DependenceSequence(M.n, M.s, tuple(v)) for v in nullspace_vectors(M, method, rng)]


def dependence_sequences(G: Hypergraph, s: int, method: str = "auto", rng=None) -> list[DependenceSequence]:
    return nullspace(build_matrix(G, s), method, rng)


def associated_graph(alpha: DependenceSequence) -> Hypergraph:
    """The s-graph of s-sets carrying a nonzero weight."""
    edges = tuple(colex_unrank(i, alpha.s, alpha.n) for i, a in enumerate(alpha.alpha) if a)
    return Hypergraph(alpha.n, alpha.s, edges)


def restrict(alpha: DependenceSequence, vertices: KSet) -> DependenceSequence:
    """Weights of the s-subsets of ``vertices``, re-indexed on the compacted vertex set."""
    verts = members(vertices)
    weights = []
    for idx_set in all_ksets(len(verts), alpha.s):
        S = sum(1 << (verts[i - 1] - 1) for i in members(idx_set))
        weights.append(alpha.alpha[colex_rank(S)])
    return DependenceSequence(len(verts), alpha.s, tuple(weights))


def compact_induced(G: Hypergraph, vertices: KSet) -> Hypergraph:
    """G[vertices] relabeled onto [1..|vertices|] preserving order."""
    verts = members(vertices)
    pos = {v: i for i, v in enumerate(verts)}
    edges = []
    for e in G.edges:
        if e & ~vertices == 0:
            edges.append(sum(1 << pos[v] for v in members(e)))
    return Hypergraph(len(verts), G.r, tuple(sorted(edges)))


def link_sequence(alpha: DependenceSequence, x: int) -> DependenceSequence:
    """beta_{S'} = alpha_{{x} u S'} over the (s-1)-subsets of [n] - x (compacted)."""
    if alpha.s < 1:
        raise ValueError("link sequence needs s >= 1")
    bit = 1 << (x - 1)
    weights = []
    for T in all_ksets(alpha.n - 1, alpha.s - 1):
        low = T & (bit - 1)
        S = low | ((T >> (x - 1)) << x) | bit
        weights.append(alpha.alpha[colex_rank(S)])
    return DependenceSequence(alpha.n - 1, alpha.s - 1, tuple(weights))


def _check_uniformity(G: Hypergraph, Gp: Hypergraph) -> None:
    if Gp.n != G.n:
        raise ValueError(f"vertex sets differ: {G.n} vs {Gp.n}")
    if Gp.r > G.r:
        raise ValueError(f"associated graph uniformity {Gp.r} exceeds r={G.r}")


def check_one_clique(G: Hypergraph, Gp: Hypergraph) -> list[KSet]:
    """Edges of G that induce exactly one edge of Gp (there should be none)."""
    _check_uniformity(G, Gp)
    support = Gp.edge_set
    s = Gp.r
    bad = []
    for R in G.edges:
        inside = 0
        for S in subsets_of_size(R, s):
            if S in support:
                inside += 1
                if inside > 1:
                    break
        if inside == 1:
            bad.append(R)
    return bad


def check_semistar(G: Hypergraph, Gp: Hypergraph, F: Hypergraph | None = None) -> list[tuple[int, KSet]]:
    """(r+s-2)-semistars of Gp with no r-set through the center in F.

    Returns ``(center, leaves)`` pairs; an empty list means every semistar
    is hit by F as it should be.
    """
    _check_uniformity(G, Gp)
    if F is None:
        F = complement(G)
    r, s, n = G.r, Gp.r, G.n
    k = r + s - 2
    support = Gp.edge_set
    removed = F.edge_set
    centers = sorted({v for S in Gp.edges for v in members(S)})
    bad = []
    for x in centers:
        xbit = 1 << (x - 1)
        others = full(n) & ~xbit
        for L in subsets_of_size(others, k):
            if any(S in support for S in subsets_of_size(L, s)):
                continue
            if not any((xbit | T) in support for T in subsets_of_size(L, s - 1)):
                continue
            if not any((xbit | T) in removed for T in subsets_of_size(L, r - 1)):
                bad.append((x, L))
    return bad


def independent_in(Gp: Hypergraph, A: KSet) -> bool:
    return not any(S & ~A == 0 for S in Gp.edges)


def stable_set_witness(
    G: Hypergraph,
    F: Hypergraph,
    alpha: DependenceSequence,
    s: int | None = None,
    check_hypothesis: bool = True,
) -> tuple[KSet, Fraction]:
    """Large independent set of the associated s-graph, built greedily.

    Picks the edge R of G meeting the fewest removed r-sets in at least r-s
    vertices (colex-first on ties), deletes one vertex of each such removed
    set outside R (its smallest label) and returns the remaining vertex set
    together with the guaranteed lower bound on its size.
    """
    n, r = G.n, G.r
    s = alpha.s if s is None else s
    if alpha.trivial:
        raise ValueError("the dependence sequence is trivial")
    if F.n != n or F.r != r or F.edge_set & G.edge_set or len(F) + len(G) != binomial(n, r):
        raise ValueError("F must be the complement of G")
    total = binomial(n, r)
    load = len(F) * binomial(r, s) * binomial(n - r + s, s)
    if check_hypothesis and (n - r - s) * (total - len(F)) < load:
        raise ValueError(
            f"hypothesis fails: (n-r-s)(C(n,r)-|F|) = {(n - r - s) * (total - len(F))} < {load}"
        )
    if not G.edges:
        raise ValueError("G has no edges")
    bound = n - Fraction(load, total - len(F))

    def touching(R: KSet) -> list[KSet]:
        return [e for e in F.edges if (e & R).bit_count() >= r - s]

    R = min(G.edges, key=lambda e: len(touching(e)))
    A = full(n)
    for e in touching(R):
        outside = e & ~R
        A &= ~(outside & -outside)
    return A, bound
