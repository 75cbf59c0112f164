"""Higher inclusion matrices M_s^r(G) and their ranks."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import TextIO

import numpy as np

from . import linalg
from .combinat import binomial, colex_rank
from .hypergraph import Hypergraph
from .kset import members

EXACT = "exact-fraction-free"
MODULAR = "modular-lower-bound"
CERTIFIED = "certified-hybrid"


@dataclass(frozen=True)
class InclusionMatrix:
    """Sparse 0/1 matrix: row i lists the colex indices of the s-subsets of edge i."""

    n: int
    r: int
    s: int
    rows: tuple[tuple[int, ...], ...]
    edges: tuple[int, ...] = field(default=(), compare=False)

    @property
    def ncols(self) -> int:
        return binomial(self.n, self.s)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def dense(self) -> list[list[int]]:
        out = []
        for row in self.rows:
            d = [0] * self.ncols
            for j in row:
                d[j] = 1
            out.append(d)
        return out

    def to_numpy(self) -> np.ndarray:
        A = np.zeros(self.shape, dtype=np.int64)
        for i, row in enumerate(self.rows):
            A[i, list(row)] = 1
        return A

    def zero_columns(self) -> list[int]:
        used = set()
        for row in self.rows:
            used.update(row)
        return [j for j in range(self.ncols) if j not in used]

    def matvec(self, v) -> list[int]:
        return [sum(v[j] for j in row) for row in self.rows]


def build_matrix(G: Hypergraph, s: int) -> InclusionMatrix:
    if not 0 <= s <= G.r:
        raise ValueError(f"need 0 <= s <= r, got s={s}, r={G.r}")
    rows = []
    for e in G.edges:
        verts = members(e)
        rows.append(tuple(sorted(colex_rank(c) for c in combinations(verts, s))))
    return InclusionMatrix(G.n, G.r, s, tuple(rows), G.edges)


@dataclass
class RankCertificate:
    rank: int
    nullity: int
    method: str
    primes_used: list[int]
    verified: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _check_modulus(p: int) -> None:
    if not 2 <= p < linalg.MODULUS_LIMIT or not linalg.is_prime(p):
        raise ValueError(f"modulus must be a prime below 2**62, got {p}")


def rank(M: InclusionMatrix, mode: str = "exact", p: int | None = None, rng=None) -> RankCertificate:
    """Rank of an inclusion matrix.

    ``mode`` is ``"exact"`` (fraction-free elimination over the integers),
    ``"modular"`` (rank over GF(p), a lower bound for the rational rank) or
    ``"certified"`` (random-prime rank confirmed by an exactly verified
    kernel of matching dimension, falling back to exact elimination).
    """
    ncols = M.ncols
    if mode == "modular":
        if p is None:
            raise ValueError("modular mode needs a prime p")
        _check_modulus(p)
        if p == 2:
            rk = linalg.rank_gf2([sum(1 << j for j in row) for row in M.rows])
        else:
            rk = linalg.rank_mod_p(M.dense(), ncols, p) if M.rows else 0
        return RankCertificate(rk, ncols - rk, MODULAR, [p], False)
    if mode == "exact":
        rk = linalg.rank_exact(M.dense(), ncols)
        return RankCertificate(rk, ncols - rk, EXACT, [], True)
    if mode == "certified":
        return _certified_rank(M, rng)
    raise ValueError(f"unknown rank mode {mode!r}")


def _certified_rank(M: InclusionMatrix, rng) -> RankCertificate:
    if rng is None or isinstance(rng, int):
        rng = np.random.default_rng(rng)
    ncols = M.ncols
    if not M.rows:
        return RankCertificate(0, ncols, CERTIFIED, [], True)
    dense = M.dense()
    p = linalg.random_prime(rng)
    rk = linalg.rank_mod_p(dense, ncols, p)
    if rk == min(M.nrows, ncols):
        # a modular rank is a lower bound and this one already hits the ceiling
        return RankCertificate(rk, ncols - rk, CERTIFIED, [p], True)
    lifted = linalg.kernel_multimodular(dense, ncols, rng)
    if lifted is not None:
        lrank, basis = lifted
        if lrank >= rk and len(basis) == ncols - lrank:
            return RankCertificate(lrank, len(basis), CERTIFIED, [p], True)
    rk = linalg.rank_exact(dense, ncols)
    return RankCertificate(rk, ncols - rk, EXACT, [p], True)


def nullspace_vectors(M: InclusionMatrix, method: str = "auto", rng=None) -> list[list[int]]:
    """Canonical integer kernel basis (reduced-echelon normal form).

    ``method="exact"`` runs integer Gauss-Jordan; ``"modular"`` lifts the
    kernel from several primes; ``"auto"`` tries lifting first and falls
    back to exact elimination.  Every returned vector has been multiplied
    against ``M`` exactly.
    """
    ncols = M.ncols
    if not M.rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    dense = M.dense()
    basis = None
    if method in ("auto", "modular"):
        if rng is None or isinstance(rng, int):
            rng = np.random.default_rng(rng)
        lifted = linalg.kernel_multimodular(dense, ncols, rng)
        if lifted is not None:
            basis = lifted[1]
        elif method == "modular":
            raise RuntimeError("modular kernel lifting did not verify")
    if basis is None:
        if method not in ("auto", "exact"):
            raise ValueError(f"unknown nullspace method {method!r}")
        basis = linalg.kernel_exact(dense, ncols)
    for v in basis:
        if not linalg.in_kernel(M.rows, v):
            raise AssertionError("kernel vector failed exact verification")
    return basis


# -- MatrixMarket ----------------------------------------------------------


def write_matrix_market(M: InclusionMatrix, fh: TextIO, config: dict | None = None) -> None:
    fh.write(format_matrix_market(M, config))


def format_matrix_market(M: InclusionMatrix, config: dict | None = None) -> str:
    lines = [
        "%%MatrixMarket matrix coordinate integer general",
        f"% inclusion matrix n={M.n} r={M.r} s={M.s}",
        "% rows: edges in colex order; columns: s-subsets of [n] in colex order; 1-based",
    ]
    if config is not None:
        lines.append("% config: " + json.dumps(config, sort_keys=True))
    lines.append(f"{M.nrows} {M.ncols} {M.nnz()}")
    for i, row in enumerate(M.rows, start=1):
        lines.extend(f"{i} {j + 1} 1" for j in row)
    return "\n".join(lines) + "\n"


def read_matrix_market(fh: TextIO) -> InclusionMatrix:
    """Read a matrix written by :func:`write_matrix_market`."""
    header = fh.readline()
    if not header.startswith("%%MatrixMarket matrix coordinate"):
        raise ValueError("not a MatrixMarket coordinate file")
    n = r = s = None
    line = fh.readline()
    while line.startswith("%"):
        if line.startswith("% inclusion matrix"):
            kv = dict(tok.split("=") for tok in line.split()[3:])
            n, r, s = int(kv["n"]), int(kv["r"]), int(kv["s"])
        line = fh.readline()
    if n is None:
        raise ValueError("missing '% inclusion matrix n= r= s=' header comment")
    nrows, ncols, nnz = (int(x) for x in line.split())
    if ncols != binomial(n, s):
        raise ValueError(f"column count {ncols} does not match C({n},{s})")
    rows: list[list[int]] = [[] for _ in range(nrows)]
    count = 0
    for line in fh:
        if not line.strip():
            continue
        i, j, val = (int(x) for x in line.split())
        if val != 1:
            raise ValueError(f"inclusion matrices are 0/1, found entry {val}")
        rows[i - 1].append(j - 1)
        count += 1
    if count != nnz:
        raise ValueError(f"header announces {nnz} entries, found {count}")
    return InclusionMatrix(n, r, s, tuple(tuple(sorted(row)) for row in rows))
