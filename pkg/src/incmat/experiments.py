"""Verification drivers: brute-force oracles, censuses and Monte Carlo sweeps.

Every driver returns an :class:`ExperimentReport`.  Randomised drivers derive
one generator per trial from ``(seed, trial)`` so results do not depend on
how trials are scheduled across worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations, permutations
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .combinat import N, binomial, kk_lower_shadow_bound, kk_upper_shadow_min
from .dependence import (
    check_one_clique,
    check_semistar,
    dependence_sequences,
)
from .hypergraph import (
    Hypergraph,
    complement,
    complete,
    construct_G,
    construct_R,
    hamilton_cycle_length,
    hamilton_edges,
    max_s_degree,
)
from .kset import all_ksets, members
from .matrix import InclusionMatrix, build_matrix, rank

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class ExperimentReport:
    name: str
    params: dict[str, Any]
    verdict: str = PASS
    witnesses: list[Any] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def fail(self, witness) -> None:
        self.verdict = FAIL
        self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


class _Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = round((time.perf_counter() - self.t0) * 1000, 3)


def edge_lists(edges: Iterable[int]) -> list[list[int]]:
    return [list(members(e)) for e in edges]


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *keys]))


def _exact_rank(G: Hypergraph, s: int) -> int:
    return rank(build_matrix(G, s), "exact").rank


def _parallel_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# -- exact verifications ------------------------------------------------------


def verify_gottlieb(n_max: int) -> ExperimentReport:
    """Full rank of M_s^r(K_n^r) for every 0 <= s <= r <= n <= n_max."""
    if n_max > 12:
        raise ValueError(f"n_max must be at most 12, got {n_max}")
    rep = ExperimentReport("gottlieb", {"n_max": n_max})
    checked = 0
    with _Clock() as clock:
        for n in range(n_max + 1):
            for r in range(n + 1):
                K = complete(n, r)
                for s in range(r + 1):
                    got = _exact_rank(K, s)
                    want = min(binomial(n, r), binomial(n, s))
                    checked += 1
                    if got != want:
                        rep.fail({"n": n, "r": r, "s": s, "rank": got, "expected": want})
    rep.stats = {"instances": checked}
    rep.elapsed_ms = clock.ms
    return rep


def verify_construction(n: int, t: int, r: int, s: int) -> ExperimentReport:
    """rank M_s^r(G(n,t,r,s)) == C(n,s) - t exactly."""
    rep = ExperimentReport("construction", {"n": n, "t": t, "r": r, "s": s})
    with _Clock() as clock:
        G = construct_G(n, t, r, s)
        M = build_matrix(G, s)
        rk = rank(M, "exact").rank
        want = binomial(n, s) - t
        rep.stats = {
            "edges": len(G),
            "expected_edges": binomial(n, r) - N(n, t, r, s),
            "rank": rk,
            "expected_rank": want,
            "zero_columns": M.zero_columns(),
        }
        if rk != want:
            rep.fail({"graph": edge_lists(G.edges), "rank": rk})
    rep.elapsed_ms = clock.ms
    return rep


def verify_R(n: int, r: int, s: int) -> ExperimentReport:
    """Both conclusions of the tightness construction plus its recursive rank bound."""
    rep = ExperimentReport("R", {"n": n, "r": r, "s": s})
    with _Clock() as clock:
        R = construct_R(n, r, s)
        rk = _exact_rank(R, s)
        deficit_target = n - r - 1
        gap = binomial(n, r) - len(R)
        nbound = N(n, n - r - 1, r, s)
        rep.stats = {
            "edges": len(R),
            "rank": rk,
            "rank_bound": binomial(n, s) - deficit_target,
            "missing_edges": gap,
            "N": nbound,
        }
        if rk > binomial(n, s) - deficit_target:
            rep.fail({"check": "rank", "rank": rk, "graph": edge_lists(R.edges)})
        if not gap < nbound:
            rep.fail({"check": "size", "missing": gap, "N": nbound})
        if s > 1:
            inner = _exact_rank(construct_R(n - 1, r - 1, s - 1), s - 1)
            rec = binomial(n - 1, s) + inner
            rep.stats["recursive_bound"] = rec
            if rk > rec:
                rep.fail({"check": "recursion", "rank": rk, "bound": rec})
    rep.elapsed_ms = clock.ms
    return rep


def verify_hamilton(n: int, r: int) -> ExperimentReport:
    """Full column rank of the Hamilton frame, one rank step per attachment."""
    rep = ExperimentReport("hamilton", {"n": n, "r": r})
    with _Clock() as clock:
        n_prime = hamilton_cycle_length(n, r)
        edges = hamilton_edges(n, r)
        ranks = []
        for upto in range(n_prime, n + 1):
            G = Hypergraph.from_edges(n, r, edges[:upto])
            ranks.append(_exact_rank(G, 1))
        rep.stats = {"cycle_length": n_prime, "edges": len(edges), "ranks": ranks}
        if ranks[-1] != n:
            rep.fail({"check": "final rank", "rank": ranks[-1]})
        if ranks[0] != n_prime:
            rep.fail({"check": "cycle rank", "rank": ranks[0], "expected": n_prime})
        steps = [b - a for a, b in zip(ranks, ranks[1:])]
        if any(d != 1 for d in steps):
            rep.fail({"check": "increments", "steps": steps})
    rep.elapsed_ms = clock.ms
    return rep


# -- brute-force oracles --------------------------------------------------------


def _deficient(rows_gf2, dense_rows, ncols, target, p) -> bool:
    """rank <= target over Q, with cheap modular rejections first."""
    if linalg.rank_gf2(rows_gf2) > target:
        return False
    if dense_rows and linalg.rank_mod_p(dense_rows, ncols, p) > target:
        return False
    return linalg.rank_exact(dense_rows, ncols) <= target


def rex_oracle(n: int, t: int, r: int, s: int, f_cap: int, budget: int = 10**8) -> ExperimentReport:
    """rex(n,t,r,s) by searching removal families F in increasing size."""
    params = {"n": n, "t": t, "r": r, "s": s, "f_cap": f_cap}
    rep = ExperimentReport("rex", params)
    K = complete(n, r)
    M = build_matrix(K, s)
    ncols = M.ncols
    target = ncols - t
    gf2 = [sum(1 << j for j in row) for row in M.rows]
    dense = M.dense()
    total = len(K)
    p = 2_147_483_647
    calls = 0
    found: list[tuple[int, ...]] = []
    searched = -1
    with _Clock() as clock:
        for f in range(min(f_cap, total) + 1):
            if calls + binomial(total, f) > budget:
                break
            for removed in combinations(range(total), f):
                gone = set(removed)
                keep = [i for i in range(total) if i not in gone]
                calls += 1
                if _deficient([gf2[i] for i in keep], [dense[i] for i in keep], ncols, target, p):
                    found.append(removed)
            searched = f
            if found:
                break
    rep.elapsed_ms = clock.ms
    rep.stats = {"rank_calls": calls, "largest_f_searched": searched, "target_rank": target}
    if t <= n:
        rep.stats["eq3_value"] = binomial(n, r) - N(n, t, r, s)
    if 1 <= t <= binomial(n, s) and s + (r - s) <= n:
        rep.stats["kk_lower_bound"] = binomial(n, r) - kk_upper_shadow_min(n, t, s, r - s)
    if not found:
        rep.verdict = INCONCLUSIVE
        rep.stats["value"] = None
        return rep
    f_min = len(found[0])
    value = total - f_min
    rep.stats["value"] = value
    rep.stats["f_min"] = f_min
    rep.stats["witness_count"] = len(found)
    if "eq3_value" in rep.stats:
        rep.stats["matches_eq3"] = value == rep.stats["eq3_value"]
    for removed in found:
        gone = {K.edges[i] for i in removed}
        rep.witnesses.append(
            {
                "removed": edge_lists(K.edges[i] for i in removed),
                "graph": edge_lists(e for e in K.edges if e not in gone),
            }
        )
    return rep


def kk_oracle(n: int, k: int, p: int) -> ExperimentReport:
    """Exhaustive minimum lower p-shadow for every family size, against the cascade bound."""
    if n > 6 or k > 4:
        raise ValueError(f"exhaustive search is limited to n <= 6, k <= 4 (got n={n}, k={k})")
    if not 1 <= p <= k <= n:
        raise ValueError(f"need 1 <= p <= k <= n, got n={n}, k={k}, p={p}")
    rep = ExperimentReport("kk", {"n": n, "k": k, "p": p})
    with _Clock() as clock:
        sets = all_ksets(n, k)
        low_index = {S: i for i, S in enumerate(all_ksets(n, k - p))}
        m_total = len(sets)
        shadow_bits = np.zeros(1 << m_total, dtype=np.int64)
        vertex_bits = np.zeros(1 << m_total, dtype=np.int64)
        for i, S in enumerate(sets):
            sh = 0
            for T in combinations([1 << (v - 1) for v in members(S)], k - p):
                sh |= 1 << low_index[sum(T)]
            lo, hi = 1 << i, 1 << (i + 1)
            shadow_bits[lo:hi] = shadow_bits[:lo] | sh
            vertex_bits[lo:hi] = vertex_bits[:lo] | S
        shadow_size = np.bitwise_count(shadow_bits).astype(np.int64)
        fam_size = np.bitwise_count(np.arange(1 << m_total, dtype=np.int64)).astype(np.int64)
        minima = np.full(m_total + 1, np.iinfo(np.int64).max)
        np.minimum.at(minima, fam_size, shadow_size)
        rows = []
        for m in range(1, m_total + 1):
            bound = kk_lower_shadow_bound(m, k, p)
            colex = int(shadow_size[(1 << m) - 1])
            row = {"m": m, "min_shadow": int(minima[m]), "bound": bound, "colex_shadow": colex}
            if int(minima[m]) != bound or colex != bound:
                rep.fail(row)
            top = _exact_binomial_top(m, k)
            if top is not None:
                hit = (fam_size == m) & (shadow_size == bound)
                spans = np.bitwise_count(vertex_bits[hit])
                row["equality_only_complete"] = bool(np.all(spans == top))
                if not row["equality_only_complete"]:
                    rep.fail({"m": m, "check": "equality case"})
            rows.append(row)
    rep.stats = {"rows": rows, "families": 1 << m_total}
    rep.elapsed_ms = clock.ms
    return rep


def _exact_binomial_top(m: int, k: int) -> int | None:
    x = k
    while binomial(x, k) < m:
        x += 1
    return x if binomial(x, k) == m else None


# -- graph census ----------------------------------------------------------------


def bipartite_components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    colour: dict[int, int] = {}
    count = 0
    for start in adj:
        if start in colour:
            continue
        colour[start] = 0
        stack = [start]
        ok = True
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in colour:
                    colour[w] = colour[u] ^ 1
                    stack.append(w)
                elif colour[w] == colour[u]:
                    ok = False
        count += ok
    return count


def canonical_graph(edges: Sequence[tuple[int, int]]) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Isomorphism-invariant key of a small graph without isolated vertices."""
    verts = sorted({v for e in edges for v in e})
    best = None
    for perm in permutations(range(len(verts))):
        relabel = dict(zip(verts, perm))
        key = tuple(sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return len(verts), best or ()


def _named_graphs() -> dict:
    named = {"empty": []}
    for k in range(2, 8):
        named[f"K_{k}"] = list(combinations(range(1, k + 1), 2))
    named["K_{2,3}"] = [(a, b) for a in (1, 2) for b in (3, 4, 5)]
    named["C_4"] = [(1, 2), (2, 3), (3, 4), (1, 4)]
    named["P_2"] = [(1, 2), (2, 3)]
    named["2K_2"] = [(1, 2), (3, 4)]
    return {canonical_graph(e): name for name, e in named.items()}


def graph_census(n: int) -> ExperimentReport:
    """Every labeled graph on [n]: rank M_1^2 == n - b(G), plus the rex(n,t,2,1) table."""
    if n > 7:
        raise ValueError(f"census enumerates 2^C(n,2) graphs; n must be <= 7, got {n}")
    rep = ExperimentReport("census", {"n": n})
    pairs = list(combinations(range(1, n + 1), 2))
    rows_for = []
    for u, v in pairs:
        row = [0] * n
        row[u - 1] = row[v - 1] = 1
        rows_for.append(row)
    best = [-1] * (n + 1)
    extremal: list[list[int]] = [[] for _ in range(n + 1)]
    violations = 0
    with _Clock() as clock:
        for mask in range(1 << len(pairs)):
            chosen = [i for i in range(len(pairs)) if mask >> i & 1]
            rk = linalg.rank_exact([rows_for[i] for i in chosen], n)
            b = bipartite_components(n, [pairs[i] for i in chosen])
            if rk != n - b:
                violations += 1
                if violations <= 10:
                    rep.fail({"graph": [list(pairs[i]) for i in chosen], "rank": rk, "b": b})
            m = len(chosen)
            for t in range(n - rk, -1, -1):
                # rank <= n - t for all t <= n - rk
                if m > best[t]:
                    best[t], extremal[t] = m, [mask]
                elif m == best[t]:
                    extremal[t].append(mask)
    names = _named_graphs()
    cores = {}
    for t in range(n + 1):
        kinds = set()
        for mask in extremal[t]:
            es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            key = canonical_graph(es)
            kinds.add(names.get(key, f"other:{list(key[1])}"))
        cores[str(t)] = sorted(kinds)
    rep.stats = {
        "graphs": 1 << len(pairs),
        "rank_formula_violations": violations,
        "rex_table": {str(t): best[t] for t in range(n + 1)},
        "rex_t1_to_n": best[1:],
        "extremal_cores": cores,
        "extremal_counts": {str(t): len(extremal[t]) for t in range(n + 1)},
    }
    rep.elapsed_ms = clock.ms
    return rep


# -- dependence-sequence suite ----------------------------------------------------


def _random_deficient_instance(rng: np.random.Generator, n_max: int = 9):
    while True:
        r = int(rng.integers(2, 5))
        s = int(rng.integers(1, r))
        n = int(rng.integers(max(r + 2, 5), n_max + 1))
        t = int(rng.integers(1, min(3, n - s + 1) + 1))
        G = construct_G(n, t, r, s)
        extra = int(rng.integers(0, 3))
        if extra and len(G):
            drop = rng.choice(len(G), size=min(extra, len(G)), replace=False)
            G = G.without_edges(G.edges[int(i)] for i in drop)
        return G, {"n": n, "t": t, "r": r, "s": s, "extra_deletions": extra}


def _dependence_case(args) -> dict:
    seed, i, n_max = args
    rng = trial_rng(seed, i)
    G, params = _random_deficient_instance(rng, n_max)
    s = params["s"]
    M = build_matrix(G, s)
    seqs = dependence_sequences(G, s, rng=rng)
    F = complement(G)
    out = {"params": params, "edges": len(G), "kernel_dim": len(seqs), "problems": []}
    for alpha in seqs:
        Gp = alpha.support
        if not alpha.annihilates(M):
            out["problems"].append({"check": "M.alpha", "alpha": alpha.to_json()})
        bad = check_one_clique(G, Gp)
        if bad:
            out["problems"].append({"check": "one-clique", "edges": edge_lists(bad)})
        semis = check_semistar(G, Gp, F)
        if semis:
            out["problems"].append({"check": "semistar", "count": len(semis)})
    return out


def verify_dependence(instances: int = 100, seed: int = 0, n_max: int = 9, workers: int = 1) -> ExperimentReport:
    """Kernel vectors of random deficient instances against the clique/semistar checks."""
    rep = ExperimentReport("dependence", {"instances": instances, "n_max": n_max}, seed=seed)
    with _Clock() as clock:
        results = _parallel_map(_dependence_case, [(seed, i, n_max) for i in range(instances)], workers)
    vectors = 0
    for res in results:
        vectors += res["kernel_dim"]
        if res["kernel_dim"] == 0:
            rep.fail({"params": res["params"], "check": "instance is not rank deficient"})
        for prob in res["problems"]:
            rep.fail({"params": res["params"], **prob})
    rep.stats = {"instances": instances, "kernel_vectors": vectors}
    rep.elapsed_ms = clock.ms
    return rep


# -- Monte Carlo --------------------------------------------------------------------


def zero_column_threshold(n: int, r: int, s: int) -> float:
    """s (r-s)! ln n / n^(r-s), the point where zero columns disappear."""
    return s * math.factorial(r - s) * math.log(n) / n ** (r - s)


def _sweep_trial(args) -> list[tuple[bool, bool]]:
    n, r, s, p_grid, seed, i = args
    rng = trial_rng(seed, i)
    u = rng.random(binomial(n, r))
    full_rows = build_matrix(complete(n, r), s).rows
    ncols = binomial(n, s)
    out = []
    for j, p in enumerate(p_grid):
        rows = tuple(row for row, x in zip(full_rows, u) if x < p)
        M = InclusionMatrix(n, r, s, rows)
        used = set()
        for row in rows:
            used.update(row)
        no_zero = len(used) == ncols
        full = no_zero and rank(M, "certified", rng=trial_rng(seed, i, j)).rank == ncols
        out.append((full, no_zero))
    return out


def _crossing(ps: Sequence[float], freqs: Sequence[float], level: float = 0.5) -> float | None:
    for (p0, f0), (p1, f1) in zip(zip(ps, freqs), zip(ps[1:], freqs[1:])):
        if f0 < level <= f1:
            return p0 + (level - f0) * (p1 - p0) / (f1 - f0)
    return None


def threshold_sweep(
    n: int,
    r: int,
    s: int,
    p_grid: Sequence[float],
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> ExperimentReport:
    """Full-rank and no-zero-column frequencies of M_s^r(G(n,p)) along a p grid.

    Trial i draws one uniform label per r-set and includes it whenever the
    label is below p, so the graphs across the grid are coupled.
    """
    if not p_grid:
        raise ValueError("empty probability grid")
    if trials < 1:
        raise ValueError("need at least one trial")
    grid = sorted(float(p) for p in p_grid)
    params = {"n": n, "r": r, "s": s, "p_grid": grid, "trials": trials}
    rep = ExperimentReport("sweep", params, seed=seed)
    with _Clock() as clock:
        results = _parallel_map(_sweep_trial, [(n, r, s, grid, seed, i) for i in range(trials)], workers)
    full = [sum(res[j][0] for res in results) / trials for j in range(len(grid))]
    nz = [sum(res[j][1] for res in results) / trials for j in range(len(grid))]
    sigma = [2 * math.sqrt(max(f * (1 - f), 1e-12) / trials) for f in full]
    monotone = all(b >= a - max(sa, sb) for a, b, sa, sb in zip(full, full[1:], sigma, sigma[1:]))
    rep.stats = {
        "curve": [
            {"p": p, "full_rank_freq": f, "no_zero_col_freq": z, "trials": trials}
            for p, f, z in zip(grid, full, nz)
        ],
        "full_rank_crossing": _crossing(grid, full),
        "no_zero_col_crossing": _crossing(grid, nz),
        "zero_column_threshold": zero_column_threshold(n, r, s),
        "monotone_within_2sigma": monotone,
    }
    rep.elapsed_ms = clock.ms
    return rep


def sweep_csv(rep: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "full_rank_freq", "no_zero_col_freq", "trials"])
    for row in rep.stats["curve"]:
        writer.writerow([row["p"], row["full_rank_freq"], row["no_zero_col_freq"], row["trials"]])
    return buf.getvalue()


REJECTION_LIMIT = 10**4


def _resilience_case(args):
    n, r, s, size, cap, seed, i = args
    rng = trial_rng(seed, i)
    sets = all_ksets(n, r)
    for attempt in range(REJECTION_LIMIT):
        pick = rng.choice(len(sets), size=size, replace=False)
        F = Hypergraph.from_edges(n, r, (sets[int(j)] for j in pick))
        if cap is None or max_s_degree(F, s) <= cap:
            break
    else:
        return None
    G = complement(F)
    rk = rank(build_matrix(G, s), "certified", rng=rng).rank
    return {"full": rk == binomial(n, s), "rank": rk, "removed": edge_lists(F.edges), "attempts": attempt + 1}


def resilience_trial(
    n: int,
    r: int,
    s: int,
    family_size: int,
    degree_cap: int | None,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> ExperimentReport:
    """Fraction of sampled removal families that leave M_s^r(K_n^r - F) at full rank."""
    if not 0 <= family_size <= binomial(n, r):
        raise ValueError(f"family size must be in 0..C({n},{r})")
    params = {"n": n, "r": r, "s": s, "family_size": family_size, "degree_cap": degree_cap, "trials": trials}
    rep = ExperimentReport("resilience", params, seed=seed)
    if degree_cap is not None and family_size * binomial(r, s) > degree_cap * binomial(n, s):
        # degree sum over s-sets exceeds what the cap allows: no family exists
        rep.verdict = INCONCLUSIVE
        rep.stats = {"reason": f"no family of size {family_size} has max {s}-degree <= {degree_cap}"}
        return rep
    with _Clock() as clock:
        results = _parallel_map(
            _resilience_case, [(n, r, s, family_size, degree_cap, seed, i) for i in range(trials)], workers
        )
    rep.elapsed_ms = clock.ms
    if any(res is None for res in results):
        rep.verdict = INCONCLUSIVE
        rep.stats = {"reason": f"rejection sampling exceeded {REJECTION_LIMIT} draws"}
        return rep
    fullrank = sum(res["full"] for res in results)
    asserted = (
        degree_cap is None
        and n >= 2 * r + s
        and family_size * binomial(r, s) < binomial(n, r - s)
    )
    rep.stats = {
        "full_rank_fraction": fullrank / trials,
        "full_rank_count": fullrank,
        "asserted": asserted,
        "mean_attempts": sum(res["attempts"] for res in results) / trials,
        "rank_histogram": _histogram(res["rank"] for res in results),
    }
    if asserted:
        for res in results:
            if not res["full"]:
                rep.fail({"removed": res["removed"], "rank": res["rank"]})
    return rep


def _histogram(values: Iterable[int]) -> dict[str, int]:
    out: dict[str, int] = {}
    for v in values:
        out[str(v)] = out.get(str(v), 0) + 1
    return dict(sorted(out.items(), key=lambda kv: int(kv[0])))
