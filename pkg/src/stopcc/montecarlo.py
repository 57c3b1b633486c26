"""Seeded, replicable Monte Carlo estimation of strategy values and tails.

Replication i draws its permutation from an independent substream keyed by
(master seed, i) via numpy's SeedSequence, so results are bit-identical for
a given config regardless of how many worker threads execute the loop.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from . import strategies
from .activation import component_count_trace
from .errors import ParameterError

BLIND_KINDS = strategies.BLIND_KINDS


@dataclass(frozen=True)
class EstimatorConfig:
    replications: int
    seed: int
    ci_level: float = 0.99
    threads: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ParameterError("replications must be >= 1")
        if not 0 < self.ci_level < 1:
            raise ParameterError("ci_level must lie in (0,1)")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    ci_low: float
    ci_high: float
    replications: int
    seed: int
    # exact (1-a)^(1/reps)-style upper bound, reported for zero-hit tails
    zero_hit_upper: float | None = None


def replication_rng(master_seed, index):
    """Independent generator for one replication; depends only on
    (master seed, replication index)."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    )


def replication_permutation(master_seed, index, n):
    return replication_rng(master_seed, index).permutation(n)


def _summarize(scores, cfg, zero_hit_upper=None):
    mean = float(np.mean(scores))
    if len(scores) > 1:
        se = float(np.std(scores, ddof=1) / math.sqrt(len(scores)))
    else:
        se = 0.0
    z = NormalDist().inv_cdf((1 + cfg.ci_level) / 2)
    return Estimate(
        mean=mean,
        std_error=se,
        ci_low=mean - z * se,
        ci_high=mean + z * se,
        replications=cfg.replications,
        seed=cfg.seed,
        zero_hit_upper=zero_hit_upper,
    )


def _run_indexed(cfg, worker):
    """Fill scores[i] = worker(i) for every replication, possibly on a thread
    pool; the output is ordered by replication index, never by completion."""
    reps = cfg.replications
    scores = np.empty(reps, dtype=np.float64)

    def fill(lo, hi):
        for i in range(lo, hi):
            scores[i] = worker(i)

    if cfg.threads <= 1:
        fill(0, reps)
    else:
        chunk = max(1, math.ceil(reps / cfg.threads))
        bounds = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            list(pool.map(lambda b: fill(*b), bounds))
    return scores


def _blind_stop_count(spec, n):
    if spec.kind == "blind_threshold":
        return min(spec.l, n)
    return math.ceil(spec.alpha * n)


def _cc_after_prefix(graph, prefix):
    """Component count once exactly the prefix vertices are active."""
    adj = graph.adj
    parent = list(range(graph.n))
    active = bytearray(graph.n)
    cc = 0
    for v in prefix:
        active[v] = 1
        cc += 1
        for w in adj[v]:
            if active[w]:
                r = w
                while parent[r] != r:
                    parent[r] = parent[parent[r]]
                    r = parent[r]
                rv = v
                while parent[rv] != rv:
                    parent[rv] = parent[parent[rv]]
                    rv = parent[rv]
                if r != rv:
                    parent[r] = rv
                    cc -= 1
    return cc


def _score_one(graph, seq, spec, sigma):
    if spec.kind in BLIND_KINDS:
        l = _blind_stop_count(spec, graph.n)
        return _cc_after_prefix(graph, sigma[:l])
    _, score = strategies.run_strategy(graph, seq, spec, list(sigma))
    return score


def estimate_strategy(graph, seq, spec, cfg):
    """Mean strategy score over uniform random permutations, with a
    normal-approximation confidence interval."""

    def worker(i):
        sigma = replication_permutation(cfg.seed, i, graph.n)
        return _score_one(graph, seq, spec, sigma)

    return _summarize(_run_indexed(cfg, worker), cfg)


def estimate_tail(graph, alpha, threshold, cfg):
    """Empirical P(CC(G[ceil(alpha n)]) > threshold) with CI.

    Forests use the components = vertices - edges identity, vectorized;
    other graphs fall back to incremental union-find.
    """
    if not 0 <= alpha <= 1:
        raise ParameterError("alpha must lie in [0,1]")
    n = graph.n
    t = math.ceil(alpha * n)
    if graph.is_forest() and graph.edge_count > 0:
        edge_arr = np.array(graph.edges(), dtype=np.int64)
        eu, ev = edge_arr[:, 0], edge_arr[:, 1]

        def worker(i):
            prefix = replication_permutation(cfg.seed, i, n)[:t]
            active = np.zeros(n, dtype=bool)
            active[prefix] = True
            cc = t - int(np.count_nonzero(active[eu] & active[ev]))
            return 1.0 if cc > threshold else 0.0

    else:

        def worker(i):
            prefix = replication_permutation(cfg.seed, i, n)[:t]
            cc = _cc_after_prefix(graph, prefix)
            return 1.0 if cc > threshold else 0.0

    hits = _run_indexed(cfg, worker)
    zero_upper = None
    if not hits.any():
        # exact upper bound on p compatible with observing zero hits
        zero_upper = 1.0 - (1.0 - cfg.ci_level) ** (1.0 / cfg.replications)
    return _summarize(hits, cfg, zero_hit_upper=zero_upper)


def compare_strategies(graph, seq, specs, cfg):
    """Common-random-number comparison: every spec scores the same
    permutation in each replication.

    Returns (per-spec Estimates, dict (i, j) -> Estimate of spec_i - spec_j).
    """
    if len(specs) < 2:
        raise ParameterError("need at least two strategies to compare")
    reps = cfg.replications
    scores = np.empty((len(specs), reps), dtype=np.float64)

    def fill(lo, hi):
        for i in range(lo, hi):
            sigma = replication_permutation(cfg.seed, i, graph.n)
            for s, spec in enumerate(specs):
                scores[s, i] = _score_one(graph, seq, spec, sigma)

    if cfg.threads <= 1:
        fill(0, reps)
    else:
        chunk = max(1, math.ceil(reps / cfg.threads))
        bounds = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            list(pool.map(lambda b: fill(*b), bounds))

    estimates = [_summarize(scores[s], cfg) for s in range(len(specs))]
    diffs = {}
    for a in range(len(specs)):
        for b in range(a + 1, len(specs)):
            diffs[(a, b)] = _summarize(scores[a] - scores[b], cfg)
    return estimates, diffs


def blind_value_scan(graph, cfg):
    """Monte Carlo mean component count for every blind threshold l at once:
    one component trace per replication covers all l in [0, n]."""
    n = graph.n
    sums = np.zeros(n + 1, dtype=np.float64)
    for i in range(cfg.replications):
        sigma = replication_permutation(cfg.seed, i, n)
        sums += np.array(component_count_trace(graph, sigma), dtype=np.float64)
    return sums / cfg.replications
