"""Closed-form expectations, exhaustive brute-force oracles, and the
backward-induction optimal value for the full-information game.

Everything that can be exact is exact (integer/Fraction arithmetic); the
subset DP additionally has a double-precision tier for n up to 24, with the
exact tier (n <= 12) serving as its cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from . import strategies
from .errors import ParameterError, ResourceLimitError

DP_CAP = 24
DP_EXACT_CAP = 12
PERM_CAP = 9
SUBSET_ENUM_CAP = 10**8

# accumulated float error in the DP is below n * 2**-50; this dominates it
DP_TIE_TOL = 1e-9


def blind_expectation_tree(n, l):
    """Expected component count of a uniform l-subset of any n-vertex tree:
    l(n-l+1)/n."""
    if n < 1 or not 0 <= l <= n:
        raise ParameterError(f"need n >= 1 and 0 <= l <= n, got n={n}, l={l}")
    return Fraction(l * (n - l + 1), n)


def blind_expectation_ktree(k, n, l):
    """Exact expected component count of a uniform l-subset of any k-tree.

    Each vertex contributes the probability that it is active while its whole
    attachment set is inactive; initial-clique vertex number i uses the i-1
    earlier initial vertices as its attachment set.
    """
    if k < 1 or n < k or not 0 <= l <= n:
        raise ParameterError(f"bad arguments k={k}, n={n}, l={l}")

    def witness_probability(m):
        # P(the m attachment vertices inactive) * P(v active | that)
        p = Fraction(1)
        for j in range(m):
            p *= Fraction(n - l - j, n - j)
        return p * Fraction(l, n - m)

    total = Fraction(0)
    for i in range(1, k + 1):
        total += witness_probability(i - 1)
    if n > k:
        total += (n - k) * witness_probability(k)
    return total


def _adjacency_masks(graph):
    masks = [0] * graph.n
    for u in range(graph.n):
        for w in graph.adj[u]:
            masks[u] |= 1 << w
    return masks


def cc_of_mask(adj_masks, mask):
    """Component count of the induced subgraph on the bitmask, by flood fill."""
    count = 0
    remaining = mask
    while remaining:
        count += 1
        comp = remaining & -remaining
        while True:
            frontier = 0
            m = comp
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                frontier |= adj_masks[v]
            grown = comp | (frontier & remaining)
            if grown == comp:
                break
            comp = grown
        remaining &= ~comp
    return count


def brute_force_blind(graph, l):
    """Exact mean component count over all l-subsets, by enumeration."""
    n = graph.n
    if not 0 <= l <= n:
        raise ParameterError(f"need 0 <= l <= n, got l={l}")
    if n > 30 or math.comb(n, l) > SUBSET_ENUM_CAP:
        raise ResourceLimitError(
            f"C({n},{l}) subsets exceed the enumeration guard"
        )
    adj_masks = _adjacency_masks(graph)
    total = 0
    for subset in combinations(range(n), l):
        mask = 0
        for v in subset:
            mask |= 1 << v
        total += cc_of_mask(adj_masks, mask)
    return Fraction(total, math.comb(n, l))


@dataclass
class ValueTable:
    """Backward-induction values V(S) for every active-set bitmask.

    V(full) = CC(full); V(S) = max(CC(S), mean over v not in S of V(S+v)).
    stop[S] marks subsets where stopping is optimal (ties stop).
    """

    n: int
    values: object  # np.ndarray (float tier) or list of Fraction (exact tier)
    stop: object  # np.ndarray of bool, or list of bool
    component_counts: object
    exact: bool

    def value(self, mask):
        return self.values[mask]

    def should_stop(self, mask):
        return bool(self.stop[mask])

    @property
    def root_value(self):
        return self.values[0]

    def export(self, stream):
        for mask in range(1 << self.n):
            stream.write(f"{mask} {self.values[mask]} {int(self.stop[mask])}\n")


def _popcounts(size):
    masks = np.arange(size, dtype=np.uint32)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(masks).astype(np.int64)
    pc = np.zeros(size, dtype=np.int64)
    while masks.any():
        pc += masks & 1
        masks >>= 1
    return pc


def _component_counts_float(graph):
    """int array of CC over all 2^n subsets (vectorized for forests)."""
    n = graph.n
    size = 1 << n
    pc = _popcounts(size)
    if graph.is_forest():
        masks = np.arange(size, dtype=np.uint32)
        edges_in = np.zeros(size, dtype=np.int64)
        for u, v in graph.edges():
            edges_in += ((masks >> np.uint32(u)) & (masks >> np.uint32(v)) & 1).astype(
                np.int64
            )
        return pc - edges_in
    adj_masks = _adjacency_masks(graph)
    cc = np.zeros(size, dtype=np.int64)
    for mask in range(1, size):
        cc[mask] = cc_of_mask(adj_masks, mask)
    return cc


def solve_dp(graph, exact=False):
    """Solve the full-information game exactly by backward induction over
    active subsets.  Float tier up to n=24; exact-rational tier up to n=12."""
    n = graph.n
    if n > DP_CAP:
        raise ResourceLimitError(f"subset DP capped at n={DP_CAP}, got n={n}")
    if exact and n > DP_EXACT_CAP:
        raise ResourceLimitError(
            f"exact-rational DP capped at n={DP_EXACT_CAP}, got n={n}"
        )
    return _solve_dp_exact(graph) if exact else _solve_dp_float(graph)


def _solve_dp_float(graph):
    n = graph.n
    size = 1 << n
    cc = _component_counts_float(graph)
    pc = _popcounts(size)
    order = np.argsort(pc, kind="stable")
    offsets = np.searchsorted(pc[order], np.arange(n + 2))
    values = np.zeros(size, dtype=np.float64)
    stop = np.zeros(size, dtype=bool)
    full = size - 1
    values[full] = cc[full]
    stop[full] = True
    ccf = cc.astype(np.float64)
    for t in range(n - 1, -1, -1):
        layer = order[offsets[t]: offsets[t + 1]]
        acc = np.zeros(len(layer), dtype=np.float64)
        for b in range(n):
            bit = np.uint32(1 << b)
            absent = (layer & bit) == 0
            acc[absent] += values[layer[absent] | bit]
        cont = acc / (n - t)
        here = ccf[layer]
        values[layer] = np.maximum(here, cont)
        stop[layer] = here >= cont - DP_TIE_TOL
    return ValueTable(n, values, stop, cc, exact=False)


def _solve_dp_exact(graph):
    n = graph.n
    size = 1 << n
    adj_masks = _adjacency_masks(graph)
    cc = [0] * size
    for mask in range(1, size):
        cc[mask] = cc_of_mask(adj_masks, mask)
    values = [Fraction(0)] * size
    stop = [False] * size
    full = size - 1
    values[full] = Fraction(cc[full])
    stop[full] = True
    by_pc = [[] for _ in range(n + 1)]
    for mask in range(size):
        by_pc[mask.bit_count()].append(mask)
    for t in range(n - 1, -1, -1):
        for mask in by_pc[t]:
            total = Fraction(0)
            for b in range(n):
                if not mask & (1 << b):
                    total += values[mask | (1 << b)]
            cont = total / (n - t)
            here = Fraction(cc[mask])
            if here >= cont:
                values[mask] = here
                stop[mask] = True
            else:
                values[mask] = cont
    return ValueTable(n, values, stop, cc, exact=True)


def brute_force_strategy_value(graph, seq, spec):
    """Exact expected score: mean over all n! permutations of the strategy's
    component count at its stopping time."""
    n = graph.n
    if n > PERM_CAP:
        raise ResourceLimitError(
            f"permutation enumeration capped at n={PERM_CAP}, got n={n}"
        )
    total = 0
    count = 0
    for sigma in permutations(range(n)):
        _, score = strategies.run_strategy(graph, seq, spec, sigma)
        total += score
        count += 1
    return Fraction(total, count)


@dataclass(frozen=True)
class RemarkValues:
    """The two readings of the star-plus-path continuation example.

    displayed: the closed expression as printed (its limit is 1/4, not the
    stated ~3/4 -- we report, not resolve).  independent: exact evaluation of
    the continuation strategy itself from the all-leaves-active position.
    """

    displayed: Fraction
    independent: Fraction


def remark_continuation_value(n):
    """Exact value of continuing (vs stopping) on the star-with-(n+1)-leaves
    plus path-of-(n-1) instance when exactly the star leaves are active.

    The continuation strategy: if the next vertex is not the center, stop;
    otherwise take (n-1)/2 more vertices.
    """
    if n < 3 or n % 2 == 0:
        raise ParameterError(f"need odd n >= 3, got {n}")
    displayed = Fraction(n - 1, n) + Fraction(1, n) * (-(n + 1) + Fraction(n - 1, 4))

    # center branch: activating the center collapses n+1 leaf components to
    # one (gain -n), then l = (n-1)/2 uniform picks from the n-1 path
    # vertices add l - l^2/(n-1) expected components (path components minus
    # expected internal edges, minus the chance the center-adjacent path
    # vertex glues its component onto the big blob)
    l = (n - 1) // 2
    path_gain = Fraction(l * (n - 1 - l), n - 1)
    independent = Fraction(n - 1, n) * 1 + Fraction(1, n) * (-n + path_gain)
    return RemarkValues(displayed, independent)
