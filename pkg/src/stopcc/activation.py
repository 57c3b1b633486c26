"""Incremental state of one play: activate vertices, track component count,
component-neighborhood sum, and (optionally) witnessing-vertex count.

Component boundaries (the inactive neighbors of each component) are kept as
per-root sets merged small-to-large, so the neighborhood sum stays exact in
amortized O(log n) set operations per vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError, ValidationError

# beyond this size we stop maintaining the active-set bitmask (only the
# subset DP consumes it, and it is capped far below)
_MASK_CAP = 24


@dataclass(frozen=True)
class ActivationDelta:
    delta_cc: int
    cc: int
    nbr_sum: int
    wv: int | None


class ActivationState:
    """Mutable state of one run on a shared immutable graph.

    When a construction sequence is supplied, the witnessing-vertex count
    (active v with its whole attachment set inactive) is maintained as well;
    initial-clique vertices use the earlier initial vertices as attachment.
    """

    def __init__(self, graph, seq=None):
        n = graph.n
        self.graph = graph
        self.active = bytearray(n)
        self.t = 0
        self.cc = 0
        self.nbr_sum = 0
        self._parent = list(range(n))
        self._size = [1] * n
        self._boundary = {}  # component root -> set of inactive neighbor ids
        self.active_mask = 0 if n <= _MASK_CAP else None
        if seq is not None:
            if seq.n != n:
                raise ValidationError("sequence and graph disagree on vertex count")
            self.wv = 0
            self._m_active = [0] * n  # active members of M_v, per vertex
            deps = [[] for _ in range(n)]
            m_size = [0] * n
            for v, m in seq.order:
                m_size[v] = len(m)
                for w in m:
                    deps[w].append(v)
            self._deps = deps
            self._m_size = m_size
        else:
            self.wv = None
            self._deps = None

    @property
    def n(self):
        return self.graph.n

    def _find(self, x):
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def component_root(self, v):
        if not self.active[v]:
            raise UsageError(f"vertex {v} is not active")
        return self._find(v)

    def adjacent_component_count(self, w):
        """Number of distinct active components adjacent to inactive w."""
        if self.active[w]:
            raise UsageError(f"vertex {w} is active")
        return len({self._find(u) for u in self.graph.adj[w] if self.active[u]})

    def activate(self, v):
        if not 0 <= v < self.n:
            raise UsageError(f"vertex id {v} out of range")
        if self.active[v]:
            raise UsageError(f"vertex {v} is already active")
        active = self.active
        find = self._find
        roots = {find(u) for u in self.graph.adj[v] if active[u]}

        active[v] = 1
        self.t += 1
        if self.active_mask is not None:
            self.active_mask |= 1 << v
        delta_cc = 1 - len(roots)
        self.cc += delta_cc

        # v stops counting as an inactive neighbor of the components it touches
        for r in roots:
            self._boundary[r].discard(v)
        self.nbr_sum -= len(roots)

        # merge boundary sets small-to-large into the new component's set
        merged = set()
        for r in roots:
            s = self._boundary.pop(r)
            if len(s) > len(merged):
                merged, s = s, merged
            for x in s:
                if x in merged:
                    self.nbr_sum -= 1
                else:
                    merged.add(x)
        for w in self.graph.adj[v]:
            if not active[w] and w not in merged:
                merged.add(w)
                self.nbr_sum += 1

        parent, size = self._parent, self._size
        parent[v] = v
        size[v] = 1
        root = v
        for r in roots:
            if size[r] >= size[root]:
                parent[root] = r
                size[r] += size[root]
                root = r
            else:
                parent[r] = root
                size[root] += size[r]
        self._boundary[root] = merged

        if self._deps is not None:
            if self._m_active[v] == 0:
                self.wv += 1
            m_active = self._m_active
            for w in self._deps[v]:
                m_active[w] += 1
                if active[w] and m_active[w] == 1:
                    self.wv -= 1

        return ActivationDelta(delta_cc, self.cc, self.nbr_sum, self.wv)

    def expected_gain(self):
        """Exact expected change in component count if one more uniformly
        random inactive vertex is activated: (n - t - nbr_sum) / (n - t)."""
        remaining = self.n - self.t
        if remaining == 0:
            raise UsageError("expected_gain is undefined with all vertices active")
        return Fraction(remaining - self.nbr_sum, remaining)

    # from-scratch oracles for invariant testing

    def recount_cc(self):
        seen = bytearray(self.n)
        count = 0
        for s in range(self.n):
            if self.active[s] and not seen[s]:
                count += 1
                seen[s] = 1
                stack = [s]
                while stack:
                    u = stack.pop()
                    for w in self.graph.adj[u]:
                        if self.active[w] and not seen[w]:
                            seen[w] = 1
                            stack.append(w)
        return count

    def recount_nbr_sum(self):
        return sum(
            self.adjacent_component_count(w)
            for w in range(self.n)
            if not self.active[w]
        )

    def recount_wv(self):
        if self._deps is None:
            raise UsageError("no construction sequence supplied")
        return sum(
            1
            for v in range(self.n)
            if self.active[v] and self._m_active[v] == 0
        )


@dataclass(frozen=True)
class TraceStep:
    t: int
    cc: int
    nbr_sum: int
    wv: int | None


def check_permutation(sigma, n):
    if sorted(sigma) != list(range(n)):
        raise ValidationError(f"not a permutation of 0..{n - 1}")


def run_permutation(graph, seq, sigma):
    """Activate every vertex in the order sigma; return the length-(n+1)
    trace of (t, cc, nbr_sum, wv) including the empty prefix."""
    check_permutation(sigma, graph.n)
    state = ActivationState(graph, seq)
    trace = [TraceStep(0, 0, 0, 0 if seq is not None else None)]
    for t, v in enumerate(sigma, start=1):
        state.activate(v)
        trace.append(TraceStep(t, state.cc, state.nbr_sum, state.wv))
    return trace


def component_count_trace(graph, sigma):
    """Fast path: component count after each activation, nothing else.

    Returns a list of length n+1 with entry t = CC after t activations.
    Used by Monte Carlo estimators where the full state is not needed.
    """
    n = graph.n
    adj = graph.adj
    parent = list(range(n))
    active = bytearray(n)
    cc = 0
    trace = [0] * (n + 1)
    for t, v in enumerate(sigma, start=1):
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
        trace[t] = cc
    return trace
