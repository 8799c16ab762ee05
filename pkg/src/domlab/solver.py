"""Exact, brute-force, greedy and alteration dominating sets.

The exact solver treats domination as set cover: vertex ``w`` covers its
closed neighbourhood ``N[w]``. Because adjacency is symmetric, ``N[u]`` is
also the set of vertices able to cover ``u``, so a single table of
closed-neighbourhood bitmasks serves both directions.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .graph import Graph, VertexSet

EXACT = "exact"
UPPER_BOUND_ONLY = "upper_bound_only"
TIMEOUT = "timeout"

BRUTE_FORCE_LIMIT = 25
# the clock is read once per this many search nodes
_CLOCK_STRIDE = 256


@dataclass(frozen=True)
class SolveResult:
    status: str
    size: int
    witness: VertexSet
    nodes_explored: int
    elapsed: float
    # decision-mode answer (D(G) <= size_cap); None when no cap was given
    within_cap: bool | None = field(default=None)

    def to_dict(self):
        return {
            "status": self.status,
            "size": self.size,
            "witness": self.witness.indices(),
            "nodes_explored": self.nodes_explored,
            "elapsed": self.elapsed,
            "within_cap": self.within_cap,
        }


def _bits(x):
    """Indices of set bits, ascending."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def brute_force_domination_number(g):
    """Smallest dominating set by enumerating subsets in increasing size."""
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise DomainError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    start = time.perf_counter()
    full = (1 << n) - 1
    closed = g.closed_rows()
    nodes = 0
    for k in range(n + 1):
        for combo in itertools.combinations(range(n), k):
            nodes += 1
            cov = 0
            for w in combo:
                cov |= closed[w]
            if cov == full:
                return SolveResult(
                    EXACT, k, VertexSet.from_indices(n, combo), nodes, time.perf_counter() - start
                )
    raise AssertionError("unreachable: the full vertex set dominates")


def greedy_dominating_set(g):
    """Repeatedly take the vertex covering most uncovered vertices (ties: lowest index)."""
    n = g.n
    if n == 0:
        return VertexSet(0)
    indptr, indices = g.csr()
    deg = np.diff(indptr)
    gain = deg + 1
    covered = np.zeros(n, dtype=bool)
    chosen = np.zeros(n, dtype=bool)
    remaining = n
    while remaining:
        w = int(np.argmax(gain))
        chosen[w] = True
        nbrs = indices[indptr[w]:indptr[w + 1]]
        fresh = np.concatenate(([w], nbrs))
        fresh = fresh[~covered[fresh]]
        covered[fresh] = True
        remaining -= len(fresh)
        # every vertex whose closed neighbourhood contains a freshly covered x loses 1
        starts, stops = indptr[fresh], indptr[fresh + 1]
        lens = stops - starts
        if lens.sum():
            offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(lens.sum())
            np.subtract.at(gain, indices[offs], 1)
        gain[fresh] -= 1
    return VertexSet.from_mask(chosen)


def alteration_dominating_set(g, r):
    """``{0..r-1}`` plus every vertex it leaves undominated."""
    if int(r) != r or not 0 <= r <= g.n:
        raise DomainError(f"r must satisfy 0 <= r <= n={g.n}, got {r}")
    r = int(r)
    base = np.zeros(g.n, dtype=bool)
    base[:r] = True
    u, v = g.endpoints
    dominated = base.copy()
    dominated[u[v < r]] = True
    dominated[v[u < r]] = True
    return VertexSet.from_mask(base | ~dominated)


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, g, deadline, best_bits, best_size):
        self.n = g.n
        self.closed = g.closed_rows()
        self.deadline = deadline
        self.best_bits = best_bits
        self.best_size = best_size
        self.nodes = 0
        self.stop_at = None  # decision mode: stop once best_size <= stop_at

    def tick(self):
        self.nodes += 1
        if self.nodes % _CLOCK_STRIDE == 0 and time.perf_counter() > self.deadline:
            raise _Timeout

    def record(self, chosen_bits, size):
        self.best_bits = chosen_bits
        self.best_size = size

    def done(self):
        return self.stop_at is not None and self.best_size <= self.stop_at

    def single_cover(self, uncovered, allowed):
        acc = allowed
        closed = self.closed
        while uncovered and acc:
            low = uncovered & -uncovered
            acc &= closed[low.bit_length() - 1]
            uncovered ^= low
        return acc

    def search(self, uncovered, chosen_bits, depth, forbidden):
        self.tick()
        if not uncovered:
            if depth < self.best_size:
                self.record(chosen_bits, depth)
            return
        budget = self.best_size - 1 - depth
        if budget <= 0:
            return
        closed = self.closed
        allowed = ~forbidden
        if budget == 1:
            cand = self.single_cover(uncovered, allowed & ((1 << self.n) - 1))
            if cand:
                w = (cand & -cand).bit_length() - 1
                self.record(chosen_bits | (1 << w), depth + 1)
            return

        # branch vertex: uncovered u with the fewest admissible dominators
        best_u, best_cnt = -1, self.n + 1
        for u in _bits(uncovered):
            c = (closed[u] & allowed).bit_count()
            if c < best_cnt:
                best_u, best_cnt = u, c
                if c <= 1:
                    break
        if best_cnt == 0:
            return

        need = uncovered.bit_count()
        if budget == 2:
            # every completion is a dominator of best_u plus one vertex covering the rest
            mask_all = allowed & ((1 << self.n) - 1)
            cand = self.single_cover(uncovered, mask_all)
            if cand:
                w = (cand & -cand).bit_length() - 1
                self.record(chosen_bits | (1 << w), depth + 1)
                return
            for w in _bits(closed[best_u] & allowed):
                self.tick()
                rest = uncovered & ~closed[w]
                cand = self.single_cover(rest, mask_all)
                if cand:
                    x = (cand & -cand).bit_length() - 1
                    self.record(chosen_bits | (1 << w) | (1 << x), depth + 2)
                    return
                mask_all &= ~(1 << w)
            return

        max_cov = 0
        for w in range(self.n):
            if (forbidden >> w) & 1:
                continue
            c = (closed[w] & uncovered).bit_count()
            if c > max_cov:
                max_cov = c
        if max_cov == 0 or -(-need // max_cov) > budget:
            return

        cands = _bits(closed[best_u] & allowed)
        cands.sort(key=lambda w: (-(closed[w] & uncovered).bit_count(), w))
        for w in cands:
            self.search(uncovered & ~closed[w], chosen_bits | (1 << w), depth + 1, forbidden)
            if self.done() or self.best_size - 1 - depth <= 0:
                return
            forbidden |= 1 << w


def _coverage_lower_bound(g):
    if g.n == 0:
        return 0
    return -(-g.n // int(g.degrees().max() + 1))


def domination_number_exact(g, time_budget=10.0, size_cap=None):
    """Branch-and-bound for D(G) within ``time_budget`` seconds.

    With ``size_cap=k`` the search only looks for dominating sets of size at
    most ``k`` and stops at the first one; ``within_cap`` then answers the
    decision question ``D(G) <= k`` (``None`` if the budget ran out first).
    """
    if not time_budget > 0:
        raise DomainError(f"time budget must be positive, got {time_budget}")
    start = time.perf_counter()
    n = g.n
    greedy = greedy_dominating_set(g)
    if n == 0:
        return SolveResult(EXACT, 0, greedy, 0, 0.0, None if size_cap is None else True)
    search = _Search(g, start + time_budget, greedy.bits, len(greedy))

    decision_mode = size_cap is not None
    if decision_mode:
        size_cap = int(size_cap)
        if size_cap < 0:
            raise DomainError(f"size cap must be non-negative, got {size_cap}")
        search.stop_at = size_cap
        if len(greedy) > size_cap + 1:
            # prune everything that could not meet the cap; keep greedy as fallback witness
            search.best_size = size_cap + 1
            search.best_bits = None

    timed_out = False
    if not search.done():
        try:
            search.search((1 << n) - 1, 0, 0, 0)
        except _Timeout:
            timed_out = True

    found_bits = search.best_bits
    if found_bits is None:
        witness = greedy
    else:
        witness = VertexSet(n, found_bits)
    size = len(witness)
    elapsed = time.perf_counter() - start

    if timed_out:
        status = TIMEOUT
        within = True if size <= (size_cap if decision_mode else -1) else None
    elif not decision_mode:
        status = EXACT
        within = None
    elif size <= size_cap:
        # stopped at the first set within the cap; optimal only when it meets the lower bound
        status = EXACT if size <= _coverage_lower_bound(g) else UPPER_BOUND_ONLY
        within = True
    else:
        # exhausted: nothing of size <= cap, so D(G) >= cap + 1
        status = EXACT if size == size_cap + 1 else UPPER_BOUND_ONLY
        within = False
    return SolveResult(status, size, witness, search.nodes, elapsed, within)
