"""Certifying algorithms on Graph: girth, powers, clique-in-power checks, colouring, cycles."""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .errors import BadParameters, BudgetExceeded, ResourceLimit
from .graph import Graph

INFINITE = math.inf
Girth = Union[int, float]

DEFAULT_EDGE_BUDGET = 10**8
CYCLE_SEARCH_MAX_VERTICES = 10**5
CYCLE_SEARCH_BUDGET = 10**9
REACH_CHUNK_BYTES = 256 * 2**20
INT64_MAX = 2**63 - 1


def edge_budget() -> int:
    raw = os.environ.get("GIRTHFORGE_BUDGET_EDGES")
    if raw is None:
        return DEFAULT_EDGE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise BadParameters(f"GIRTHFORGE_BUDGET_EDGES={raw!r} is not an integer") from None
    if value <= 0:
        raise BadParameters("GIRTHFORGE_BUDGET_EDGES must be positive")
    return value


def girth(g: Graph) -> Girth:
    """Exact girth; math.inf for forests."""
    if g.n == 0:
        return INFINITE
    c = int(K.girth(g.indptr, g.indices, K.workers()))
    return INFINITE if c > g.n else c


def bfs_distances(g: Graph, source: int, max_depth: Optional[int] = None) -> np.ndarray:
    """Distances from source (-1 when unreached or deeper than max_depth)."""
    depth = g.n if max_depth is None else max_depth
    return K.bfs_dist(g.indptr, g.indices, int(source), int(depth))


def all_pairs_distances(g: Graph) -> np.ndarray:
    if g.n > 20000:
        raise ResourceLimit(f"all-pairs distance matrix on {g.n} vertices")
    return K.all_pairs(g.indptr, g.indices, K.workers())


def pair_distances(g: Graph, pairs, limit: int) -> np.ndarray:
    """Distance per (u, v) pair, -1 where it exceeds limit."""
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return K.pair_distances(g.indptr, g.indices, arr[:, 0].copy(), arr[:, 1].copy(),
                            int(limit), K.workers())


def diameter(g: Graph) -> Girth:
    d = all_pairs_distances(g)
    return INFINITE if (d < 0).any() else int(d.max(initial=0))


def max_degree(g: Graph) -> int:
    return int(g.degrees.max(initial=0))


def min_degree(g: Graph) -> int:
    return int(g.degrees.min()) if g.n else 0


def is_regular(g: Graph) -> bool:
    return g.n == 0 or max_degree(g) == min_degree(g)


@dataclass(frozen=True)
class BipartiteCheck:
    bipartite: bool
    coloring: Optional[tuple[int, ...]]
    odd_cycle: Optional[tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.bipartite


def is_bipartite(g: Graph) -> BipartiteCheck:
    """BFS 2-colouring; an odd cycle witness when it fails."""
    color = np.full(g.n, -1, dtype=np.int64)
    parent = np.full(g.n, -1, dtype=np.int64)
    depth = np.zeros(g.n, dtype=np.int64)
    adj = g.adj
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return BipartiteCheck(False, None, _odd_cycle(parent, depth, u, w))
    return BipartiteCheck(True, tuple(color.tolist()), None)


def _odd_cycle(parent, depth, u, w) -> tuple[int, ...]:
    left, right = [u], [w]
    while depth[left[-1]] > depth[right[-1]]:
        left.append(int(parent[left[-1]]))
    while depth[right[-1]] > depth[left[-1]]:
        right.append(int(parent[right[-1]]))
    while left[-1] != right[-1]:
        left.append(int(parent[left[-1]]))
        right.append(int(parent[right[-1]]))
    return tuple(int(x) for x in left + right[-2::-1])


def power(g: Graph, t: int, budget: Optional[int] = None) -> Graph:
    """G^t: vertices at distance 1..t become adjacent."""
    if t < 1:
        raise BadParameters("power needs t >= 1")
    if t == 1:
        return Graph(g.n, g.indptr, g.indices, g.labels, g.parts, dict(g.meta))
    budget = edge_budget() if budget is None else budget
    counts = K.power_degrees(g.indptr, g.indices, int(t), K.workers())
    total = int(counts.sum())
    if total > budget:
        raise ResourceLimit(f"G^{t} has {total} edges, above the budget of {budget}")
    offsets = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    out = np.empty((total, 2), dtype=np.int64)
    K.power_fill(g.indptr, g.indices, int(t), offsets, out, K.workers())
    return Graph.from_edges(g.n, out, labels=g.labels, parts=g.parts)


def reach_deficit(g: Graph, sources, targets, t: int) -> np.ndarray:
    """For each target, the number of sources farther than t from it.

    Reachability is propagated as source bitsets for t rounds, in chunks of
    sources sized to bound memory.
    """
    sources = np.asarray(sources, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    words_budget = max(1, REACH_CHUNK_BYTES // (16 * max(g.n, 1)))
    chunk = 64 * words_budget
    out = np.zeros(len(targets), dtype=np.int64)
    for start in range(0, len(sources), chunk):
        stop = min(len(sources), start + chunk)
        cur = K.seed_bits(g.n, sources, start, stop)
        nxt = np.empty_like(cur)
        for _ in range(t):
            K.reach_step(g.indptr, g.indices, cur, nxt)
            cur, nxt = nxt, cur
        out += K.count_missing(cur, targets, stop - start)
    return out


@dataclass(frozen=True)
class CliqueCertificate:
    """Pairwise-distance certificate for a vertex subset in G^t.

    ``failures`` lists up to ``max_witnesses`` pairs (u, v, distance) with
    distance > t; distance is math.inf when v is unreachable from u.
    """

    t: int
    vertices: tuple[int, ...]
    verified: bool
    failures: tuple[tuple[int, int, Girth], ...] = ()
    missing_pairs: int = 0

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "size": self.size,
            "verified": self.verified,
            "missing_pairs": self.missing_pairs,
            "failures": [[u, v, d if d != INFINITE else "inf"] for u, v, d in self.failures],
        }


def verify_clique_in_power(g: Graph, t: int, subset: Iterable[int],
                           max_witnesses: int = 10) -> CliqueCertificate:
    """Check every pair of ``subset`` is within distance t, without building G^t."""
    if t < 1:
        raise BadParameters("power needs t >= 1")
    s = np.asarray(sorted(set(int(v) for v in subset)), dtype=np.int64)
    if len(s) and (s[0] < 0 or s[-1] >= g.n):
        raise BadParameters("subset contains a vertex outside the graph")
    k = len(s)
    if k <= 1:
        return CliqueCertificate(t, tuple(s.tolist()), True)
    miss = reach_deficit(g, s, s, t)
    missing_pairs = int(miss.sum()) // 2
    bad_sources = s[np.nonzero(miss)[0]].tolist()
    if missing_pairs == 0:
        return CliqueCertificate(t, tuple(s.tolist()), True)
    failures = []
    in_s = np.zeros(g.n, dtype=bool)
    in_s[s] = True
    for u in sorted(bad_sources):
        if len(failures) >= max_witnesses:
            break
        dist = bfs_distances(g, u)
        far = np.nonzero(in_s & ((dist > t) | (dist < 0)))[0]
        for v in far.tolist():
            if v > u and len(failures) < max_witnesses:
                failures.append((u, v, int(dist[v]) if dist[v] >= 0 else INFINITE))
    return CliqueCertificate(t, tuple(s.tolist()), False, tuple(failures), missing_pairs)


@dataclass(frozen=True)
class SampledDistanceReport:
    t: int
    pairs: int
    max_distance: Girth
    violations: tuple[tuple[int, int], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def sample_pair_distances(g: Graph, subset: Sequence[int], t: int, samples: int,
                          seed: int = 0) -> SampledDistanceReport:
    """Check random pairs of distinct subset vertices are within distance t."""
    rng = np.random.default_rng(seed)
    pool = np.asarray(subset, dtype=np.int64)
    us = pool[rng.integers(0, len(pool), samples)]
    vs = pool[rng.integers(0, len(pool), samples)]
    d = pair_distances(g, np.stack([us, vs], axis=1), t)
    bad = np.nonzero(d < 0)[0]
    viol = tuple((int(us[i]), int(vs[i])) for i in bad[:10])
    return SampledDistanceReport(t, samples, INFINITE if len(bad) else int(d.max(initial=0)), viol)


def greedy_color(g: Graph, order: str = "natural") -> tuple[tuple[int, ...], int]:
    """Greedy proper colouring; returns (colour per vertex, number of colours)."""
    if order == "natural":
        seq = range(g.n)
    elif order == "degeneracy":
        seq = reversed(degeneracy_order(g))
    else:
        raise BadParameters(f"unknown colouring order {order!r}")
    colors = [-1] * g.n
    adj = g.adj
    for v in seq:
        used = {colors[w] for w in adj[v]}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return tuple(colors), (max(colors) + 1 if colors else 0)


def degeneracy_order(g: Graph) -> list[int]:
    """Smallest-last elimination order (ties broken by vertex id)."""
    import heapq

    deg = g.degrees.astype(np.int64).tolist()
    removed = [False] * g.n
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    out = []
    adj = g.adj
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        out.append(v)
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return out


def is_proper_coloring(g: Graph, colors: Sequence[int]) -> bool:
    e = g.edges()
    c = np.asarray(colors)
    return not np.any(c[e[:, 0]] == c[e[:, 1]])


@dataclass(frozen=True)
class CycleSearch:
    length: int
    witness: Optional[tuple[int, ...]]

    @property
    def absent(self) -> bool:
        return self.witness is None


def find_cycle(g: Graph, length: int, budget: int = CYCLE_SEARCH_BUDGET) -> CycleSearch:
    if length < 3:
        raise BadParameters("cycle lengths start at 3")
    status, path = K.cycle_of_length(g.indptr, g.indices, int(length), int(budget), 0)
    if status < 0:
        raise BudgetExceeded(f"cycle search for length {length} exceeded {budget} steps")
    return CycleSearch(length, tuple(path.tolist()) if status == 1 else None)


def forbidden_cycles(g: Graph, lengths: Iterable[int], budget: int = CYCLE_SEARCH_BUDGET,
                     max_vertices: int = CYCLE_SEARCH_MAX_VERTICES) -> dict[int, CycleSearch]:
    """First cycle found of each requested length (None when provably absent).

    Lengths below the girth are settled by the girth computation; the rest
    by exhaustive pruned DFS.
    """
    lengths = sorted(set(int(x) for x in lengths))
    if any(x < 3 for x in lengths):
        raise BadParameters("cycle lengths start at 3")
    out: dict[int, CycleSearch] = {}
    if not lengths:
        return out
    gi = girth(g)
    for ell in lengths:
        if ell < gi:
            out[ell] = CycleSearch(ell, None)
            continue
        if g.n > max_vertices:
            raise ResourceLimit(f"exhaustive cycle search on {g.n} vertices")
        out[ell] = find_cycle(g, ell, budget)
    return out


def is_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    k = len(cycle)
    return (k >= 3 and len(set(cycle)) == k
            and all(g.has_edge(cycle[i], cycle[(i + 1) % k]) for i in range(k)))


def trivial_upper_bound(d: int, t: int) -> int:
    """d^t + 1, the greedy bound on chi(G^t) for maximum degree d."""
    if d < 1 or t < 1:
        raise BadParameters("d and t must be positive")
    value = d**t + 1
    if value > INT64_MAX:
        raise OverflowError(f"{d}^{t} + 1 exceeds a signed 64-bit integer")
    return value
