"""Good conduits: parameter checks, self-duality search, matching contraction, conduit cycles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import algorithms as alg
from .errors import (BadParameters, BudgetExceeded, DualityNotVerified, NoPerfectMatching,
                     NotAMatchingOrdering, TauParity)
from .graph import BipartiteGraph, Graph

DEFAULT_DUALITY_BUDGET = 10**8


@dataclass(frozen=True)
class ConduitReport:
    tau: int
    measured_distance: alg.Girth
    girth: alg.Girth
    claimed_girth: Optional[int]
    min_degree: int
    max_degree: int
    n: int
    balanced: bool
    passed: bool

    @property
    def regular(self) -> bool:
        return self.min_degree == self.max_degree

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "measured_distance": _jsonable(self.measured_distance),
            "girth": _jsonable(self.girth),
            "claimed_girth": self.claimed_girth,
            "degree": [self.min_degree, self.max_degree],
            "n": self.n,
            "balanced": self.balanced,
            "pass": self.passed,
        }


def _jsonable(x):
    return "inf" if x == alg.INFINITE else x


def cross_distances(h: BipartiteGraph) -> np.ndarray:
    """Matrix of distances d(a_i, b_j); -1 for unreachable pairs."""
    g = h.graph
    if g.n <= 6000:
        d = alg.all_pairs_distances(g)
        return d[np.ix_(h.a, h.b)].astype(np.int64)
    return np.stack([alg.bfs_distances(g, a)[h.b] for a in h.a.tolist()])


def verify_conduit(h: BipartiteGraph, tau: int, claimed_girth: Optional[int] = None) -> ConduitReport:
    """Measure (tau, degree, girth, n) of a candidate conduit; failures are reported."""
    g = h.graph
    cross = cross_distances(h) if len(h.a) and len(h.b) else np.zeros((0, 0), dtype=np.int64)
    if cross.size == 0:
        measured = 0
    elif (cross < 0).any():
        measured = alg.INFINITE
    else:
        measured = int(cross.max())
    gi = alg.girth(g)
    lo, hi = alg.min_degree(g), alg.max_degree(g)
    ok = (lo == hi and h.balanced and measured <= tau
          and (claimed_girth is None or gi == claimed_girth))
    return ConduitReport(tau, measured, gi, claimed_girth, lo, hi, h.n, h.balanced, ok)


# -- dualities ----------------------------------------------------------------

@dataclass(frozen=True)
class DualityMap:
    """A part-swapping automorphism: a_i -> b_{sigma[i]} and b_j -> a_{rho[j]}.

    A polarity is the case rho = sigma^{-1}.
    """

    sigma: tuple[int, ...]
    rho: tuple[int, ...]
    verified: bool

    @property
    def is_polarity(self) -> bool:
        return all(self.rho[s] == i for i, s in enumerate(self.sigma))

    def to_json(self) -> str:
        return json.dumps({"sigma": list(self.sigma), "verified": self.verified})

    @classmethod
    def from_json(cls, text: str, h: BipartiteGraph) -> "DualityMap":
        data = json.loads(text)
        return duality_from_sigma(h, data["sigma"])


def check_duality(h: BipartiteGraph, sigma: Sequence[int], rho: Sequence[int]) -> bool:
    """Independent check: both maps bijective and every edge goes to an edge."""
    n = h.n
    if sorted(sigma) != list(range(n)) or sorted(rho) != list(range(len(h.b))):
        return False
    for i, nb in enumerate(h.a_nbrs):
        for j in nb:
            # a_i ~ b_j must map to b_sigma(i) ~ a_rho(j)
            if sigma[i] not in h.a_nbrs[rho[j]]:
                return False
    return True


def duality_from_sigma(h: BipartiteGraph, sigma: Sequence[int]) -> DualityMap:
    """Rebuild the B-side map from sigma and verify the pair.

    b_j must go to an A-vertex whose neighbourhood is sigma(N(b_j)); vertices
    with equal neighbourhoods are interchangeable and are paired in order.
    """
    sigma = tuple(int(x) for x in sigma)
    if len(sigma) != h.n:
        return DualityMap(sigma, tuple(range(len(h.b))), False)
    by_nbhd: dict[tuple[int, ...], list[int]] = {}
    for i, nb in enumerate(h.a_nbrs):
        by_nbhd.setdefault(nb, []).append(i)
    used: dict[tuple[int, ...], int] = {}
    rho = []
    for nb in h.b_nbrs:
        try:
            key = tuple(sorted(sigma[i] for i in nb))
        except IndexError:
            return DualityMap(sigma, tuple(range(len(h.b))), False)
        pool = by_nbhd.get(key, [])
        k = used.get(key, 0)
        if k >= len(pool):
            return DualityMap(sigma, tuple(range(len(h.b))), False)
        rho.append(pool[k])
        used[key] = k + 1
    rho = tuple(rho)
    return DualityMap(sigma, rho, check_duality(h, sigma, rho))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def vertex_invariants(g: Graph, dist: np.ndarray) -> list[tuple]:
    """Isomorphism-invariant vertex colours used to prune the duality search.

    Each vertex gets its degree, its distance distribution, and the sorted
    profile of |{v,w}^{perp perp}| over vertices w at distance 4, where
    {v,w}^perp are the common vertices at distance 2 and the closure is taken
    again at distance 2.
    """
    n = g.n
    dist2 = [0] * n
    for v in range(n):
        for w in np.nonzero(dist[v] == 2)[0].tolist():
            dist2[v] |= 1 << w
    maxd = int(dist.max(initial=0))
    out = []
    for v in range(n):
        profile = tuple(int(c) for c in np.bincount(dist[v][dist[v] >= 0], minlength=maxd + 1))
        closure = []
        for w in np.nonzero(dist[v] == 4)[0].tolist():
            perp = dist2[v] & dist2[w]
            acc = -1
            while perp:
                low = perp & -perp
                acc &= dist2[low.bit_length() - 1]
                perp ^= low
            closure.append(_popcount(acc) if acc != -1 else -1)
        out.append((g.degree(v), profile, tuple(sorted(closure))))
    return out


def find_self_duality(h: BipartiteGraph, budget: int = DEFAULT_DUALITY_BUDGET,
                      polarity: bool = False) -> Optional[DualityMap]:
    """Search for a part-swapping automorphism of h.

    Returns the verified map, None when the search space is exhausted, and
    raises BudgetExceeded when ``budget`` search nodes are spent first.  With
    ``polarity=True`` only involutions (rho = sigma^{-1}) are accepted.

    The search is distance-preserving backtracking with forward checking:
    each assignment v -> x intersects every open candidate set with the
    vertices at the matching distance from x, and the open vertex with the
    fewest candidates is branched next (ties by id).
    """
    if not h.balanced:
        raise BadParameters("self-duality needs a balanced bipartite graph")
    g = h.graph
    n = g.n
    if n == 0:
        return DualityMap((), (), True)
    dist = alg.all_pairs_distances(g).astype(np.int64)
    if (dist < 0).any():
        raise BadParameters("self-duality search needs a connected graph")
    maxd = int(dist.max())
    rings = [[0] * (maxd + 1) for _ in range(n)]
    for v in range(n):
        for d in range(maxd + 1):
            for w in np.nonzero(dist[v] == d)[0].tolist():
                rings[v][d] |= 1 << w

    inv = vertex_invariants(g, dist)
    colour: dict[tuple, int] = {}
    for v in range(n):
        colour.setdefault(inv[v], 0)
        colour[inv[v]] |= 1 << v
    a_mask = sum(1 << int(v) for v in h.a)
    b_mask = sum(1 << int(v) for v in h.b)
    side_a = np.zeros(n, dtype=bool)
    side_a[h.a] = True

    cand = []
    for v in range(n):
        other = b_mask if side_a[v] else a_mask
        cand.append(colour[inv[v]] & other)
    if any(c == 0 for c in cand):
        return None

    phi = [-1] * n
    nodes = [0]
    dist_rows = dist.tolist()

    def assign(cands, v, x):
        new = list(cands)
        dv = dist_rows[v]
        rx = rings[x]
        bit = ~(1 << x)
        for w in range(n):
            if phi[w] < 0 and w != v:
                c = new[w] & rx[dv[w]] & bit
                if not c:
                    return None
                new[w] = c
        new[v] = 1 << x
        return new

    def pick(cands):
        best, best_count = -1, None
        for w in range(n):
            if phi[w] < 0:
                k = _popcount(cands[w])
                if best_count is None or k < best_count:
                    best, best_count = w, k
                    if k == 1:
                        break
        return best

    def search(cands, depth):
        if depth == n:
            return True
        v = pick(cands)
        c = cands[v]
        while c:
            low = c & -c
            c ^= low
            x = low.bit_length() - 1
            nodes[0] += 1
            if nodes[0] > budget:
                raise BudgetExceeded(f"self-duality search exceeded {budget} nodes")
            new = assign(cands, v, x)
            if new is None:
                continue
            phi[v] = x
            placed = [v]
            if polarity and phi[x] < 0:
                if not (new[x] >> v) & 1:
                    phi[v] = -1
                    continue
                new = assign(new, x, v)
                if new is None:
                    phi[v] = -1
                    continue
                phi[x] = v
                placed.append(x)
            if search(new, depth + len(placed)):
                return True
            for p in placed:
                phi[p] = -1
        return False

    import sys
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        found = search(cand, 0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return None
    a_pos = {int(v): i for i, v in enumerate(h.a)}
    b_pos = {int(v): j for j, v in enumerate(h.b)}
    sigma = tuple(b_pos[phi[int(v)]] for v in h.a)
    rho = tuple(a_pos[phi[int(v)]] for v in h.b)
    return DualityMap(sigma, rho, check_duality(h, sigma, rho))


# -- matchings ------------------------------------------------------------------

def maximum_matching(h: BipartiteGraph) -> list[int]:
    """Kuhn's augmenting paths, smallest free neighbour first; match[i] = B-index of a_i or -1."""
    n = h.n
    nbrs = h.a_nbrs
    match_b = [-1] * len(h.b)

    def augment(i, seen):
        stack = [(i, iter(nbrs[i]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for j in it:
                if seen[j]:
                    continue
                seen[j] = True
                if match_b[j] < 0:
                    path.append((u, j))
                    for uu, jj in path:
                        match_b[jj] = uu
                    return True
                path.append((u, j))
                stack.append((match_b[j], iter(nbrs[match_b[j]])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if path:
                    path.pop()
        return False

    for i in range(n):
        free = next((j for j in nbrs[i] if match_b[j] < 0), None)
        if free is not None:
            match_b[free] = i
        else:
            augment(i, [False] * len(h.b))
    match_a = [-1] * n
    for j, i in enumerate(match_b):
        if i >= 0:
            match_a[i] = j
    return match_a


def find_perfect_matching(h: BipartiteGraph) -> BipartiteGraph:
    """Reorder B so that a_i ~ b_i for every i."""
    if not h.balanced:
        raise NoPerfectMatching("unbalanced bipartite graph")
    match = maximum_matching(h)
    if any(j < 0 for j in match):
        raise NoPerfectMatching(f"maximum matching has {sum(j >= 0 for j in match)} of {h.n} edges")
    return h.reindex(range(h.n), match)


def is_matching_ordering(h: BipartiteGraph) -> bool:
    return h.balanced and all(i in nb for i, nb in enumerate(h.a_nbrs))


def matching_contraction(h: BipartiteGraph) -> Graph:
    """Contract every a_i b_i; i ~ j iff a_i ~ b_j or a_j ~ b_i."""
    if not is_matching_ordering(h):
        raise NotAMatchingOrdering("a_i b_i is not an edge for every i")
    e = h.index_edges()
    g = Graph.from_edges(h.n, e)
    return g.with_meta(construction="matching_contraction", conduit=h.name)


def conduit_cycle(h: BipartiteGraph, sigma: DualityMap, tau: int) -> Graph:
    """tau copies of h around a cycle, glued by the duality.

    Vertex (j, i) has id j*n + i; it joins (j+1 mod tau, i') iff a_i ~ b_{sigma[i']}.
    """
    if tau % 2 == 0:
        raise TauParity(f"conduit cycles need odd tau, got {tau}")
    if tau < 3:
        raise BadParameters("conduit cycles need tau >= 3")
    if not sigma.verified or not check_duality(h, sigma.sigma, sigma.rho):
        raise DualityNotVerified("the duality map does not preserve adjacency")
    n = h.n
    inv = np.empty(n, dtype=np.int64)
    inv[np.asarray(sigma.sigma)] = np.arange(n)
    e = h.index_edges()
    # a_i ~ b_j with j = sigma[i']  ->  i' = inv[j]
    pairs = np.stack([e[:, 0], inv[e[:, 1]]], axis=1)
    blocks = [np.stack([j * n + pairs[:, 0], ((j + 1) % tau) * n + pairs[:, 1]], axis=1)
              for j in range(tau)]
    parts = np.repeat(np.arange(tau), n)
    g = Graph.from_edges(tau * n, np.concatenate(blocks), parts=parts)
    return g.with_meta(construction="conduit_cycle", conduit=h.name, tau=tau)
