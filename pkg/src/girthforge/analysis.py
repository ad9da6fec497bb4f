"""BFS-layer verifiers for the local structure of graphs with forbidden even cycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import algorithms as alg
from .errors import BadParameters, BudgetExceeded, ResourceLimit
from .graph import Graph

SIX_PATH_BUDGET = 10**7
DENSITY_MAX_VERTICES = 20000


@dataclass(frozen=True)
class LayerDecomposition:
    root: int
    depth: int
    dist: np.ndarray        # -1 beyond depth
    parent: np.ndarray      # BFS tree parent (smallest-id discoverer), -1 for root/unreached
    layers: tuple[np.ndarray, ...]

    def layer(self, i: int) -> np.ndarray:
        if 0 <= i < len(self.layers):
            return self.layers[i]
        return np.zeros(0, dtype=np.int64)

    def sizes(self) -> list[int]:
        return [len(a) for a in self.layers]

    def ancestors(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] >= 0:
            out.append(int(self.parent[out[-1]]))
        return out

    def lca(self, u: int, v: int) -> int:
        """Last common ancestor of u and v in the BFS tree."""
        if self.dist[u] < 0 or self.dist[v] < 0:
            raise BadParameters("vertex outside the decomposition")
        while self.dist[u] > self.dist[v]:
            u = int(self.parent[u])
        while self.dist[v] > self.dist[u]:
            v = int(self.parent[v])
        while u != v:
            u, v = int(self.parent[u]), int(self.parent[v])
        return u


def bfs_layers(g: Graph, x: int, depth: int) -> LayerDecomposition:
    if not 0 <= x < g.n:
        raise BadParameters(f"root {x} not in graph")
    dist = np.full(g.n, -1, dtype=np.int64)
    parent = np.full(g.n, -1, dtype=np.int64)
    dist[x] = 0
    layers = [np.array([x], dtype=np.int64)]
    frontier = [x]
    for i in range(1, depth + 1):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                w = int(w)
                if dist[w] < 0:
                    dist[w] = i
                    parent[w] = u
                    nxt.append(w)
        nxt.sort()
        layers.append(np.array(nxt, dtype=np.int64))
        frontier = nxt
        if not nxt:
            break
    while len(layers) < depth + 1:
        layers.append(np.zeros(0, dtype=np.int64))
    return LayerDecomposition(x, depth, dist, parent, tuple(layers))


def _claim_layers(t: int, which: str) -> tuple[int, int]:
    if which == "claim1":
        return t - 1, t
    if which == "claim2":
        return t, t + 1
    raise BadParameters(f"unknown claim {which!r}")


def six_path_check(g: Graph, layers: LayerDecomposition, t: int, which: str = "claim1",
                   edges: int = 6, budget: int = SIX_PATH_BUDGET) -> Optional[list[int]]:
    """First path x1 y1 x2 ... in G[A_lo + A_hi] with every x_i in A_lo, or None.

    `edges` is the path length (6 by default; 4 gives the t=2 variant).
    """
    if t < 1 or edges < 2 or edges % 2:
        raise BadParameters("need t >= 1 and an even path length")
    lo, hi = _claim_layers(t, which)
    if hi > layers.depth:
        raise BadParameters(f"layers must reach depth {hi}")
    d = layers.dist
    allowed = (d == lo) | (d == hi)
    starts = layers.layer(lo)
    path: list[int] = []
    onpath = set()
    steps = 0

    def extend() -> bool:
        nonlocal steps
        if len(path) == edges + 1:
            return True
        want_x = len(path) % 2 == 0
        for w in g.neighbors(path[-1]):
            w = int(w)
            if w in onpath or not allowed[w] or (want_x and d[w] != lo):
                continue
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"six-path search exceeded {budget} extensions")
            path.append(w)
            onpath.add(w)
            if extend():
                return True
            path.pop()
            onpath.discard(w)
        return False

    for s in starts:
        path, onpath = [int(s)], {int(s)}
        if extend():
            return path
    return None


def count_bottlenecks(g: Graph, x: int, t: int,
                      layers: Optional[LayerDecomposition] = None) -> tuple[int, int, int]:
    if t < 1:
        raise BadParameters("t must be positive")
    if layers is None or layers.depth < t + 1:
        layers = bfs_layers(g, x, t + 1)
    d = layers.dist
    c1 = c2 = c3 = 0
    for u in layers.layer(t):
        nb = g.neighbors(int(u))
        if np.count_nonzero(d[nb] == t - 1) >= 4:
            c1 += 1
        c3 += int(np.count_nonzero(d[nb] == t))
    for v in layers.layer(t + 1):
        up = np.count_nonzero(d[g.neighbors(int(v))] == t)
        if up >= 4:
            c2 += int(up)
    return c1, c2, c3 // 2


def density_bound(t: int, d: int) -> int:
    return (2 + 11 * t) * d ** (2 * t - 1)


def forbidden_lengths(t: int) -> list[int]:
    """Cycle lengths whose absence is the hypothesis at power t."""
    if t == 2:
        return [6]
    if t >= 3:
        return list(range(8, 2 * t + 3, 2))
    return []


def hypothesis_holds(g: Graph, t: int) -> tuple[bool, Optional[list[int]]]:
    """(holds, witness cycle if it fails)."""
    for ell, res in alg.forbidden_cycles(g, forbidden_lengths(t)).items():
        if res.witness is not None:
            return False, list(res.witness)
    return True, None


@dataclass(frozen=True)
class DensityReport:
    t: int
    d: int
    max_edges: int
    argmax: int
    bound: int
    hypothesis: bool

    @property
    def within_bound(self) -> bool:
        return self.max_edges <= self.bound

    def to_dict(self) -> dict:
        return {"t": self.t, "d": self.d, "max_edges": self.max_edges, "argmax": self.argmax,
                "bound": self.bound, "within_bound": self.within_bound,
                "hypothesis": self.hypothesis}


def _close(g: Graph, t: int) -> np.ndarray:
    if g.n > DENSITY_MAX_VERTICES:
        raise ResourceLimit(f"neighbourhood density on {g.n} vertices")
    D = alg.all_pairs_distances(g)
    return (D >= 1) & (D <= t)


def power_neighborhood_density(g: Graph, t: int, d: int, check_hypothesis: bool = True) -> DensityReport:
    """Max over v of the number of G^t edges inside N_{G^t}(v)."""
    if alg.max_degree(g) > d:
        raise BadParameters(f"max degree {alg.max_degree(g)} exceeds d={d}")
    best, arg = 0, -1
    if g.n:
        M = _close(g, t)
        Mi = M.astype(np.int32)
        for v in range(g.n):
            s = np.flatnonzero(M[v])
            e = int(Mi[np.ix_(s, s)].sum()) // 2
            if e > best or arg < 0:
                best, arg = e, v
    hyp = hypothesis_holds(g, t)[0] if check_hypothesis else False
    return DensityReport(t, d, best, arg, density_bound(t, d), hyp)


@dataclass(frozen=True)
class PathBoundReport:
    k: int
    d: int
    max_edges: int
    bound: float
    applicable: bool

    @property
    def within_bound(self) -> Optional[bool]:
        return self.max_edges <= self.bound if self.applicable else None

    def to_dict(self) -> dict:
        return {"k": self.k, "d": self.d, "max_edges": self.max_edges, "bound": self.bound,
                "applicable": self.applicable, "within_bound": self.within_bound}


def neighborhood_path_bound(g: Graph, k: int, d: int) -> PathBoundReport:
    """Max edges induced on a vertex neighbourhood against (k-3)d/2."""
    if k < 4:
        raise BadParameters("k must be at least 4")
    best = 0
    for x in range(g.n):
        nb = g.neighbors(x)
        s = set(int(w) for w in nb)
        e = sum(1 for u in s for w in g.neighbors(u) if int(w) in s)
        best = max(best, e // 2)
    absent = alg.forbidden_cycles(g, [k])[k].witness is None
    return PathBoundReport(k, d, best, (k - 3) * d / 2, absent)


@dataclass
class RootReport:
    root: int
    sizes: list[int]
    bottlenecks: tuple[int, int, int]
    bottleneck_bounds: tuple[float, float, float]
    claim1: Optional[list[int]]
    claim2: Optional[list[int]]

    @property
    def bottlenecks_ok(self) -> bool:
        return all(c <= b for c, b in zip(self.bottlenecks, self.bottleneck_bounds))

    def to_dict(self) -> dict:
        return {"root": self.root, "layer_sizes": self.sizes,
                "bottlenecks": list(self.bottlenecks),
                "bottleneck_bounds": list(self.bottleneck_bounds),
                "bottlenecks_ok": self.bottlenecks_ok,
                "claim1_witness": self.claim1, "claim2_witness": self.claim2}


@dataclass
class AnalysisReport:
    t: int
    d: int
    hypothesis: bool
    hypothesis_witness: Optional[list[int]]
    roots: list[RootReport] = field(default_factory=list)
    density: Optional[DensityReport] = None

    @property
    def claims_ok(self) -> bool:
        return all(r.claim1 is None and r.claim2 is None for r in self.roots)

    @property
    def bottlenecks_ok(self) -> bool:
        return all(r.bottlenecks_ok for r in self.roots)

    @property
    def passed(self) -> bool:
        dens = self.density is None or self.density.within_bound
        return self.claims_ok and self.bottlenecks_ok and dens

    def to_dict(self) -> dict:
        return {
            "t": self.t, "d": self.d,
            "hypothesis": {"forbidden_lengths": forbidden_lengths(self.t),
                           "holds": self.hypothesis, "witness": self.hypothesis_witness},
            "claims_ok": self.claims_ok, "bottlenecks_ok": self.bottlenecks_ok,
            "density": None if self.density is None else self.density.to_dict(),
            "pass": self.passed,
            "roots": [r.to_dict() for r in self.roots],
        }


def analyze_root(g: Graph, x: int, t: int) -> RootReport:
    lay = bfs_layers(g, x, t + 1)
    c = count_bottlenecks(g, x, t, lay)
    at, at1 = len(lay.layer(t)), len(lay.layer(t - 1))
    bounds = (2 * at1, 2 * at, 2.5 * at)
    return RootReport(x, lay.sizes(), c, bounds,
                      six_path_check(g, lay, t, "claim1"), six_path_check(g, lay, t, "claim2"))


def analyze(g: Graph, t: int, roots: Optional[Iterable[int]] = None, d: Optional[int] = None,
            density: bool = True) -> AnalysisReport:
    if t < 2:
        raise BadParameters("analysis needs t >= 2")
    d = alg.max_degree(g) if d is None else d
    holds, witness = hypothesis_holds(g, t)
    roots = range(g.n) if roots is None else sorted(set(int(r) for r in roots))
    rep = AnalysisReport(t, d, holds, witness)
    rep.roots = [analyze_root(g, x, t) for x in roots]
    if density:
        rep.density = power_neighborhood_density(g, t, d, check_hypothesis=False)
        rep.density = DensityReport(t, d, rep.density.max_edges, rep.density.argmax,
                                    rep.density.bound, holds)
    return rep


def sample_roots(n: int, count: int, seed: int = 0) -> list[int]:
    rng = np.random.default_rng(seed)
    if count >= n:
        return list(range(n))
    return sorted(int(x) for x in rng.choice(n, size=count, replace=False))


def layer_bound_ok(layers: LayerDecomposition, d: int) -> bool:
    return all(len(a) <= d ** i for i, a in enumerate(layers.layers))


def path_vertices_ok(g: Graph, path: Sequence[int], layers: LayerDecomposition, t: int,
                     which: str) -> bool:
    """Witness sanity: a simple path whose even positions are in A_lo, rest in A_lo or A_hi."""
    lo, hi = _claim_layers(t, which)
    d = layers.dist
    if len(set(path)) != len(path):
        return False
    if any(not g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1)):
        return False
    return all(d[v] == lo if i % 2 == 0 else d[v] in (lo, hi) for i, v in enumerate(path))
