"""Immutable simple graphs in CSR form, and balanced bipartite graphs with orderings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import BadParameters, DimensionMismatch


def _as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionMismatch("edges must be pairs")
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``indptr``/``indices`` hold the sorted adjacency lists.  Build instances with
    :meth:`from_edges`, which drops loops and merges parallel edges.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    labels: Optional[tuple[str, ...]] = None
    parts: Optional[np.ndarray] = None
    meta: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, n: int, edges, labels: Optional[Sequence[str]] = None,
                   parts=None, meta: Optional[Mapping[str, str]] = None) -> "Graph":
        n = int(n)
        if n < 0:
            raise BadParameters("negative vertex count")
        arr = _as_edge_array(edges)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise BadParameters("edge endpoint out of range")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        keep = u != v
        codes = np.unique(u[keep] * n + v[keep])
        u, v = codes // max(n, 1), codes % max(n, 1)
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indices = dst.astype(np.int32 if n < 2**31 else np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise DimensionMismatch("one label per vertex required")
        if parts is not None:
            parts = np.asarray(parts, dtype=np.int64)
            if parts.shape != (n,):
                raise DimensionMismatch("one part tag per vertex required")
            parts.setflags(write=False)
        return cls(n, indptr, indices, labels, parts, dict(meta or {}))

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]], **kw) -> "Graph":
        edges = [(u, v) for u, nb in enumerate(adj) for v in nb]
        return cls.from_edges(len(adj), edges, **kw)

    def with_meta(self, **meta) -> "Graph":
        merged = dict(self.meta)
        merged.update({k: str(v) for k, v in meta.items()})
        return Graph(self.n, self.indptr, self.indices, self.labels, self.parts, merged)

    def with_parts(self, parts) -> "Graph":
        parts = np.asarray(parts, dtype=np.int64)
        if parts.shape != (self.n,):
            raise DimensionMismatch("one part tag per vertex required")
        return Graph(self.n, self.indptr, self.indices, self.labels, parts, dict(self.meta))

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return tuple(tuple(ind[ptr[v]:ptr[v + 1]]) for v in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges u < v in lexicographic order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        dst = self.indices.astype(np.int64)
        mask = src < dst
        return np.stack([src[mask], dst[mask]], axis=1)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(map(tuple, self.edges().tolist()))

    def same_edges(self, other: "Graph") -> bool:
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        vertices = np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        pos = -np.ones(self.n, dtype=np.int64)
        pos[vertices] = np.arange(len(vertices))
        e = self.edges()
        keep = (pos[e[:, 0]] >= 0) & (pos[e[:, 1]] >= 0)
        return Graph.from_edges(len(vertices), pos[e[keep]])

    def part_indices(self, part: int) -> np.ndarray:
        if self.parts is None:
            raise BadParameters("graph carries no part tags")
        return np.nonzero(self.parts == part)[0]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """A graph with ordered parts A = (a_1..a_n) and B = (b_1..b_n).

    ``a`` and ``b`` are arrays of vertex ids; index i in ``a`` is the element
    a_{i+1}.  Every edge must join A to B.
    """

    graph: Graph
    a: np.ndarray
    b: np.ndarray
    kind: str = "bipartite"
    order: Optional[int] = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        g = self.graph
        if len(a) + len(b) != g.n or len(np.unique(np.concatenate([a, b]))) != g.n:
            raise BadParameters("orderings must partition the vertex set")
        side = np.zeros(g.n, dtype=np.int8)
        side[b] = 1
        e = g.edges()
        if len(e) and np.any(side[e[:, 0]] == side[e[:, 1]]):
            raise BadParameters("edge inside a part")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_biadjacency(cls, nbrs: Sequence[Iterable[int]], nb: Optional[int] = None,
                         kind: str = "bipartite", order: Optional[int] = None,
                         labels: Optional[Sequence[str]] = None) -> "BipartiteGraph":
        """A-vertex i gets id i; B-vertex j gets id len(nbrs)+j."""
        na = len(nbrs)
        nb = na if nb is None else nb
        edges = [(i, na + j) for i, row in enumerate(nbrs) for j in row]
        parts = np.r_[np.zeros(na, dtype=np.int64), np.ones(nb, dtype=np.int64)]
        g = Graph.from_edges(na + nb, edges, labels=labels, parts=parts)
        return cls(g, np.arange(na), np.arange(na, na + nb), kind, order)

    @property
    def n(self) -> int:
        """Size of part A."""
        return len(self.a)

    @property
    def balanced(self) -> bool:
        return len(self.a) == len(self.b)

    @cached_property
    def _b_pos(self) -> np.ndarray:
        pos = -np.ones(self.graph.n, dtype=np.int64)
        pos[self.b] = np.arange(len(self.b))
        return pos

    @cached_property
    def _a_pos(self) -> np.ndarray:
        pos = -np.ones(self.graph.n, dtype=np.int64)
        pos[self.a] = np.arange(len(self.a))
        return pos

    @cached_property
    def a_nbrs(self) -> tuple[tuple[int, ...], ...]:
        """For each A-index, the sorted B-indices adjacent to it."""
        g, pos = self.graph, self._b_pos
        return tuple(tuple(sorted(pos[g.neighbors(v)].tolist())) for v in self.a.tolist())

    @cached_property
    def b_nbrs(self) -> tuple[tuple[int, ...], ...]:
        g, pos = self.graph, self._a_pos
        return tuple(tuple(sorted(pos[g.neighbors(v)].tolist())) for v in self.b.tolist())

    def index_edges(self) -> np.ndarray:
        """(m, 2) array of (A-index, B-index) pairs, sorted."""
        rows = [(i, j) for i, nb in enumerate(self.a_nbrs) for j in nb]
        return np.asarray(rows, dtype=np.int64).reshape(-1, 2)

    def biadjacency(self) -> np.ndarray:
        m = np.zeros((len(self.a), len(self.b)), dtype=bool)
        e = self.index_edges()
        m[e[:, 0], e[:, 1]] = True
        return m

    def adjacent(self, i: int, j: int) -> bool:
        """Is a_i adjacent to b_j (0-based indices)?"""
        return j in self.a_nbrs[i]

    def mirror(self) -> "BipartiteGraph":
        return BipartiteGraph(self.graph, self.b, self.a, self.kind, self.order)

    def reindex(self, a_perm: Sequence[int], b_perm: Sequence[int]) -> "BipartiteGraph":
        """New orderings: new a_i = old a_{a_perm[i]}, likewise for B."""
        a_perm = np.asarray(a_perm, dtype=np.int64)
        b_perm = np.asarray(b_perm, dtype=np.int64)
        if sorted(a_perm.tolist()) != list(range(len(self.a))) or \
                sorted(b_perm.tolist()) != list(range(len(self.b))):
            raise BadParameters("reindexing must be a permutation")
        return BipartiteGraph(self.graph, self.a[a_perm], self.b[b_perm], self.kind, self.order)

    def same_orderings(self, other: "BipartiteGraph") -> bool:
        return (self.graph.same_edges(other.graph) and np.array_equal(self.a, other.a)
                and np.array_equal(self.b, other.b))

    @property
    def name(self) -> str:
        return f"{self.kind}({self.order})" if self.order is not None else self.kind

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.name}, n={self.n}, m={self.graph.m})"
