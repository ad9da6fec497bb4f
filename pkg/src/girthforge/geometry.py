"""Incidence graphs of finite generalized polygons, used as conduits.

All three geometries are built from coordinates over GF(q):

* projective plane PG(2,q): points and lines are 1- and 2-subspaces of GF(q)^3;
* symplectic quadrangle W(q): all points of PG(3,q), and the lines totally
  isotropic for x0*y1 - x1*y0 + x2*y3 - x3*y2;
* split Cayley hexagon: points of the quadric x0*x4 + x1*x5 + x2*x6 = x3^2 in
  PG(6,q), and those quadric lines whose Grassmann coordinates satisfy
  p12=p34, p54=p32, p20=p35, p65=p30, p01=p36, p46=p31.

Points are listed in lexicographic order of their normalized coordinates
(first nonzero entry 1); lines in lexicographic order of their normalized
dual or Grassmann coordinates.  A-vertex i is the i-th point, B-vertex j the
j-th line.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from .errors import BadParameters, NotPrimePower
from .field import Field, field_create, is_prime_power, rref
from .graph import BipartiteGraph

PROJECTIVE_PLANE = "P"
SYMPLECTIC_QUADRANGLE = "Q"
SPLIT_CAYLEY_HEXAGON = "H"
COMPLETE_BIPARTITE = "K"

KIND_NAMES = {
    PROJECTIVE_PLANE: "ProjectivePlane",
    SYMPLECTIC_QUADRANGLE: "SymplecticQuadrangle",
    SPLIT_CAYLEY_HEXAGON: "SplitCayleyHexagon",
    COMPLETE_BIPARTITE: "CompleteBipartite",
}
_ALIASES = {v.lower(): k for k, v in KIND_NAMES.items()}
_ALIASES.update({k.lower(): k for k in KIND_NAMES})
_ALIASES.update({"projective_plane": "P", "symplectic_quadrangle": "Q",
                 "split_cayley_hexagon": "H", "complete_bipartite": "K"})

# Hexagon line condition: p_ab = p_cd for each ((a, b), (c, d)).
HEXAGON_RELATIONS = (((1, 2), (3, 4)), ((5, 4), (3, 2)), ((2, 0), (3, 5)),
                     ((6, 5), (3, 0)), ((0, 1), (3, 6)), ((4, 6), (3, 1)))


def canonical_kind(kind: str) -> str:
    try:
        return _ALIASES[str(kind).lower()]
    except KeyError:
        raise BadParameters(f"unknown conduit kind {kind!r}") from None


def part_size(kind: str, q: int) -> int:
    """Closed-form number of points (= lines) of the geometry."""
    kind = canonical_kind(kind)
    if kind == PROJECTIVE_PLANE:
        return q * q + q + 1
    if kind == SYMPLECTIC_QUADRANGLE:
        return q**3 + q**2 + q + 1
    if kind == SPLIT_CAYLEY_HEXAGON:
        return (q**6 - 1) // (q - 1)
    return q


def conduit_degree(kind: str, q: int) -> int:
    return q if canonical_kind(kind) == COMPLETE_BIPARTITE else q + 1


def conduit_tau(kind: str) -> int:
    """Cross-part distance parameter; 2 for the plane (a same-part distance)."""
    return {"K": 1, "P": 2, "Q": 3, "H": 5}[canonical_kind(kind)]


def conduit_girth(kind: str) -> int:
    return {"K": 4, "P": 6, "Q": 8, "H": 12}[canonical_kind(kind)]


@dataclass(frozen=True)
class IncidenceModel:
    kind: str
    order: int
    points: tuple[tuple[int, ...], ...]
    lines: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...]  # point index -> sorted line indices
    predicate: str

    def to_bipartite(self) -> BipartiteGraph:
        labels = ["p" + ",".join(map(str, x)) for x in self.points] + \
                 ["l" + ",".join(map(str, x)) for x in self.lines]
        return BipartiteGraph.from_biadjacency(self.incidence, len(self.lines),
                                               kind=self.kind, order=self.order, labels=labels)


# -- projective helpers ---------------------------------------------------------

def projective_points(f: Field, dim: int) -> np.ndarray:
    """Normalized representatives of PG(dim-1, q), lexicographically sorted."""
    rows = []
    for lead in range(dim):
        width = dim - lead - 1
        tail = np.array(list(product(range(f.q), repeat=width)), dtype=np.int64)
        tail = tail.reshape(f.q**width, width)
        block = np.zeros((len(tail), dim), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        rows.append(block)
    pts = np.concatenate(rows)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def normalize(f: Field, v: Sequence[int]) -> tuple[int, ...]:
    for x in v:
        if x:
            inv = f.inv_table[x]
            return tuple(int(f.mul_table[inv, y]) for y in v)
    raise BadParameters("the zero vector has no projective point")


def _combine(f: Field, coeffs: Sequence[int], vectors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    out = [0] * len(vectors[0])
    for c, vec in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(vec):
                out[i] = int(f.add_table[out[i], f.mul_table[c, x]])
    return tuple(out)


def subspace_points(f: Field, basis: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Normalized projective points of span(basis) (basis assumed independent)."""
    r = len(basis)
    out = []
    for lead in range(r):
        for tail in product(range(f.q), repeat=r - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            out.append(normalize(f, _combine(f, coeffs, basis)))
    return out


def kernel(f: Field, rows: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Basis of the right null space of rows."""
    reduced, pivots = rref(f, rows) if rows else ([], [])
    out = []
    for fc in (c for c in range(dim) if c not in pivots):
        vec = [0] * dim
        vec[fc] = 1
        for row, c in zip(reduced, pivots):
            vec[c] = int(f.neg_table[row[fc]])
        out.append(tuple(vec))
    return out


def grassmann(f: Field, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Normalized Grassmann coordinates p_ij (i < j) of the line through x and y."""
    coords = []
    for i, j in combinations(range(len(x)), 2):
        coords.append(int(f.add_table[f.mul_table[x[i], y[j]],
                                      f.neg_table[f.mul_table[x[j], y[i]]]]))
    return normalize(f, coords)


def _lines_through_points(f: Field, pts: np.ndarray,
                          neighbours: Callable[[tuple[int, ...]], list[tuple[int, ...]]],
                          predicate: str, kind: str, q: int) -> IncidenceModel:
    """Collect lines span(x, y) for each point x and each y returned by neighbours(x)."""
    plist = [tuple(int(c) for c in p) for p in pts]
    index = {p: i for i, p in enumerate(plist)}
    lines: dict[tuple[int, ...], frozenset[int]] = {}
    for x in plist:
        for y in neighbours(x):
            if y == x:
                continue
            key = grassmann(f, x, y)
            if key in lines:
                continue
            members = frozenset(index[p] for p in subspace_points(f, [x, y]))
            lines[key] = members
    keys = sorted(lines)
    incidence: list[list[int]] = [[] for _ in plist]
    for j, key in enumerate(keys):
        for i in lines[key]:
            incidence[i].append(j)
    return IncidenceModel(kind, q, tuple(plist), tuple(keys),
                          tuple(tuple(sorted(r)) for r in incidence), predicate)


def _require_prime_power(q: int) -> Field:
    if not is_prime_power(q):
        raise NotPrimePower(f"{q} is not a prime power")
    return field_create(q)


# -- models ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def projective_plane_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    pts = projective_points(f, 3)
    plist = [tuple(int(c) for c in p) for p in pts]
    # lines are the same normalized vectors read as dual coordinates
    dot = np.zeros((len(pts), len(pts)), dtype=np.int64)
    for i in range(3):
        dot = f.add_table[dot, f.mul_table[pts[:, i][:, None], pts[:, i][None, :]]]
    incidence = tuple(tuple(np.nonzero(row == 0)[0].tolist()) for row in dot)
    return IncidenceModel(PROJECTIVE_PLANE, q, tuple(plist), tuple(plist), incidence,
                          "x0*l0 + x1*l1 + x2*l2 = 0")


def symplectic_form(f: Field, x: Sequence[int], y: Sequence[int]) -> int:
    a = f.add_table[f.mul_table[x[0], y[1]], f.neg_table[f.mul_table[x[1], y[0]]]]
    b = f.add_table[f.mul_table[x[2], y[3]], f.neg_table[f.mul_table[x[3], y[2]]]]
    return int(f.add_table[a, b])


def symplectic_gram(f: Field) -> list[list[int]]:
    """Gram matrix of the symplectic form."""
    m1 = int(f.neg_table[1])
    return [[0, 1, 0, 0], [m1, 0, 0, 0], [0, 0, 0, 1], [0, 0, m1, 0]]


@lru_cache(maxsize=None)
def symplectic_quadrangle_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    pts = projective_points(f, 4)
    gram = symplectic_gram(f)

    def perp(x):
        row = [0] * 4
        for j in range(4):
            acc = 0
            for i in range(4):
                acc = int(f.add_table[acc, f.mul_table[x[i], gram[i][j]]])
            row[j] = acc
        return subspace_points(f, kernel(f, [row], 4))

    return _lines_through_points(f, pts, perp, "x0*y1 - x1*y0 + x2*y3 - x3*y2 = 0",
                                 SYMPLECTIC_QUADRANGLE, q)


def quadric_value(f: Field, x: Sequence[int]) -> int:
    """x0*x4 + x1*x5 + x2*x6 - x3^2."""
    acc = 0
    for i, j in ((0, 4), (1, 5), (2, 6)):
        acc = int(f.add_table[acc, f.mul_table[x[i], x[j]]])
    return int(f.add_table[acc, f.neg_table[f.mul_table[x[3], x[3]]]])


def quadric_polar(f: Field, x: Sequence[int]) -> list[int]:
    """Row r with r . y = B(x, y), B the polar form of the quadric."""
    r = [0] * 7
    for i, j in ((0, 4), (1, 5), (2, 6)):
        r[j] = int(x[i])
        r[i] = int(x[j])
    r[3] = int(f.neg_table[f.add_table[x[3], x[3]]])
    return r


def _pl_row(f: Field, x: Sequence[int], i: int, j: int) -> list[int]:
    """Row r with r . y = x_i*y_j - x_j*y_i."""
    r = [0] * 7
    r[j] = int(f.add_table[r[j], x[i]])
    r[i] = int(f.add_table[r[i], f.neg_table[x[j]]])
    return r


@lru_cache(maxsize=None)
def split_cayley_hexagon_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    allpts = projective_points(f, 7)
    vals = np.zeros(len(allpts), dtype=np.int64)
    for i, j in ((0, 4), (1, 5), (2, 6)):
        vals = f.add_table[vals, f.mul_table[allpts[:, i], allpts[:, j]]]
    vals = f.add_table[vals, f.neg_table[f.mul_table[allpts[:, 3], allpts[:, 3]]]]
    pts = allpts[vals == 0]

    def collinear(x):
        rows = [quadric_polar(f, x)]
        for (a, b), (c, d) in HEXAGON_RELATIONS:
            r1, r2 = _pl_row(f, x, a, b), _pl_row(f, x, c, d)
            rows.append([int(f.add_table[u, f.neg_table[v]]) for u, v in zip(r1, r2)])
        return [y for y in subspace_points(f, kernel(f, rows, 7)) if quadric_value(f, y) == 0]

    return _lines_through_points(f, pts, collinear,
                                 "quadric lines with p12=p34, p54=p32, p20=p35, p65=p30, p01=p36, p46=p31",
                                 SPLIT_CAYLEY_HEXAGON, q)


# -- bipartite generators ---------------------------------------------------------

@lru_cache(maxsize=None)
def projective_plane_incidence(q: int) -> BipartiteGraph:
    return projective_plane_model(q).to_bipartite()


@lru_cache(maxsize=None)
def symplectic_quadrangle_incidence(q: int) -> BipartiteGraph:
    return symplectic_quadrangle_model(q).to_bipartite()


@lru_cache(maxsize=None)
def split_cayley_hexagon_incidence(q: int) -> BipartiteGraph:
    return split_cayley_hexagon_model(q).to_bipartite()


@lru_cache(maxsize=None)
def complete_bipartite_conduit(delta: int) -> BipartiteGraph:
    if delta < 1:
        raise BadParameters("K_{delta,delta} needs delta >= 1")
    rows = [tuple(range(delta))] * delta
    return BipartiteGraph.from_biadjacency(rows, delta, kind=COMPLETE_BIPARTITE, order=delta)


def mirror(h: BipartiteGraph) -> BipartiteGraph:
    """Swap the roles of the A- and B-orderings."""
    return h.mirror()


def incidence_model(kind: str, q: int) -> IncidenceModel:
    kind = canonical_kind(kind)
    if kind == PROJECTIVE_PLANE:
        return projective_plane_model(q)
    if kind == SYMPLECTIC_QUADRANGLE:
        return symplectic_quadrangle_model(q)
    if kind == SPLIT_CAYLEY_HEXAGON:
        return split_cayley_hexagon_model(q)
    raise BadParameters("complete bipartite graphs carry no coordinates")


def conduit(kind: str, q: int) -> BipartiteGraph:
    """Generator dispatch by kind; for K the parameter is the degree."""
    kind = canonical_kind(kind)
    return {
        PROJECTIVE_PLANE: projective_plane_incidence,
        SYMPLECTIC_QUADRANGLE: symplectic_quadrangle_incidence,
        SPLIT_CAYLEY_HEXAGON: split_cayley_hexagon_incidence,
        COMPLETE_BIPARTITE: complete_bipartite_conduit,
    }[kind](q)
