"""Circular constructions over conduits, De Bruijn graphs and the unfolding operation.

A circular graph has parts U^(0..P-1), each a copy of the product of the
coordinate domains [n_0] x ... x [n_{C-1}].  Hop k joins part k to part k+1
(mod P for cycles): tuples agree off coordinate alpha_k, and the values at
alpha_k follow the hop's conduit template, forward (a_x ~ b_y) or mirrored
(b_x ~ a_y).

A coordinate value stored in a part is read as an A- or B-index of its
conduit.  Walking a coordinate's hops in order, a hop whose input role
differs from the stored role converts the value: with the identity on
indices when every hop of that coordinate has the same orientation, and via
a verified duality when orientations are mixed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Mapping, Optional, Union

import numpy as np

from . import algorithms as alg
from . import geometry as geo
from .conduit import DualityMap, find_self_duality, verify_conduit
from .errors import BadParameters, ResourceLimit, SelfDualityRequired, SpecValidation
from .graph import BipartiteGraph, Graph

FORWARD = "forward"
MIRRORED = "mirrored"
CYCLE = "cycle"
PATH = "path"

A_ROLE, B_ROLE = "A", "B"


@dataclass(frozen=True)
class ConduitRef:
    kind: str
    q: int

    def __post_init__(self):
        object.__setattr__(self, "kind", geo.canonical_kind(self.kind))
        object.__setattr__(self, "q", int(self.q))

    def build(self) -> BipartiteGraph:
        return geo.conduit(self.kind, self.q)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "q": self.q}

    def __str__(self) -> str:
        return f"{self.kind}_{self.q}"


ConduitLike = Union[ConduitRef, BipartiteGraph]


@dataclass(frozen=True)
class HopSpec:
    conduit: ConduitLike
    coord: int
    orientation: str = FORWARD

    def __post_init__(self):
        if self.orientation not in (FORWARD, MIRRORED):
            raise SpecValidation(f"orientation must be forward or mirrored, not {self.orientation!r}")
        if self.coord < 0:
            raise SpecValidation("coordinate indices start at 0")

    @property
    def in_role(self) -> str:
        return A_ROLE if self.orientation == FORWARD else B_ROLE

    @property
    def out_role(self) -> str:
        return B_ROLE if self.orientation == FORWARD else A_ROLE

    def flipped(self) -> "HopSpec":
        return replace(self, orientation=MIRRORED if self.orientation == FORWARD else FORWARD)

    def label(self) -> str:
        sign = "-" if self.orientation == MIRRORED else ""
        return f"{sign}{conduit_name(self.conduit)}^{self.coord}"


@dataclass(frozen=True)
class CircularSpec:
    hops: tuple[HopSpec, ...]
    topology: str = CYCLE
    clique_parts: Optional[tuple[int, ...]] = None
    dualities: Mapping[int, DualityMap] = field(default_factory=dict)
    unfolded: Optional[int] = None
    base_hops: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if self.topology not in (CYCLE, PATH):
            raise SpecValidation(f"topology must be cycle or path, not {self.topology!r}")
        if not self.hops:
            raise SpecValidation("a spec needs at least one hop")

    @property
    def parts(self) -> int:
        return len(self.hops) + (1 if self.topology == PATH else 0)

    @property
    def coords(self) -> int:
        return max(h.coord for h in self.hops) + 1

    def coord_hops(self, c: int) -> list[int]:
        return [k for k, h in enumerate(self.hops) if h.coord == c]

    def conduit_of(self, c: int) -> ConduitLike:
        return self.hops[self.coord_hops(c)[0]].conduit

    def label(self) -> str:
        body = ", ".join(h.label() for h in self.hops)
        if self.topology == PATH:
            return f"path({body})"
        return f"({body})"


def conduit_name(c: ConduitLike) -> str:
    return str(c) if isinstance(c, ConduitRef) else c.name


def _kind(c: ConduitLike) -> str:
    if isinstance(c, ConduitRef):
        return c.kind
    try:
        return geo.canonical_kind(c.kind)
    except BadParameters:
        return "custom"


@lru_cache(maxsize=None)
def _resolve_ref(ref: ConduitRef) -> BipartiteGraph:
    return ref.build()


def resolve(c: ConduitLike) -> BipartiteGraph:
    return _resolve_ref(c) if isinstance(c, ConduitRef) else c


def conduit_size(c: ConduitLike) -> int:
    if isinstance(c, ConduitRef):
        return geo.part_size(c.kind, c.q)
    return c.n


def conduit_delta(c: ConduitLike) -> int:
    if isinstance(c, ConduitRef):
        return geo.conduit_degree(c.kind, c.q)
    return alg.max_degree(c.graph)


def conduit_tau(c: ConduitLike) -> int:
    kind = _kind(c)
    if kind != "custom":
        return geo.conduit_tau(kind)
    return int(verify_conduit(c, 1).measured_distance)


def conduit_gamma(c: ConduitLike) -> alg.Girth:
    kind = _kind(c)
    if kind != "custom":
        return geo.conduit_girth(kind)
    return alg.girth(c.graph)


_duality_cache: dict[str, Optional[DualityMap]] = {}


def duality_for(c: ConduitLike) -> Optional[DualityMap]:
    """Cached self-duality search (None when the conduit is not self-dual)."""
    if isinstance(c, ConduitRef):
        key = str(c)
        if key not in _duality_cache:
            _duality_cache[key] = find_self_duality(resolve(c))
        return _duality_cache[key]
    return find_self_duality(c)


# -- validation and planning ------------------------------------------------------

@dataclass(frozen=True)
class CoordPlan:
    coord: int
    conduit: ConduitLike
    size: int
    hops: tuple[int, ...]
    conversions: tuple[int, ...]   # hop indices whose input is converted
    mixed: bool
    needs_duality: bool


@dataclass(frozen=True)
class Plan:
    spec: CircularSpec
    coords: tuple[CoordPlan, ...]
    t: int
    girth_floor: int
    clique_parts: tuple[int, ...]
    delta: int

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.coords)

    @property
    def part_size(self) -> int:
        return math.prod(self.dims)

    @property
    def vertices(self) -> int:
        return self.spec.parts * self.part_size

    @property
    def clique_size(self) -> int:
        return len(self.clique_parts) * self.part_size

    @property
    def max_degree_bound(self) -> int:
        return 2 * self.delta

    @property
    def edges(self) -> int:
        return sum(self.part_size * conduit_delta(h.conduit) for h in self.spec.hops)


def _same_conduit(x: ConduitLike, y: ConduitLike) -> bool:
    if isinstance(x, ConduitRef) and isinstance(y, ConduitRef):
        return x == y
    return x is y


def _stored_roles(spec: CircularSpec, c: int) -> dict[int, str]:
    """Role of coordinate c's stored value at the input part of each of its hops."""
    idx = spec.coord_hops(c)
    roles = {}
    for pos, k in enumerate(idx):
        if pos == 0:
            if spec.topology == CYCLE:
                roles[k] = spec.hops[idx[-1]].out_role
            else:
                roles[k] = spec.hops[k].in_role
        else:
            roles[k] = spec.hops[idx[pos - 1]].out_role
    return roles


def _min_gap(spec: CircularSpec) -> float:
    """Fewest hops strictly between two embeddings of the same coordinate."""
    gap = math.inf
    L = len(spec.hops)
    for c in range(spec.coords):
        idx = spec.coord_hops(c)
        for a, b in zip(idx, idx[1:]):
            gap = min(gap, b - a - 1)
        if spec.topology == CYCLE and len(idx) > 1:
            gap = min(gap, L - idx[-1] + idx[0] - 1)
        elif spec.topology == CYCLE and len(idx) == 1:
            gap = min(gap, L - 1)
    return gap


# largest distance between two vertices of one part, and between the parts
SAME_PART_DISTANCE = {geo.PROJECTIVE_PLANE: 2, geo.SYMPLECTIC_QUADRANGLE: 4,
                      geo.SPLIT_CAYLEY_HEXAGON: 6, geo.COMPLETE_BIPARTITE: 2}
CROSS_DISTANCE = {geo.PROJECTIVE_PLANE: 3, geo.SYMPLECTIC_QUADRANGLE: 3,
                  geo.SPLIT_CAYLEY_HEXAGON: 5, geo.COMPLETE_BIPARTITE: 1}


def coord_cost(spec: CircularSpec, c: int) -> int:
    """Walk length needed to rewrite coordinate c between two clique vertices.

    Once around a cycle the value crosses sides iff c has an odd number of
    hops; on a path every hop is walked out and back, so it never crosses.
    """
    kind = _kind(spec.conduit_of(c))
    h = len(spec.coord_hops(c))
    if spec.topology == PATH:
        return max(2 * h, SAME_PART_DISTANCE[kind])
    base = CROSS_DISTANCE[kind] if h % 2 else SAME_PART_DISTANCE[kind]
    return max(h, base)


def intended_t(spec: CircularSpec) -> int:
    return sum(coord_cost(spec, c) for c in range(spec.coords))


def girth_floor(spec: CircularSpec) -> int:
    """Lower bound on the girth promised by the construction.

    min(parts on the cycle, cap, min conduit girth) with cap 8 when embeddings
    of one coordinate are at least two hops apart, 6 when one apart and 4 when
    adjacent; any projective-plane coordinate caps the bound at 6.
    """
    gap = _min_gap(spec)
    cap = 8 if gap >= 2 else (6 if gap == 1 else 4)
    kinds = {_kind(spec.conduit_of(c)) for c in range(spec.coords)}
    if geo.PROJECTIVE_PLANE in kinds:
        cap = min(cap, 6)
    gammas = [conduit_gamma(spec.conduit_of(c)) for c in range(spec.coords)]
    terms = [cap, min(gammas)]
    if spec.topology == CYCLE:
        terms.append(spec.parts)
    return int(min(terms))


def plan(spec: CircularSpec) -> Plan:
    """Validate a spec and work out the conversions it needs."""
    C = spec.coords
    coords = []
    plane_coords = 0
    for c in range(C):
        idx = spec.coord_hops(c)
        if not idx:
            raise SpecValidation(f"coordinate {c} is not touched by any hop")
        first = spec.hops[idx[0]].conduit
        for k in idx[1:]:
            if not _same_conduit(first, spec.hops[k].conduit):
                raise SpecValidation(f"coordinate {c} uses different conduits")
        bg_balanced = conduit_size(first)
        if not isinstance(first, ConduitRef) and not first.balanced:
            raise SpecValidation(f"conduit on coordinate {c} is not balanced")
        roles = _stored_roles(spec, c)
        conversions = tuple(k for k in idx if roles[k] != spec.hops[k].in_role)
        mixed = len({spec.hops[k].orientation for k in idx}) > 1
        needs = bool(conversions) and mixed
        if _kind(first) == geo.PROJECTIVE_PLANE:
            plane_coords += 1
        coords.append(CoordPlan(c, first, bg_balanced, tuple(idx), conversions, mixed, needs))

    if spec.topology == CYCLE:
        if C < 2:
            raise SpecValidation("a cycle construction needs at least two coordinates")
        if plane_coords == 1 and C < 3:
            raise SpecValidation("with a single projective-plane coordinate at least three "
                                 "coordinates are needed")
    else:
        if len(spec.hops) < 1:
            raise SpecValidation("a path construction needs at least one hop")

    deltas = {conduit_delta(cp.conduit) for cp in coords}
    delta = max(deltas)
    parts = spec.parts
    if spec.clique_parts is not None:
        clique = tuple(spec.clique_parts)
        if any(p < 0 or p >= parts for p in clique):
            raise SpecValidation("clique part out of range")
    elif spec.topology == PATH:
        clique = (1,) if parts > 2 else (0,)
    else:
        clique = (0,)
    return Plan(spec, tuple(coords), intended_t(spec), girth_floor(spec), clique, delta)


def _dualities(p: Plan) -> dict[int, DualityMap]:
    out = {}
    for cp in p.coords:
        if not cp.needs_duality:
            continue
        given = p.spec.dualities.get(cp.coord)
        if given is not None:
            if not given.verified:
                raise SpecValidation(f"duality for coordinate {cp.coord} is not verified")
            out[cp.coord] = given
            continue
        found = duality_for(cp.conduit)
        if found is None:
            raise SpecValidation(
                f"coordinate {cp.coord} ({conduit_name(cp.conduit)}) returns with swapped role "
                "and mixed orientations, which needs a self-duality, but none exists")
        out[cp.coord] = found
    return out


# -- materialisation ----------------------------------------------------------------

@dataclass(frozen=True)
class CircularBuild:
    graph: Graph
    plan: Plan
    girth_floor: int

    @property
    def clique(self) -> np.ndarray:
        return clique_vertices(self.plan)


def clique_vertices(p: Plan) -> np.ndarray:
    N = p.part_size
    return np.concatenate([np.arange(k * N, (k + 1) * N, dtype=np.int64) for k in p.clique_parts])


def _template(h: BipartiteGraph, hop: HopSpec, convert: Optional[str],
              duality: Optional[DualityMap]) -> np.ndarray:
    """(stored input value, output value) pairs for one hop."""
    e = h.index_edges()
    pairs = e if hop.orientation == FORWARD else e[:, ::-1]
    if convert is None:
        return pairs.copy()
    n = h.n
    if duality is None:
        return pairs.copy()
    if hop.in_role == A_ROLE:
        # stored B-index x reads as a_{rho[x]}
        conv = np.asarray(duality.rho, dtype=np.int64)
    else:
        # stored A-index x reads as b_{sigma[x]}
        conv = np.asarray(duality.sigma, dtype=np.int64)
    inv = np.empty(n, dtype=np.int64)
    inv[conv] = np.arange(n)
    out = pairs.copy()
    out[:, 0] = inv[pairs[:, 0]]
    return out


def circular_construct(spec: CircularSpec, max_edges: Optional[int] = None) -> CircularBuild:
    """Materialise a spec; returns the graph and its declared girth floor."""
    p = plan(spec)
    budget = alg.edge_budget() if max_edges is None else max_edges
    if p.edges > budget:
        raise ResourceLimit(f"construction would have {p.edges} edges, above the budget of {budget}")
    duals = _dualities(p)
    dims = p.dims
    C = len(dims)
    N = p.part_size
    strides = [math.prod(dims[c + 1:]) for c in range(C)]
    parts = spec.parts
    blocks = []
    for k, hop in enumerate(spec.hops):
        c = hop.coord
        cp = p.coords[c]
        h = resolve(cp.conduit)
        convert = "yes" if k in cp.conversions else None
        tpl = _template(h, hop, convert, duals.get(c))
        n_c, s_c = dims[c], strides[c]
        # offsets of all tuples with coordinate c = 0
        idx = np.arange(N // n_c, dtype=np.int64)
        rest = (idx // s_c) * (s_c * n_c) + (idx % s_c)
        src_part, dst_part = k, (k + 1) % parts
        u = src_part * N + rest[:, None] + tpl[:, 0][None, :] * s_c
        v = dst_part * N + rest[:, None] + tpl[:, 1][None, :] * s_c
        blocks.append(np.stack([u.ravel(), v.ravel()], axis=1))
    part_tags = np.repeat(np.arange(parts, dtype=np.int64), N)
    g = Graph.from_edges(parts * N, np.concatenate(blocks), parts=part_tags)
    g = g.with_meta(construction="circular", spec=spec.label(), t=p.t, girth_floor=p.girth_floor)
    return CircularBuild(g, p, p.girth_floor)


def path_construct(spec: CircularSpec, max_edges: Optional[int] = None) -> CircularBuild:
    if spec.topology != PATH:
        raise SpecValidation("path_construct needs topology=path")
    return circular_construct(spec, max_edges)


def unfold(spec: CircularSpec, copies: int) -> CircularSpec:
    """Repeat the hop sequence `copies` times, mirroring every other copy.

    Coordinate i's embeddings land at positions i, i+L, i+2L, ... where L is
    the original hop count; the designated clique becomes U^(0), U^(L), ...
    """
    if copies not in (3, 5):
        raise SpecValidation("unfolding uses 3 or 5 copies")
    if spec.topology != CYCLE:
        raise SpecValidation("only cycle specs can be unfolded")
    base = len(spec.hops)
    dualities = dict(spec.dualities)
    for c in range(spec.coords):
        if c in dualities:
            continue
        conduit = spec.conduit_of(c)
        found = duality_for(conduit)
        if found is None:
            raise SelfDualityRequired(f"{conduit_name(conduit)} is not self-dual; "
                                      "unfolding needs a self-duality for every coordinate")
        dualities[c] = found
    hops = []
    for k in range(copies):
        for h in spec.hops:
            hops.append(h.flipped() if k % 2 else h)
    return CircularSpec(tuple(hops), CYCLE, tuple(base * k for k in range(copies)),
                        dualities, copies, base)


# -- Hamming and De Bruijn circular graphs -----------------------------------------

def _check_td(t: int, d: int) -> None:
    if t < 2 or d < 2 or d % 2:
        raise BadParameters("need t >= 2 and even d >= 2")


def hamming_circular(t: int, d: int) -> Graph:
    """t parts of [d/2]^t; hop i rewrites coordinate i freely."""
    _check_td(t, d)
    k = d // 2
    K = geo.complete_bipartite_conduit(k)
    spec = CircularSpec(tuple(HopSpec(K, i) for i in range(t)), CYCLE)
    build = circular_construct(spec)
    return build.graph.with_meta(construction="hamming_circular", t=t, d=d)


def debruijn_circular(t: int, d: int) -> Graph:
    """t parts of [d/2]^t; hop i joins x to its left shifts with a new last symbol."""
    _check_td(t, d)
    k = d // 2
    N = k**t
    x = np.arange(N, dtype=np.int64)
    shifted = (x % (N // k)) * k
    blocks = []
    for i in range(t):
        j = (i + 1) % t
        for s in range(k):
            blocks.append(np.stack([i * N + x, j * N + shifted + s], axis=1))
    parts = np.repeat(np.arange(t), N)
    g = Graph.from_edges(t * N, np.concatenate(blocks), parts=parts)
    return g.with_meta(construction="debruijn_circular", t=t, d=d)


def debruijn_graph(t: int, k: int) -> Graph:
    """Undirected loopless De Bruijn graph on words of length t over k symbols."""
    if t < 1 or k < 1:
        raise BadParameters("need t >= 1 and k >= 1")
    N = k**t
    x = np.arange(N, dtype=np.int64)
    shifted = (x % (N // k)) * k
    edges = np.concatenate([np.stack([x, shifted + s], axis=1) for s in range(k)])
    return Graph.from_edges(N, edges).with_meta(construction="debruijn", t=t, k=k)


def word(index: int, t: int, k: int) -> tuple[int, ...]:
    return tuple((index // k**(t - 1 - j)) % k for j in range(t))


# -- JSON ----------------------------------------------------------------------------

def hop_from_dict(d: Mapping[str, Any], q_default: Optional[int] = None) -> HopSpec:
    conduit = d.get("conduit", {})
    q = conduit.get("q", q_default)
    if q is None:
        raise SpecValidation("hop conduit needs q")
    return HopSpec(ConduitRef(conduit["kind"], int(q)), int(d["coord"]),
                   d.get("orientation", FORWARD))


def spec_from_dict(d: Mapping[str, Any], q: Optional[int] = None) -> CircularSpec:
    """Parse the JSON spec format; `unfold` is applied when present."""
    try:
        hops = tuple(hop_from_dict(h, q) for h in d["hops"])
    except (KeyError, TypeError) as exc:
        raise SpecValidation(f"malformed spec: {exc}") from None
    expected = d.get("expected", {}) or {}
    clique = expected.get("clique", {}) or {}
    spec = CircularSpec(hops, d.get("topology", CYCLE),
                        tuple(clique["parts"]) if "parts" in clique and not d.get("unfold") else None)
    if d.get("unfold"):
        spec = unfold(spec, int(d["unfold"]["copies"]))
    return spec


def spec_to_dict(spec: CircularSpec) -> dict:
    if spec.unfolded:
        base = spec.hops[:spec.base_hops]
        out = {"topology": spec.topology,
               "hops": [_hop_dict(h) for h in base],
               "unfold": {"copies": spec.unfolded}}
    else:
        out = {"topology": spec.topology, "hops": [_hop_dict(h) for h in spec.hops]}
    p = plan(spec)
    out["expected"] = {"t": p.t, "girth_floor": p.girth_floor,
                       "clique": {"parts": list(p.clique_parts), "size": p.clique_size}}
    return out


def _hop_dict(h: HopSpec) -> dict:
    if not isinstance(h.conduit, ConduitRef):
        raise SpecValidation("only geometry conduits can be serialized")
    return {"conduit": h.conduit.to_dict(), "coord": h.coord, "orientation": h.orientation}


def spec_json(spec: CircularSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True)
