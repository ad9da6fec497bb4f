"""Expected properties of a generated graph, and their measurement.

Expectations are stored in the JSON sidecar next to a graph file so that
verification needs nothing but the two files.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Optional

import numpy as np

from . import algorithms as alg
from .graph import BipartiteGraph, Graph

SAMPLED_PAIRS = 10**4


@dataclass(frozen=True)
class CliqueExpectation:
    t: int
    ranges: tuple[tuple[int, int], ...]
    size: int
    mode: str = "full"          # "full" certificate or "sampled" pair distances
    samples: int = SAMPLED_PAIRS
    seed: int = 0

    def vertices(self) -> np.ndarray:
        if not self.ranges:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.arange(a, b, dtype=np.int64) for a, b in self.ranges])


@dataclass(frozen=True)
class Expectations:
    vertices: Optional[int] = None
    max_degree: Optional[int] = None
    regular: Optional[int] = None
    girth_min: Optional[int] = None
    girth_exact: Optional[int] = None
    check_girth: bool = True
    bipartite: Optional[bool] = None
    diameter_max: Optional[int] = None
    clique: Optional[CliqueExpectation] = None
    conduit_tau: Optional[int] = None

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None and k != "clique"}
        if self.clique is not None:
            c = asdict(self.clique)
            c["ranges"] = [list(r) for r in self.clique.ranges]
            out["clique"] = c
        return out

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "Expectations":
        if not d:
            return cls()
        d = dict(d)
        clique = d.pop("clique", None)
        known = {f for f in cls.__dataclass_fields__}
        kw = {k: v for k, v in d.items() if k in known}
        if clique is not None:
            clique = dict(clique)
            clique["ranges"] = tuple(tuple(r) for r in clique.get("ranges", ()))
            kw["clique"] = CliqueExpectation(**clique)
        return cls(**kw)


def _g(x):
    return "inf" if x == alg.INFINITE else x


def evaluate(g: Graph, exp: Expectations, bipartite_parts: Optional[BipartiteGraph] = None) -> dict:
    """Measure every property named in exp; returns {"checks": {...}, "pass": bool}."""
    checks: dict[str, dict[str, Any]] = {}

    def record(name, expected, measured, ok):
        checks[name] = {"expected": expected, "measured": _g(measured), "pass": bool(ok)}

    record("vertices", exp.vertices, g.n, exp.vertices is None or g.n == exp.vertices)
    dmax, dmin = alg.max_degree(g), alg.min_degree(g)
    if exp.max_degree is not None:
        record("max_degree", f"<= {exp.max_degree}", dmax, dmax <= exp.max_degree)
    if exp.regular is not None:
        record("regular", exp.regular, [dmin, dmax], dmin == dmax == exp.regular)
    if exp.check_girth and (exp.girth_min is not None or exp.girth_exact is not None):
        gi = alg.girth(g)
        if exp.girth_exact is not None:
            record("girth", exp.girth_exact, gi, gi == exp.girth_exact)
        else:
            record("girth", f">= {exp.girth_min}", gi, gi >= exp.girth_min)
    if exp.bipartite is not None:
        b = alg.is_bipartite(g)
        record("bipartite", exp.bipartite, b.bipartite, b.bipartite == exp.bipartite)
    if exp.diameter_max is not None:
        dm = alg.diameter(g)
        record("diameter", f"<= {exp.diameter_max}", dm, dm <= exp.diameter_max)
    if exp.clique is not None:
        c = exp.clique
        verts = c.vertices()
        if c.mode == "sampled":
            rep = alg.sample_pair_distances(g, verts, c.t, c.samples, c.seed)
            record("clique_sampled", {"t": c.t, "size": c.size, "pairs": c.samples},
                   {"size": len(verts), "max_distance": _g(rep.max_distance),
                    "violations": len(rep.violations)},
                   rep.passed and len(verts) == c.size)
        else:
            cert = alg.verify_clique_in_power(g, c.t, verts)
            record("clique", {"t": c.t, "size": c.size},
                   {"size": cert.size, "verified": cert.verified, "missing_pairs": cert.missing_pairs},
                   cert.verified and cert.size == c.size)
    if exp.conduit_tau is not None and bipartite_parts is not None:
        from .conduit import verify_conduit

        rep = verify_conduit(bipartite_parts, exp.conduit_tau)
        record("conduit", {"tau": exp.conduit_tau}, rep.to_dict(), rep.passed)
    return {"checks": checks, "pass": all(v["pass"] for v in checks.values())}
