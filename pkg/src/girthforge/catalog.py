"""The table of constructions behind the lower bounds, shipped as JSON rows.

Each row names a construction, the field-order constraints it needs and its
expected properties.  Expected numbers are computed here from closed-form
conduit sizes, never read off a built graph.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

from . import geometry as geo
from .circular import (CYCLE, CircularSpec, ConduitRef, HopSpec, circular_construct, plan,
                       spec_from_dict, unfold)
from .conduit import conduit_cycle, find_perfect_matching, find_self_duality, matching_contraction
from .errors import NoSuchEntry, NotPrimePower, SpecValidation, WrongFieldCharacteristic
from .expectations import CliqueExpectation, Expectations
from .field import is_power_of, is_prime_power
from .graph import Graph


@dataclass(frozen=True)
class CatalogRow:
    id: str
    row: int
    t: Any
    girth: int
    factor: int
    bound: str
    summary: str
    construction: dict
    requires: dict
    smallest: dict
    check: str
    expected: dict
    notes: str = ""

    def describe(self) -> dict:
        return {
            "id": self.id, "row": self.row, "t": self.t, "girth": self.girth,
            "bound": self.bound, "construction": self.summary,
            "requires": self.requires, "sizes": self.expected, "check": self.check,
        }


@lru_cache(maxsize=None)
def load_catalog() -> tuple[CatalogRow, ...]:
    pkg = resources.files("girthforge") / "data" / "catalog"
    rows = []
    for item in pkg.iterdir():
        if item.name.endswith(".json"):
            rows.append(CatalogRow(**json.loads(item.read_text())))
    return tuple(sorted(rows, key=lambda r: r.row))


def get_row(row_id: str) -> CatalogRow:
    for r in load_catalog():
        if r.id == row_id:
            return r
    raise NoSuchEntry(f"no catalog row {row_id!r}")


def _t_fits(row: CatalogRow, t: int) -> bool:
    if isinstance(row.t, int):
        return row.t == t
    if row.id == "tN-g8-x3":
        return t == 9 or t >= 11
    if row.id == "tN-g8-x5":
        return t >= 15 and t % 5 == 0
    return False


def find_row(t: int, girth: int, factor: Optional[int] = None) -> CatalogRow:
    """Row for (t, girth); for t that several rows cover, the factor-3 row unless factor=5."""
    hits = [r for r in load_catalog() if r.girth == girth and _t_fits(r, t)]
    if factor is not None:
        hits = [r for r in hits if r.factor == factor]
    if not hits:
        raise NoSuchEntry(f"no construction for t={t}, girth {girth}")
    return hits[0]


def decompose(t: int, terms: tuple[int, ...], min_terms: int = 3) -> list[int]:
    """Fewest terms from `terms` (at least min_terms) summing to t; smaller terms first."""
    for count in range(min_terms, t + 1):
        best = None
        for combo in _multisets(sorted(terms), count):
            if sum(combo) == t:
                best = combo
                break
        if best is not None:
            return list(best)
    raise NoSuchEntry(f"t={t} is not a sum of at least {min_terms} terms from {terms}")


def _multisets(terms, count):
    if count == 0:
        yield ()
        return
    for i, x in enumerate(terms):
        for rest in _multisets(terms[i:], count - 1):
            yield (x,) + rest


def _check_param(name: str, value: Optional[int], rule: str) -> int:
    if value is None:
        raise SpecValidation(f"parameter {name} is required")
    if not is_prime_power(value):
        raise NotPrimePower(f"{name}={value} is not a prime power")
    if rule == "power_of_2" and not is_power_of(value, 2):
        raise WrongFieldCharacteristic(f"{name}={value} must be a power of 2 (self-duality)")
    if rule == "power_of_3" and not is_power_of(value, 3):
        raise WrongFieldCharacteristic(f"{name}={value} must be a power of 3 (self-duality)")
    return int(value)


@dataclass(frozen=True)
class CatalogInstance:
    row: CatalogRow
    params: dict
    t: int
    expectations: Expectations
    spec: Optional[CircularSpec] = None

    @property
    def vertices(self) -> int:
        return int(self.expectations.vertices)

    @property
    def clique_size(self) -> int:
        return self.expectations.clique.size

    def descriptor(self) -> dict:
        out = {"row": self.row.id, "params": self.params, "t": self.t,
               "construction": self.row.summary, "expected": self.expectations.to_dict()}
        if self.spec is not None:
            out["spec"] = self.spec.label()
        return out

    def build(self) -> Graph:
        kind = self.row.construction["type"]
        q = self.params.get("q")
        if kind == "incidence":
            g = geo.conduit(self.row.construction["conduit"], q).graph
        elif kind == "matching_contraction":
            h = geo.conduit(self.row.construction["conduit"], q)
            g = matching_contraction(find_perfect_matching(h))
        elif kind == "conduit_cycle":
            h = geo.conduit(self.row.construction["conduit"], q)
            d = find_self_duality(h)
            if d is None:
                raise SpecValidation(f"{h.name} is not self-dual")
            g = conduit_cycle(h, d, self.row.construction["tau"])
        else:
            g = circular_construct(self.spec).graph
        meta = {"catalog": self.row.id, "t": self.t}
        meta.update({k: v for k, v in self.params.items()})
        return g.with_meta(**meta)


def catalog_entry(t: Optional[int] = None, target_girth: Optional[int] = None,
                  q: Optional[int] = None, q_hex: Optional[int] = None,
                  row_id: Optional[str] = None, factor: Optional[int] = None) -> CatalogInstance:
    """Resolve a row (by id, or by t and girth) and its parameters into an instance."""
    if row_id is not None:
        row = get_row(row_id)
        if t is None and isinstance(row.t, int):
            t = row.t
        if t is None:
            t = row.smallest["t"]
        if not _t_fits(row, t):
            raise NoSuchEntry(f"row {row.id} does not cover t={t}")
    else:
        if t is None or target_girth is None:
            raise NoSuchEntry("give a row id or both t and girth")
        row = find_row(t, target_girth, factor)
    ctype = row.construction["type"]
    if ctype == "decomposition":
        terms = tuple(int(x) for x in row.construction["terms"])
        parts = decompose(t, terms)
        if 3 in parts:
            q = _check_param("q", q, row.requires["q"])
        if 5 in parts:
            if q_hex is None and row.requires.get("q_hex") is None:
                q_hex = q
            q_hex = _check_param("q_hex" if "q_hex" in row.requires else "q",
                                 q_hex if "q_hex" in row.requires else q,
                                 row.requires.get("q_hex", row.requires["q"]))
    else:
        q = _check_param("q", q, row.requires["q"])
        if "q_hex" in row.requires:
            q_hex = _check_param("q_hex", 3 if q_hex is None else q_hex, row.requires["q_hex"])
    params = {"q": q} if q is not None else {}
    if q_hex is not None and ("q_hex" in row.requires):
        params["q_hex"] = q_hex
    if not isinstance(row.t, int):
        params["t"] = t
    return _instance(row, t, params)


def _instance(row: CatalogRow, t: int, params: dict) -> CatalogInstance:
    ctype = row.construction["type"]
    q = params.get("q")
    even = t % 2 == 0
    if ctype in ("incidence", "matching_contraction", "conduit_cycle"):
        kind = row.construction["conduit"]
        n = geo.part_size(kind, q)
        delta = geo.conduit_degree(kind, q)
        if ctype == "incidence":
            exp = Expectations(vertices=2 * n, max_degree=delta, regular=delta, girth_exact=6,
                               bipartite=even, clique=CliqueExpectation(t, ((0, n),), n))
        elif ctype == "matching_contraction":
            gmin = math.ceil(geo.conduit_girth(kind) / 2)
            exp = Expectations(vertices=n, max_degree=2 * delta - 2, girth_min=gmin, bipartite=even,
                               diameter_max=t, clique=CliqueExpectation(t, ((0, n),), n))
        else:
            tau = row.construction["tau"]
            exp = Expectations(vertices=tau * n, max_degree=2 * delta, regular=2 * delta,
                               girth_exact=min(tau, 4), bipartite=even,
                               clique=CliqueExpectation(t, ((0, tau * n),), tau * n))
        return CatalogInstance(row, params, t, exp)

    spec = _spec_for(row, t, params)
    p = plan(spec)
    if p.t != t:
        raise SpecValidation(f"row {row.id} spec sums to t={p.t}, expected {t}")
    N = p.part_size
    ranges = tuple((k * N, (k + 1) * N) for k in p.clique_parts)
    mode = "sampled" if row.check == "sampled" else "full"
    exp = Expectations(vertices=p.vertices, max_degree=p.max_degree_bound,
                       girth_min=row.girth,
                       check_girth=row.check == "full", bipartite=even,
                       clique=CliqueExpectation(t, ranges, p.clique_size, mode))
    return CatalogInstance(row, params, t, exp, spec)


def _spec_for(row: CatalogRow, t: int, params: dict) -> CircularSpec:
    c = row.construction
    if c["type"] == "circular":
        raw = json.loads(json.dumps(c["spec"]))
        for h in raw["hops"]:
            h["conduit"]["q"] = params[h["conduit"]["q"]]
        clique = row.expected.get("clique", {}).get("parts")
        if isinstance(clique, list) and not raw.get("unfold"):
            raw["expected"] = {"clique": {"parts": clique}}
        return spec_from_dict(raw)
    terms = decompose(t, tuple(int(x) for x in c["terms"]))
    hops = []
    for i, tau in enumerate(terms):
        kind = c["kinds"][str(tau)]
        qq = params["q"] if kind == "Q" else params.get("q_hex", params.get("q"))
        hops.append(HopSpec(ConduitRef(kind, qq), i))
    return unfold(CircularSpec(tuple(hops), CYCLE), int(c["copies"]))


def smallest_instance(row: CatalogRow) -> CatalogInstance:
    s = row.smallest
    return catalog_entry(t=s.get("t"), q=s.get("q"), q_hex=s.get("q_hex"), row_id=row.id)
