"""DIMACS-style graph files and their JSON sidecars."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import GraphParseError
from .graph import Graph

PathLike = Union[str, Path]
SIDECAR_SUFFIX = ".meta.json"


def format_dimacs(g: Graph) -> str:
    e = g.edges()
    lines = [f"p edge {g.n} {len(e)}"]
    for k in sorted(g.meta):
        v = str(g.meta[k]).replace("\n", " ")
        if "=" in k or not k or any(c.isspace() for c in k):
            raise ValueError(f"metadata key {k!r} cannot be written")
        lines.append(f"c {k}={v}".rstrip())
    if len(e):
        body = np.char.add(np.char.add("e ", (e[:, 0] + 1).astype(str)),
                           np.char.add(" ", (e[:, 1] + 1).astype(str)))
        lines.extend(body.tolist())
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    n = m = None
    meta: dict[str, str] = {}
    us: list[int] = []
    vs: list[int] = []
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        tag = line.split(None, 1)[0]
        if tag == "c":
            body = line[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                meta[k.strip()] = v
            continue
        tok = line.split()
        if tag == "p":
            if n is not None or len(tok) != 4 or tok[1] not in ("edge", "edges", "col"):
                raise GraphParseError(f"line {lineno}: bad problem line")
            n, m = _int(tok[2], lineno), _int(tok[3], lineno)
        elif tag == "e":
            if n is None:
                raise GraphParseError(f"line {lineno}: edge before problem line")
            if len(tok) != 3:
                raise GraphParseError(f"line {lineno}: expected 'e u v'")
            u, v = _int(tok[1], lineno), _int(tok[2], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(f"line {lineno}: endpoint out of range 1..{n}")
            if u == v:
                raise GraphParseError(f"line {lineno}: loop at {u}")
            us.append(u - 1)
            vs.append(v - 1)
        else:
            raise GraphParseError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise GraphParseError("missing problem line")
    edges = np.stack([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)], axis=1) \
        if us else np.zeros((0, 2), dtype=np.int64)
    g = Graph.from_edges(n, edges, meta=meta)
    if g.m != m:
        raise GraphParseError(f"header declares {m} edges, file has {g.m} distinct edges")
    return g


def _int(tok: str, lineno: int) -> int:
    try:
        x = int(tok)
    except ValueError:
        raise GraphParseError(f"line {lineno}: {tok!r} is not an integer") from None
    if x < 0:
        raise GraphParseError(f"line {lineno}: negative value")
    return x


def sidecar_path(path: PathLike) -> Path:
    p = Path(path)
    return p.with_name(p.stem + SIDECAR_SUFFIX) if p.suffix else p.with_name(p.name + SIDECAR_SUFFIX)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_graph(path: PathLike, g: Graph, sidecar: Optional[dict] = None) -> None:
    p = Path(path)
    with open(p, "w", newline="\n", encoding="ascii") as fh:
        fh.write(format_dimacs(g))
    if sidecar is not None:
        with open(sidecar_path(p), "w", newline="\n", encoding="utf-8") as fh:
            fh.write(dump_json(sidecar))


def read_graph(path: PathLike) -> Graph:
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise GraphParseError(f"{path}: not ASCII") from None
    return parse_dimacs(text)


def read_sidecar(path: PathLike) -> Optional[dict]:
    sp = sidecar_path(path)
    if not sp.exists():
        return None
    try:
        return json.loads(sp.read_text(encoding="utf-8"))
    except json.JSONDecodeError as ex:
        raise GraphParseError(f"{sp}: {ex}") from None


def format_edgelist(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges().tolist())


def format_json(g: Graph) -> str:
    return dump_json({"n": g.n, "edges": g.edges().tolist(), "meta": dict(g.meta)})


def format_dot(g: Graph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(g.n) if g.degree(v) == 0]
    lines += [f"  {u} -- {v};" for u, v in g.edges().tolist()]
    return "\n".join(lines + ["}"]) + "\n"


EXPORTERS = {"dimacs": format_dimacs, "edgelist": format_edgelist, "json": format_json,
             "dot": format_dot}
