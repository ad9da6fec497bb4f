"""Command-line entry point: generate, verify, analyze, catalog, power, export."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import algorithms as alg
from . import analysis as an
from . import geometry as geo
from .catalog import catalog_entry, load_catalog
from .circular import (CROSS_DISTANCE, circular_construct, debruijn_circular, debruijn_graph,
                       hamming_circular, plan, spec_from_dict, spec_to_dict)
from .conduit import conduit_cycle, find_perfect_matching, find_self_duality, matching_contraction
from .errors import GirthforgeError, GraphParseError, SpecValidation
from .expectations import CliqueExpectation, Expectations, evaluate
from .graph import BipartiteGraph, Graph
from .io import EXPORTERS, dump_json, read_graph, read_sidecar, write_graph

EXIT_OK, EXIT_FAIL, EXIT_RESOURCE, EXIT_IO, EXIT_PARSE = 0, 1, 2, 3, 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="girthforge",
                                description="Extremal graph powers: constructions and certificates.")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a graph and write it with its sidecar")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog", metavar="ID", help="catalog row id, e.g. t3-g4")
    src.add_argument("--lookup", action="store_true", help="catalog row chosen by --t and --girth")
    src.add_argument("--hamming-circular", action="store_true")
    src.add_argument("--debruijn-circular", action="store_true")
    src.add_argument("--debruijn", action="store_true", help="plain De Bruijn graph (--t, --k)")
    src.add_argument("--conduit", metavar="KIND", help="incidence graph P, Q, H or K")
    src.add_argument("--conduit-cycle", metavar="KIND")
    src.add_argument("--contraction", metavar="KIND")
    src.add_argument("--spec", metavar="FILE", help="circular construction JSON")
    g.add_argument("--q", type=int)
    g.add_argument("--q-hex", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--tau", type=int, default=3)
    g.add_argument("--girth", type=int, help="target girth for --lookup")
    g.add_argument("--factor", type=int, choices=(3, 5), help="prefer this unfolding for --lookup")
    g.add_argument("--describe", action="store_true",
                   help="print the catalog descriptor without building")
    g.add_argument("-o", "--output", help="graph file (DIMACS)")

    v = sub.add_parser("verify", help="check a graph file against its expectations")
    v.add_argument("graph")
    v.add_argument("--expect", help="expectations as JSON text or a file, overriding the sidecar")
    v.add_argument("--report", help="also write the JSON report here")

    a = sub.add_parser("analyze", help="BFS-layer analysis of a graph file")
    a.add_argument("graph")
    a.add_argument("--t", type=int)
    a.add_argument("--d", type=int)
    a.add_argument("--roots", default="all", help="all | sample:N")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--forbidden-lengths", help="comma-separated cycle lengths to search for")
    a.add_argument("--no-density", action="store_true")
    a.add_argument("--report")
    a.add_argument("--json", action="store_true", help="print JSON instead of a table")

    c = sub.add_parser("catalog", help="list the construction catalog")
    c.add_argument("--json", action="store_true")
    c.add_argument("--id")

    pw = sub.add_parser("power", help="t-th power of a graph file and a greedy colouring")
    pw.add_argument("graph")
    pw.add_argument("--t", type=int, required=True)
    pw.add_argument("--order", choices=("natural", "degeneracy"), default="natural")
    pw.add_argument("-o", "--output", help="write the power graph here")

    e = sub.add_parser("export", help="convert a graph file")
    e.add_argument("graph")
    e.add_argument("--format", choices=sorted(EXPORTERS), default="edgelist")
    e.add_argument("-o", "--output")
    return p


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise SpecValidation("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _circular_expectations(t: int, d: int, parts: int) -> Expectations:
    N = (d // 2) ** t
    return Expectations(vertices=parts * N, max_degree=d, bipartite=(t % 2 == 0),
                        clique=CliqueExpectation(t, ((0, N),), N))


def _build(args) -> tuple[Graph, dict]:
    """(graph, sidecar) for the generate command."""
    side: dict = {}
    if args.catalog or args.lookup:
        if args.lookup:
            _need(args, "t", "girth")
        inst = catalog_entry(t=args.t, target_girth=args.girth, q=args.q, q_hex=args.q_hex,
                             row_id=args.catalog, factor=args.factor)
        side["construction"] = {"catalog": inst.row.id, **inst.params}
        if inst.spec is not None:
            side["spec"] = spec_to_dict(inst.spec)
        side["expected"] = inst.expectations.to_dict()
        if args.describe:
            return None, inst.descriptor()
        g = inst.build()
    elif args.hamming_circular or args.debruijn_circular:
        _need(args, "t", "d")
        fn = hamming_circular if args.hamming_circular else debruijn_circular
        g = fn(args.t, args.d)
        side["construction"] = {"type": g.meta["construction"], "t": args.t, "d": args.d}
        side["expected"] = _circular_expectations(args.t, args.d, args.t).to_dict()
    elif args.debruijn:
        _need(args, "t", "k")
        g = debruijn_graph(args.t, args.k)
        side["construction"] = {"type": "debruijn", "t": args.t, "k": args.k}
        side["expected"] = Expectations(vertices=args.k**args.t, max_degree=2 * args.k).to_dict()
    elif args.conduit:
        _need(args, "q")
        h = geo.conduit(args.conduit, args.q)
        kind = geo.canonical_kind(args.conduit)
        tau, n = CROSS_DISTANCE[kind], geo.part_size(kind, args.q)
        g = h.graph.with_meta(construction="incidence", kind=kind, q=args.q, part_sizes=f"{n},{n}")
        side["construction"] = {"type": "incidence", "kind": kind, "q": args.q}
        side["bipartite"] = {"a": h.a.tolist(), "b": h.b.tolist()}
        side["expected"] = Expectations(vertices=2 * n, regular=geo.conduit_degree(kind, args.q),
                                        girth_exact=geo.conduit_girth(kind), bipartite=True,
                                        conduit_tau=tau).to_dict()
    elif args.conduit_cycle:
        _need(args, "q")
        h = geo.conduit(args.conduit_cycle, args.q)
        d = find_self_duality(h)
        if d is None:
            raise SpecValidation(f"{h.name} is not self-dual")
        g = conduit_cycle(h, d, args.tau)
        n, delta = len(h.a), alg.max_degree(h.graph)
        side["construction"] = {"type": "conduit_cycle", "kind": h.kind, "q": args.q, "tau": args.tau,
                                "sigma": [int(x) for x in d.sigma]}
        side["expected"] = Expectations(vertices=args.tau * n, regular=2 * delta,
                                        bipartite=False,
                                        clique=CliqueExpectation(args.tau, ((0, args.tau * n),),
                                                                 args.tau * n)).to_dict()
    elif args.contraction:
        _need(args, "q")
        h = geo.conduit(args.contraction, args.q)
        g = matching_contraction(find_perfect_matching(h))
        kind = geo.canonical_kind(args.contraction)
        tau, n = geo.conduit_tau(kind), len(h.a)
        side["construction"] = {"type": "matching_contraction", "kind": kind, "q": args.q}
        side["expected"] = Expectations(vertices=n, max_degree=2 * alg.max_degree(h.graph) - 2,
                                        clique=CliqueExpectation(tau, ((0, n),), n)).to_dict()
    else:
        raw = json.loads(Path(args.spec).read_text())
        spec = spec_from_dict(raw, args.q)
        p = plan(spec)
        g = circular_construct(spec).graph
        N = p.part_size
        side["construction"] = {"type": "circular"}
        side["spec"] = spec_to_dict(spec)
        side["expected"] = Expectations(
            vertices=p.vertices, max_degree=p.max_degree_bound, girth_min=p.girth_floor,
            bipartite=(p.t % 2 == 0),
            clique=CliqueExpectation(p.t, tuple((k * N, (k + 1) * N) for k in p.clique_parts),
                                     p.clique_size)).to_dict()
    side["meta"] = dict(g.meta)
    return g, side


def cmd_generate(args) -> int:
    if args.output is None and not args.describe:
        raise SpecValidation("generate needs -o/--output")
    g, side = _build(args)
    if g is None:
        sys.stdout.write(dump_json(side))
        return EXIT_OK
    write_graph(args.output, g, side)
    sys.stdout.write(dump_json({"output": str(args.output), "vertices": g.n, "edges": g.m}))
    return EXIT_OK


def _load_expect(text: Optional[str]) -> Optional[dict]:
    if text is None:
        return None
    p = Path(text)
    if not text.lstrip().startswith("{") and p.exists():
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise SpecValidation(f"--expect: {ex}") from None


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    side = read_sidecar(args.graph) or {}
    override = _load_expect(args.expect)
    exp = Expectations.from_dict(override if override is not None else side.get("expected"))
    bip = None
    if "bipartite" in side:
        bip = BipartiteGraph(g, np.asarray(side["bipartite"]["a"]), np.asarray(side["bipartite"]["b"]))
    result = evaluate(g, exp, bip)
    report = {
        "graph": {"vertices": g.n, "edges": g.m, "max_degree": alg.max_degree(g),
                  "min_degree": alg.min_degree(g)},
        "meta_matches_sidecar": (side.get("meta") == dict(g.meta)) if "meta" in side else None,
        **result,
    }
    text = dump_json(report)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_OK if result["pass"] else EXIT_FAIL


def _roots(spec: str, n: int, seed: int) -> Optional[list[int]]:
    if spec == "all":
        return None
    if spec.startswith("sample:"):
        return an.sample_roots(n, int(spec.split(":", 1)[1]), seed)
    raise SpecValidation(f"--roots must be 'all' or 'sample:N', not {spec!r}")


def cmd_analyze(args) -> int:
    g = read_graph(args.graph)
    out: dict = {"vertices": g.n, "edges": g.m}
    ok = True
    if args.forbidden_lengths:
        lengths = [int(x) for x in args.forbidden_lengths.split(",") if x.strip()]
        found = alg.forbidden_cycles(g, lengths)
        out["forbidden_cycles"] = {str(k): (list(v.witness) if v.witness is not None else None)
                                   for k, v in sorted(found.items())}
        ok = all(v.witness is None for v in found.values())
    if args.t is not None:
        rep = an.analyze(g, args.t, _roots(args.roots, g.n, args.seed), args.d,
                         density=not args.no_density and g.n <= an.DENSITY_MAX_VERTICES)
        out["analysis"] = rep.to_dict()
        ok = ok and rep.passed
    out["pass"] = ok
    text = dump_json(out)
    if args.report:
        Path(args.report).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        sys.stdout.write(_analysis_table(out))
    return EXIT_OK if ok else EXIT_FAIL


def _analysis_table(out: dict) -> str:
    lines = [f"graph: {out['vertices']} vertices, {out['edges']} edges"]
    for k, w in out.get("forbidden_cycles", {}).items():
        lines.append(f"cycle length {k}: " + ("absent" if w is None else "found " + " ".join(map(str, w))))
    rep = out.get("analysis")
    if rep:
        h = rep["hypothesis"]
        lines.append(f"t={rep['t']} d={rep['d']} forbidden {h['forbidden_lengths']}: "
                     + ("hypothesis holds" if h["holds"] else "hypothesis fails"))
        lines.append(f"{'root':>6} {'layers':<28} {'type1':>6} {'type2':>6} {'type3':>6}  claims")
        for r in rep["roots"]:
            cl = "ok" if r["claim1_witness"] is None and r["claim2_witness"] is None else "WITNESS"
            b = r["bottlenecks"]
            lines.append(f"{r['root']:>6} {str(r['layer_sizes']):<28} {b[0]:>6} {b[1]:>6} {b[2]:>6}  {cl}")
        if rep["density"]:
            dn = rep["density"]
            lines.append(f"neighbourhood density in G^{dn['t']}: {dn['max_edges']} <= {dn['bound']}: "
                         f"{dn['within_bound']}")
    lines.append("PASS" if out["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def cmd_catalog(args) -> int:
    rows = load_catalog()
    if args.id:
        rows = tuple(r for r in rows if r.id == args.id)
        if not rows:
            from .errors import NoSuchEntry

            raise NoSuchEntry(f"no catalog row {args.id!r}")
    if args.json:
        sys.stdout.write(dump_json([r.describe() for r in rows]))
        return EXIT_OK
    for r in rows:
        req = ", ".join(f"{k}: {v}" for k, v in sorted(r.requires.items()))
        sys.stdout.write(f"{r.row:>2}  {r.id:<10} t={r.t!s:<9} girth>={r.girth:<3} {r.bound}\n"
                         f"    {r.summary}\n    requires {req}; vertices {r.expected['vertices']}, "
                         f"max degree {r.expected['max_degree']}, clique {r.expected['clique']['size']}\n")
    return EXIT_OK


def cmd_power(args) -> int:
    g = read_graph(args.graph)
    gt = alg.power(g, args.t)
    _, colors = alg.greedy_color(gt, args.order)
    d = alg.max_degree(g)
    report = {"t": args.t, "vertices": gt.n, "edges": gt.m, "max_degree": d,
              "power_max_degree": alg.max_degree(gt), "greedy_colors": colors,
              "trivial_upper_bound": alg.trivial_upper_bound(d, args.t) if d else 1}
    side = read_sidecar(args.graph) or {}
    clique = Expectations.from_dict(side.get("expected")).clique
    if clique is not None and clique.t == args.t:
        cert = alg.verify_clique_in_power(g, args.t, clique.vertices())
        report["clique_lower_bound"] = cert.size if cert.verified else None
    if args.output:
        write_graph(args.output, gt.with_meta(power=args.t))
    sys.stdout.write(dump_json(report))
    return EXIT_OK


def cmd_export(args) -> int:
    g = read_graph(args.graph)
    text = EXPORTERS[args.format](g)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "analyze": cmd_analyze,
            "catalog": cmd_catalog, "power": cmd_power, "export": cmd_export}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise SpecValidation("--threads must be positive")
            import numba

            numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
        return COMMANDS[args.command](args)
    except GraphParseError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_PARSE
    except GirthforgeError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return ex.exit_code
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
