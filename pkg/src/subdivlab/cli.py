"""Command-line surface.

Subcommands: gen, count, regularize, density, embed, good-tuples, extremal,
deletion-lb, fit.  Exit codes: 0 success / found, 1 sound negative (not
found, not dense, retries exhausted), 2 input error, 3 resource error.

JSON reports carry ``schema_version`` and serialize every count as a decimal
string so arbitrary-precision integers survive any JSON consumer.  Output is
byte-identical for identical (argv, input files, seed) regardless of the
thread count: the --threads flag (default from SUBDIV_LAB_THREADS) is
accepted for interface parity and never serialized.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import structure
from .density import DensityParams, check_rho_d_dense, heavy_edge_filter, large_support_set
from .drc import DrcParams, Embedding, embed_h
from .errors import InputError, ResourceError, RetriesExhausted
from .extremal import deletion_lower_bound, extremal_exact, scaling_fit
from .formats import format_bipartite, format_graph, parse_any
from .graphs import BipartiteGraph, Graph, neighbourhood_graph
from .homcount import (
    Pattern,
    count_kst_labelled,
    hom_c4_oriented,
    hom_generic,
    hom_star_oriented,
)
from .patterns import Hypergraph, incidence_subdivision, parse_pattern_name, subdivide_k

SCHEMA_VERSION = "1"


def schema_path() -> str:
    """Filesystem path of the shipped report schema."""
    return str(resources.files("subdivlab") / "schema" / "report.schema.v1.json")


def _count(x: int) -> str:
    return str(int(x))


def _read_input(path: str) -> Graph | BipartiteGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_any(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _need_bipartite(g) -> BipartiteGraph:
    if not isinstance(g, BipartiteGraph):
        raise InputError("this command needs a bipartite input ('bip' header)")
    return g


def _as_plain_graph(g) -> Graph:
    return g.as_graph() if isinstance(g, BipartiteGraph) else g


def _build_pattern_graph(name: str, subdivide: int) -> Graph:
    base = parse_pattern_name(name)
    if isinstance(base, Hypergraph):
        if subdivide:
            raise InputError("--subdivide applies to graph patterns only")
        return incidence_subdivision(base).as_graph()
    if subdivide:
        return subdivide_k(base, subdivide)
    return base


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _envelope(command: str, seed: int | None = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command}
    if seed is not None:
        out["seed"] = seed
    return out


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    base = parse_pattern_name(args.pattern)
    if isinstance(base, Hypergraph):
        out = format_bipartite(incidence_subdivision(base))
    else:
        g = subdivide_k(base, args.subdivide) if args.subdivide else base
        if args.as_bipartite:
            pat = Pattern.from_graph(g)
            if pat.side_of is None:
                raise InputError("pattern is not bipartite; cannot emit 'bip' format")
            side0 = pat.side(0)
            pos_a = {v: i for i, v in enumerate(side0)}
            pos_b = {v: i for i, v in enumerate(pat.side(1))}
            bip = BipartiteGraph(
                len(pos_a),
                len(pos_b),
                [
                    (pos_a[u], pos_b[v]) if u in pos_a else (pos_a[v], pos_b[u])
                    for u, v in g.edges()
                ],
            )
            out = format_bipartite(bip)
        else:
            out = format_graph(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_count(args) -> int:
    g = _read_input(args.input)
    payload = _envelope("count")
    lines = []
    if args.oriented:
        bg = _need_bipartite(g)
        if args.star:
            value = hom_star_oriented(bg, args.centre_side, args.leaves)
            payload["hom_star_oriented"] = _count(value)
            lines.append(f"hom_star_oriented({args.centre_side}, {args.leaves}) = {value}")
        else:
            if args.pattern.lower() not in ("c4", "cycle:4"):
                raise InputError("--oriented supports the C4 pattern or --star")
            value = hom_c4_oriented(bg)
            payload["hom_c4_oriented"] = _count(value)
            lines.append(f"hom_c4_oriented = {value}")
    elif args.kst:
        s, t = (int(x) for x in args.kst.split(","))
        value = count_kst_labelled(_as_plain_graph(g), s, t)
        payload["count_kst_labelled"] = _count(value)
        lines.append(f"count_kst_labelled({s},{t}) = {value}")
    else:
        pat = _build_pattern_graph(args.pattern, args.subdivide)
        value = hom_generic(pat, _as_plain_graph(g), injective=args.injective)
        key = "hom_generic_injective" if args.injective else "hom_generic"
        payload[key] = _count(value)
        lines.append(f"{key}({args.pattern}) = {value}")
    _emit(args, payload, lines)
    return 0


def _cmd_regularize(args) -> int:
    from .regularize import almost_regular_subgraph, balanced_bipartition

    g = _as_plain_graph(_read_input(args.input))
    payload = _envelope("regularize", args.seed)
    lines = []
    alpha = float(Fraction(args.alpha))
    cert = almost_regular_subgraph(g, alpha, require_dense=not args.allow_sparse)
    payload["almost_regular"] = {
        "m": cert.m,
        "edges": _count(cert.subgraph.edge_count),
        "k_achieved": str(cert.k_achieved),
        "c_input": repr(cert.c_input),
        "size_target_met": cert.size_target_met,
        "edge_target_met": cert.edge_target_met,
    }
    lines.append(
        f"almost-regular subgraph: m = {cert.m}, e = {cert.subgraph.edge_count}, "
        f"ratio = {cert.k_achieved}"
    )
    if args.bipartition:
        k_in = Fraction(args.k_in) if args.k_in else cert.k_achieved
        try:
            bcert = balanced_bipartition(
                cert.subgraph, k_in, seed=args.seed, max_retries=args.max_retries
            )
        except RetriesExhausted as exc:
            payload["bipartition"] = {"outcome": "retries-exhausted", "detail": str(exc)}
            payload["outcome"] = "failure"
            lines.append(f"bipartition failed: {exc}")
            _emit(args, payload, lines)
            return 1
        sub = bcert.subgraph
        payload["bipartition"] = {
            "side_a": sub.side_a_count,
            "side_b": sub.side_b_count,
            "edges": _count(sub.edge_count),
            "k_achieved": str(bcert.k_achieved),
            "attempts": bcert.attempts,
        }
        lines.append(
            f"bipartition: {sub.side_a_count}+{sub.side_b_count} vertices, "
            f"{sub.edge_count} edges after {bcert.attempts} attempt(s)"
        )
    payload["outcome"] = "ok"
    _emit(args, payload, lines)
    return 0


def _cmd_density(args) -> int:
    g = _need_bipartite(_read_input(args.input))
    w = neighbourhood_graph(g, args.side)
    payload = _envelope("density", args.seed)
    lines = [f"neighbourhood graph on side {args.side}: {w.vertex_count} vertices"]
    code = 0
    if args.rho is not None or args.dens is not None:
        if args.rho is None or args.dens is None:
            raise InputError("--rho and --dens must be given together")
        params = DensityParams(Fraction(args.rho), Fraction(args.dens))
        verdict = check_rho_d_dense(
            w, params, mode=args.mode, seed=args.seed, trials=args.trials
        )
        payload["density_check"] = {
            "dense": verdict.dense,
            "mode": verdict.mode,
            "counterexample": (
                sorted(verdict.counterexample) if verdict.counterexample else None
            ),
        }
        if verdict.dense:
            lines.append(f"({args.rho}, {args.dens})-dense: yes ({verdict.mode})")
        else:
            lines.append(
                f"({args.rho}, {args.dens})-dense: no, counterexample "
                f"{sorted(verdict.counterexample)}"
            )
            code = 1
    if args.heavy is not None:
        res = heavy_edge_filter(w, args.heavy)
        payload["heavy_filter"] = {
            "threshold": res.threshold,
            "removed_pairs": len(res.removed_pairs),
            "kept_pairs": len(res.kept_pairs),
            "removed_weight": _count(res.removed_weight),
        }
        lines.append(
            f"heavy filter at {args.heavy}: removed {len(res.removed_pairs)} pairs "
            f"of weight {res.removed_weight}"
        )
    if args.support is not None:
        res = large_support_set(w, args.support)
        payload["large_support"] = {
            "threshold": res.threshold,
            "members": sorted(res.members),
            "d": str(res.d),
        }
        lines.append(f"large support at {args.support}: {sorted(res.members)}")
    _emit(args, payload, lines)
    return code


def _mapping_payload(g: BipartiteGraph, emb: Embedding) -> dict:
    na = g.side_a_count
    out = {}
    for v in sorted(emb.mapping):
        host = emb.mapping[v]
        if host < na:
            out[str(v)] = {"side": "A", "index": host}
        else:
            out[str(v)] = {"side": "B", "index": host - na}
    return out


def _cmd_embed(args) -> int:
    g = _need_bipartite(_read_input(args.input))
    pat_graph = _build_pattern_graph(args.pattern, args.subdivide)
    pattern = Pattern.from_graph(pat_graph, name=args.pattern)
    params = DrcParams(
        m=args.m, bad_threshold=args.bad_threshold, seed=args.seed
    )
    payload = _envelope("embed", args.seed)
    result = embed_h(g, pattern, params)
    if isinstance(result, Embedding):
        payload["outcome"] = "embedded"
        payload["mapping"] = _mapping_payload(g, result)
        payload["stage_log"] = [[name, info] for name, info in result.stage_log]
        lines = ["embedding found:"] + [
            f"  pattern {v} -> {spec['side']}{spec['index']}"
            for v, spec in payload["mapping"].items()
        ]
        _emit(args, payload, lines)
        return 0
    payload["outcome"] = "failure"
    payload["failed_stage"] = result.stage
    payload["reason"] = result.reason
    payload["stage_log"] = [[name, info] for name, info in result.stage_log]
    _emit(args, payload, [f"no embedding: stage {result.stage}: {result.reason}"])
    return 1


def _cmd_good_tuples(args) -> int:
    g = _need_bipartite(_read_input(args.input))
    thresholds = tuple(int(x) for x in args.thresholds.split(","))
    payload = _envelope("good-tuples", args.seed)
    if args.embed_t:
        result = structure.embed_via_good_tuples(
            g, args.embed_t, thresholds, args.min_extension, tuple_cap=args.cap
        )
        if isinstance(result, Embedding):
            payload["outcome"] = "embedded"
            payload["mapping"] = _mapping_payload(g, result)
            payload["stage_log"] = [[name, info] for name, info in result.stage_log]
            _emit(args, payload, ["subdivision embedded via good tuples"])
            return 0
        payload["outcome"] = "failure"
        payload["failed_stage"] = result.stage
        payload["reason"] = result.reason
        _emit(args, payload, [f"no embedding: {result.stage}: {result.reason}"])
        return 1
    enum = structure.enumerate_good_tuples(
        g, thresholds, args.min_extension, cap=args.cap
    )
    payload["tuple_count"] = len(enum.certificates)
    payload["truncated"] = enum.truncated
    payload["tuples"] = [
        {
            "members": list(c.members),
            "extension_size": len(c.extension_set),
        }
        for c in enum.certificates[: args.show]
    ]
    lines = [f"good tuples: {len(enum.certificates)} (truncated: {enum.truncated})"]
    _emit(args, payload, lines)
    return 0 if enum.certificates else 1


def _cmd_extremal(args) -> int:
    pat = _build_pattern_graph(args.pattern, args.subdivide)
    report = extremal_exact(args.n, pat, pattern_id=args.pattern)
    payload = _envelope("extremal")
    payload["n"] = report.n
    payload["pattern"] = report.pattern_id
    payload["max_edges"] = _count(report.max_edges)
    payload["graphs_examined"] = _count(report.graphs_examined)
    payload["witness_edges"] = [list(e) for e in sorted(report.witness.edges())]
    lines = [
        f"ex({report.n}, {report.pattern_id}) = {report.max_edges} "
        f"({report.graphs_examined} graphs examined, {report.elapsed:.2f}s)"
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_deletion_lb(args) -> int:
    pat = _build_pattern_graph(args.pattern, args.subdivide)
    result = deletion_lower_bound(
        args.n,
        pat,
        exponent_override=args.gamma,
        seed=args.seed,
        embedding_budget=args.budget,
    )
    payload = _envelope("deletion-lb", args.seed)
    payload["n"] = result.n
    payload["p"] = repr(result.p)
    payload["gamma"] = repr(result.gamma)
    payload["edges_before"] = _count(result.edges_before)
    payload["copies_found"] = _count(result.copies_found)
    payload["edges_after"] = _count(result.edges_after)
    if args.emit_edges:
        payload["edges"] = [list(e) for e in sorted(result.output.edges())]
    lines = [
        f"deletion lower bound: n = {result.n}, kept {result.edges_after} of "
        f"{result.edges_before} edges ({result.copies_found} copies deleted)"
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_fit(args) -> int:
    points: list[tuple[int, int]] = []
    if args.points:
        for chunk in args.points.split(","):
            n_str, _, e_str = chunk.partition(":")
            points.append((int(n_str), int(e_str)))
    elif args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                n_str, e_str = line.split()
                points.append((int(n_str), int(e_str)))
    else:
        raise InputError("fit needs --points or --input")
    fit = scaling_fit(points)
    payload = _envelope("fit")
    payload["slope"] = repr(fit.slope)
    payload["intercept"] = repr(fit.intercept)
    payload["r_squared"] = repr(fit.r_squared)
    payload["points"] = len(points)
    _emit(args, payload, [f"slope = {fit.slope:.4f}, r^2 = {fit.r_squared:.4f}"])
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _default_threads() -> int:
    env = os.environ.get("SUBDIV_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker hint; results never depend on it (default SUBDIV_LAB_THREADS or 1)",
    )
    p.add_argument("--format", choices=["text", "json"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subdivlab",
        description="workbench for subdivision-extremal graph theory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a named pattern as an edge list")
    p.add_argument("--pattern", required=True)
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--as-bipartite", action="store_true")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("count", help="homomorphism and labelled-copy counts")
    p.add_argument("--input", required=True)
    p.add_argument("--pattern", default="C4")
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--oriented", action="store_true")
    p.add_argument("--star", action="store_true")
    p.add_argument("--centre-side", choices=["A", "B"], default="B")
    p.add_argument("--leaves", type=int, default=2)
    p.add_argument("--injective", action="store_true")
    p.add_argument("--kst", help="s,t for a labelled complete-bipartite count")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("regularize", help="almost-regular extraction and bipartition")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", required=True, help="exponent in (0,1), e.g. 1/2")
    p.add_argument("--allow-sparse", action="store_true")
    p.add_argument("--bipartition", action="store_true")
    p.add_argument("--k-in", help="ratio bound for the bipartition input")
    p.add_argument("--max-retries", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=_cmd_regularize)

    p = sub.add_parser("density", help="codegree-graph density checks and filters")
    p.add_argument("--input", required=True)
    p.add_argument("--side", choices=["A", "B"], default="A")
    p.add_argument("--rho")
    p.add_argument("--dens")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--heavy", type=int)
    p.add_argument("--support", type=int)
    _add_common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("embed", help="dependent-random-choice embedding pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--m", type=int)
    p.add_argument("--bad-threshold", type=int)
    _add_common(p)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("good-tuples", help="enumerate good tuples / embed via them")
    p.add_argument("--input", required=True)
    p.add_argument("--thresholds", required=True, help="comma-separated, e.g. 4,4")
    p.add_argument("--min-extension", type=int, default=1)
    p.add_argument("--cap", type=int, default=10000)
    p.add_argument("--show", type=int, default=10)
    p.add_argument("--embed-t", type=int, help="embed the subdivision of K_t")
    _add_common(p)
    p.set_defaults(func=_cmd_good_tuples)

    p = sub.add_parser("extremal", help="exact extremal number by exhaustive search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--subdivide", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("deletion-lb", help="probabilistic deletion lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--gamma", type=float)
    p.add_argument("--budget", type=float, default=2_000_000.0)
    p.add_argument("--emit-edges", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_deletion_lb)

    p = sub.add_parser("fit", help="log-log slope of (n, edges) points")
    p.add_argument("--points", help="comma-separated n:edges pairs")
    p.add_argument("--input", help="file with 'n edges' lines")
    _add_common(p)
    p.set_defaults(func=_cmd_fit)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage (to stderr on errors, stdout for --help)
        return 0 if exc.code in (None, 0) else 2
    if args.threads < 1:
        sys.stderr.write("error: --threads must be >= 1\n")
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except ResourceError as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return 3
    except RetriesExhausted as exc:
        sys.stderr.write(f"retries exhausted: {exc}\n")
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
