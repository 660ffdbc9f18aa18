"""Command-line interface.

Subcommands: gen, verify, solve, construct, two-subgraphs, diagnose,
experiment, census.  Results go to standard output (or to files named by
flags) as the text graph/coloring formats and JSON documents; all runs are
deterministic given their seeds.

Exit codes: 0 on success, 1 on a domain error (a JSON object with ``error``
and ``message`` fields is printed to standard error), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .construct import (
    ConstructionParams,
    construct_two_coloring,
    lemma_diagnostics,
    pipeline_classification,
)
from .errors import ProperConnError
from .exact import pc_exact
from .experiments import (
    FORMULAS,
    census_small_graphs,
    offset_probability,
    run_threshold_experiment,
    trial_csv,
)
from .graph import (
    Graph,
    RandomModel,
    gnp_sample,
    read_coloring,
    read_graph,
    write_coloring,
    write_graph,
    write_text_atomic,
)
from .two_subgraphs import (
    color_via_two_subgraphs,
    find_two_edge_disjoint_spanning_trees,
)
from .verify import is_properly_connected, proper_path_exists

_P_FORMULA_CHOICES = ("threshold", "hamilton")


def _load_graph(path: str) -> Graph:
    return read_graph(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    """Writes text to the named file (atomically) or to standard output."""
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        write_text_atomic(out, text)


def _print_json(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _resolve_p(args: argparse.Namespace) -> float:
    """Edge probability from --p-formula/--offset for a known n."""
    formula = args.p_formula
    if formula.startswith("explicit:"):
        p = float(formula.split(":", 1)[1])
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"explicit probability {p} outside [0, 1]")
        return p
    if formula not in _P_FORMULA_CHOICES:
        raise ValueError(
            f"--p-formula must be threshold, hamilton, or explicit:P, got {formula!r}"
        )
    name = "connect" if formula == "threshold" else "hamilton"
    return offset_probability(args.n, name, args.offset)


def _cmd_gen(args: argparse.Namespace) -> int:
    g = gnp_sample(RandomModel(n=args.n, p=args.p, seed=args.seed))
    _emit(write_graph(g), args.out)
    return 0


def _parse_pairs(spec: str, g: Graph) -> list[tuple[int, int]] | None:
    if spec == "all":
        return None
    parts = spec.split(",")
    if len(parts) != 2:
        raise ValueError(f"--pairs expects 'all' or 'u,v', got {spec!r}")
    u, v = (int(x) for x in parts)
    if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
        raise ValueError(f"pair ({u}, {v}) is not two distinct vertices of the graph")
    return [(u, v)]


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    c = read_coloring(g, Path(args.coloring).read_text())
    pairs = _parse_pairs(args.pairs, g)
    report = is_properly_connected(
        g, c, early_exit=args.early_exit, restrict_pairs=pairs
    )
    payload = {
        "properly_connected": report.properly_connected,
        "failing_pairs": [list(p) for p in report.failing_pairs],
        "pair_count_checked": report.pair_count_checked,
    }
    if args.certificates:
        wanted = pairs if pairs is not None else [
            (u, v) for u in range(g.n) for v in range(u + 1, g.n)
        ]
        certs = {}
        for u, v in wanted:
            cert = proper_path_exists(g, c, u, v)
            certs[f"{u},{v}"] = None if cert is None else list(cert.vertices)
        payload["certificates"] = certs
    _print_json(payload)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    result = pc_exact(g, budget=args.budget)
    if args.max_colors is not None and result.value > args.max_colors:
        raise ValueError(
            f"proper connection number {result.value} exceeds --max-colors {args.max_colors}"
        )
    _print_json(
        {
            "value": result.value,
            "lower_bound_used": result.lower_bound_used,
            "upper_bound_used": result.upper_bound_used,
            "witness": write_coloring(result.witness),
        }
    )
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    if args.graph is not None:
        g = _load_graph(args.graph)
    else:
        if args.n is None:
            raise ValueError("construct needs --graph or --n with --p-formula")
        p = _resolve_p(args)
        g = gnp_sample(RandomModel(n=args.n, p=p, seed=args.seed))
        if args.graph_out is not None:
            write_text_atomic(args.graph_out, write_graph(g))
    params = ConstructionParams(paper_constants=args.paper_constants)
    coloring, trace = construct_two_coloring(g, params=params, seed=args.seed)
    if args.trace is not None:
        write_text_atomic(args.trace, json.dumps(trace.as_dict(), indent=2) + "\n")
    if coloring is None:
        raise ProperConnError(
            f"construction failed at stage {trace.stage_reached}: {trace.failure}"
        )
    _emit(write_coloring(coloring), args.out)
    return 0


def _read_edge_set(path: str, g: Graph) -> list[tuple[int, int]]:
    sub = read_graph(Path(path).read_text())
    if sub.n != g.n:
        raise ValueError(
            f"subgraph file {path} declares {sub.n} vertices, graph has {g.n}"
        )
    return [(int(a), int(b)) for a, b in sub.edges]


def _cmd_two_subgraphs(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.find_trees:
        found = find_two_edge_disjoint_spanning_trees(g)
        if found is None:
            raise ProperConnError("no two edge-disjoint spanning trees found")
        e1, e2 = found
    elif args.e1 is not None and args.e2 is not None:
        e1 = _read_edge_set(args.e1, g)
        e2 = _read_edge_set(args.e2, g)
    else:
        raise ValueError("two-subgraphs needs --e1 and --e2, or --find-trees")
    coloring = color_via_two_subgraphs(g, e1, e2, x=args.root)
    shared = set(map(tuple, e1)) & set(map(tuple, e2))
    report = is_properly_connected(g, coloring)
    if args.out is not None:
        write_text_atomic(args.out, write_coloring(coloring))
    _print_json(
        {
            "t": len(shared),
            "palette": coloring.palette_size,
            "verified": report.properly_connected,
            "coloring": write_coloring(coloring),
        }
    )
    return 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    cls, _ = pipeline_classification(g)
    report = lemma_diagnostics(g, cls, p=args.p, seed=args.seed)
    _print_json(report.as_dict())
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    offsets = [float(x) for x in args.offsets.split(",") if x.strip()]
    if not offsets:
        raise ValueError("--offsets needs at least one value")
    report = run_threshold_experiment(
        n=args.n,
        p_formula=args.formula,
        offsets=offsets,
        trials=args.trials,
        seed=args.seed,
        construct=args.construct,
        workers=args.workers,
    )
    if args.out_csv is not None:
        write_text_atomic(args.out_csv, trial_csv(report))
    if args.out_json is not None:
        write_text_atomic(args.out_json, json.dumps(report.as_dict(), indent=2) + "\n")
    _print_json(report.aggregates)
    return 0


def _cmd_census(args: argparse.Namespace) -> int:
    hist = census_small_graphs(args.n)
    payload = {str(k): v for k, v in hist.items()}
    if args.out is not None:
        write_text_atomic(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _print_json(payload)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pc",
        description="Proper-path connectivity: exact numbers, verification, and 2-coloring constructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="sample a random graph and write it")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output file (default: stdout)")
    p_gen.set_defaults(func=_cmd_gen)

    p_verify = sub.add_parser("verify", help="check a coloring for proper connectivity")
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--coloring", required=True)
    p_verify.add_argument("--pairs", default="all", help="'all' or a single pair 'u,v'")
    p_verify.add_argument(
        "--certificates", action="store_true", help="include witness paths per pair"
    )
    p_verify.add_argument(
        "--early-exit", action="store_true", help="stop at the first failing pair"
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_solve = sub.add_parser("solve", help="compute the exact proper connection number")
    p_solve.add_argument("--graph", required=True)
    p_solve.add_argument(
        "--max-colors", type=int, default=None, help="fail if the result exceeds this"
    )
    p_solve.add_argument(
        "--budget", type=int, default=None, help="edge-count cap override"
    )
    p_solve.add_argument(
        "--deterministic",
        action="store_true",
        help="accepted for compatibility; the solver is always deterministic",
    )
    p_solve.set_defaults(func=_cmd_solve)

    p_construct = sub.add_parser("construct", help="build and verify a 2-coloring")
    p_construct.add_argument("--graph", default=None, help="input graph file")
    p_construct.add_argument("--n", type=int, default=None, help="sample size when no --graph")
    p_construct.add_argument(
        "--p-formula",
        default="hamilton",
        help="threshold | hamilton | explicit:P (used with --n)",
    )
    p_construct.add_argument(
        "--offset", type=float, default=2.0, help="additive offset a in the p formula"
    )
    p_construct.add_argument("--seed", type=int, default=0)
    p_construct.add_argument("--paper-constants", action="store_true")
    p_construct.add_argument("--trace", default=None, help="write the JSON trace here")
    p_construct.add_argument("--out", default=None, help="coloring file (default: stdout)")
    p_construct.add_argument(
        "--graph-out", default=None, help="also write the sampled graph here"
    )
    p_construct.set_defaults(func=_cmd_construct)

    p_two = sub.add_parser(
        "two-subgraphs", help="color via two connected spanning subgraphs"
    )
    p_two.add_argument("--graph", required=True)
    p_two.add_argument("--e1", default=None, help="first subgraph edge set (graph format)")
    p_two.add_argument("--e2", default=None, help="second subgraph edge set (graph format)")
    p_two.add_argument(
        "--find-trees",
        action="store_true",
        help="find two edge-disjoint spanning trees instead of reading --e1/--e2",
    )
    p_two.add_argument("--root", type=int, default=0, help="common BFS root x")
    p_two.add_argument("--out", default=None, help="also write the coloring here")
    p_two.set_defaults(func=_cmd_two_subgraphs)

    p_diag = sub.add_parser("diagnose", help="sampled structural checks for a graph")
    p_diag.add_argument("--graph", required=True)
    p_diag.add_argument("--p", type=float, required=True, help="generating edge probability")
    p_diag.add_argument("--seed", type=int, default=0)
    p_diag.set_defaults(func=_cmd_diagnose)

    p_exp = sub.add_parser("experiment", help="threshold sweep over seeded trials")
    p_exp.add_argument("--n", type=int, required=True)
    p_exp.add_argument("--formula", choices=FORMULAS, required=True)
    p_exp.add_argument("--offsets", required=True, help="comma-separated offsets")
    p_exp.add_argument("--trials", type=int, required=True)
    p_exp.add_argument("--seed", type=int, required=True)
    p_exp.add_argument("--out-csv", default=None)
    p_exp.add_argument("--out-json", default=None)
    p_exp.add_argument(
        "--construct",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="run the 2-coloring construction on connected samples",
    )
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.set_defaults(func=_cmd_experiment)

    p_census = sub.add_parser(
        "census", help="distribution of the proper connection number over small graphs"
    )
    p_census.add_argument("--n", type=int, required=True)
    p_census.add_argument("--out", default=None)
    p_census.set_defaults(func=_cmd_census)

    return parser


def cli_main(argv: list[str] | None = None) -> int:
    """Parses arguments, dispatches, and maps failures to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ProperConnError, ValueError, OSError) as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 1


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
