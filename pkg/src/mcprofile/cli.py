"""Command line interface: ``mcprofile <subcommand> ...``.

Exit codes: 0 success, 2 argument error, 3 model-domain error,
4 structured experiment failure (no perfect matching, recolor dead end,
matching that fails validation).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .audit import CONDITIONS, LemmaParams, audit_random
from .errors import ModelDomainError
from .expansion import expansion_trace
from .experiments import (
    SweepSpec,
    make_target,
    run_full_cube_check,
    run_isolated_vertex_check,
    run_sweep,
    run_theorem_demo,
    sweep_to_csv,
    sweep_to_json,
)
from .graph import ColorLaw, RandomModelParams, deserialize, generate, serialize
from .matching import format_matching, is_perfect, maximum_matching, parse_matching, profile, validate_matching
from .oracle import BRUTEFORCE_CAP, DP_CAP, mcp_bruteforce, mcp_subset_dp
from .recolor import recolor_to_target

EXIT_OK, EXIT_ARGS, EXIT_DOMAIN, EXIT_FAILURE = 0, 2, 3, 4


class ExperimentFailure(Exception):
    """Carries a JSON payload that is still written out before exiting with 4."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "experiment failure"))
        self.payload = payload


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _law(args) -> ColorLaw:
    if args.alphas:
        return ColorLaw.parse(args.alphas)
    return ColorLaw.uniform(args.q)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _row_csv(row: dict) -> str:
    flat = {k: ";".join(map(str, v)) if isinstance(v, list) else ("" if v is None else v) for k, v in row.items()}
    flat.pop("failures", None)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(args):
    """Graph from ``--graph`` or generated from ``--n/--omega/--alphas/--seed``."""
    if getattr(args, "graph", None):
        with open(args.graph, "rb") as fh:
            return deserialize(fh.read()), {"graph": args.graph}
    if args.n is None:
        raise ValueError("give --graph FILE or --n N to generate one")
    params = RandomModelParams(args.n, _law(args), args.omega, args.seed)
    meta = {"generated": {"n": args.n, "omega": params.omega, "p": params.p,
                          "alphas": list(params.law.alphas), "seed": args.seed}}
    return generate(params), meta


def _perfect_matching(G, meta):
    M = maximum_matching(G)
    if not is_perfect(G, M):
        raise ExperimentFailure({**meta, "error": "graph has no perfect matching", "matching_size": M.size})
    return M


# -- subcommands -----------------------------------------------------------


def cmd_gen(args):
    if args.n is None:
        raise ValueError("gen needs --n")
    G, _ = _load_graph(args)
    _emit(args, serialize(G))


def cmd_match(args):
    G, meta = _load_graph(args)
    if args.validate:
        with open(args.validate, "rb") as fh:
            M = parse_matching(fh.read(), G.n)
        try:
            validate_matching(G, M)
        except ValueError as exc:
            raise ExperimentFailure({**meta, "valid": False, "error": str(exc)}) from None
        _emit(args, _dump_json({**meta, "valid": True, "size": M.size, "perfect": is_perfect(G, M),
                                "profile": list(profile(G, M))}))
        return
    M = maximum_matching(G)
    if args.format == "json":
        _emit(args, _dump_json({**meta, "n": G.n, "q": G.q, "size": M.size, "perfect": is_perfect(G, M),
                                "profile": list(profile(G, M)),
                                "pairs": [[a + 1, b + 1] for a, b in M.pairs()]}))
    else:
        _emit(args, format_matching(M))


def cmd_mcp(args):
    G, meta = _load_graph(args)
    if args.method == "bruteforce":
        profiles = mcp_bruteforce(G, cap=args.cap or BRUTEFORCE_CAP)
    else:
        profiles = mcp_subset_dp(G, cap=args.cap or DP_CAP)
    _emit(args, _dump_json({**meta, "n": G.n, "q": G.q, "method": args.method,
                            "mcp": [list(p) for p in profiles]}))


def cmd_recolor(args):
    G, meta = _load_graph(args)
    target = _int_list(args.target)
    M = _perfect_matching(G, meta)
    outcome = recolor_to_target(G, M, target)
    doc = {**meta, "n": G.n, "q": G.q, **outcome.to_dict()}
    if not outcome.success:
        raise ExperimentFailure(doc)
    _emit(args, _dump_json(doc))


def cmd_trace(args):
    G, meta = _load_graph(args)
    M = _perfect_matching(G, meta)
    src, dst = args.src - 1, args.dst - 1
    if args.a0 is None:
        a_dst = [a for a in range(G.n) if G.color(a, M.mate_a[a]) == dst]
        if not a_dst:
            raise ValueError(f"no matching edge has color {args.dst}")
        a0 = a_dst[0]
    else:
        a0 = args.a0 - 1
    trace = expansion_trace(G, M, src, dst, args.beta, a0, alpha_dst=args.alpha, full=args.full)
    _emit(args, _dump_json({**meta, **trace.to_dict()}))


def cmd_audit(args):
    G, meta = _load_graph(args)
    params = LemmaParams(args.beta, args.eta, args.delta, args.gamma, args.color - 1)
    report = audit_random(G, args.condition, params, args.trials, args.seed, alpha=args.alpha)
    _emit(args, _dump_json({**meta, **report.to_dict()}))


def cmd_demo_theorem(args):
    law = _law(args)
    target = make_target(args.target, args.n, law.q, args.beta)
    row = run_theorem_demo(args.n, args.omega, law, args.beta, target, args.trials, args.seed)
    _emit(args, _row_csv(row) if args.format == "csv" else _dump_json(row))


def cmd_check_isolated(args):
    row = run_isolated_vertex_check(args.n, args.omega, _law(args), args.trials, args.seed, args.color - 1)
    _emit(args, _row_csv(row) if args.format == "csv" else _dump_json(row))


def cmd_check_fullcube(args):
    row = run_full_cube_check(args.n, args.omega, _law(args), args.trials, args.seed)
    _emit(args, _row_csv(row) if args.format == "csv" else _dump_json(row))


def cmd_sweep(args):
    spec = SweepSpec(
        n_values=tuple(_int_list(args.n_values)),
        c_values=tuple(_float_list(args.c_values)),
        law=_law(args),
        beta=args.beta,
        targets=tuple(t for t in args.targets.split("/") if t),
        trials=args.trials,
        seed=args.seed,
        timing=args.timing,
    )
    rows = run_sweep(spec, workers=args.workers)
    fmt = args.format or "csv"
    text = sweep_to_csv(spec, rows) if fmt == "csv" else sweep_to_json(spec, rows)
    _emit(args, text)
    if args.out and fmt == "csv":
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(sweep_to_json(spec, rows))


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format where applicable")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--n", type=int, help="side size")
    model.add_argument("--omega", type=float, help="offset in p = (ln n + omega)/n (default ln ln n)")
    model.add_argument("--alphas", help="color law, e.g. 0.5,0.5")
    model.add_argument("--q", type=int, default=2, help="number of colors for a uniform law (default 2)")

    source = argparse.ArgumentParser(add_help=False, parents=[model])
    source.add_argument("--graph", help="graph file ('n q' header, then 'a b c' lines)")

    parser = argparse.ArgumentParser(prog="mcprofile", description="Color profiles of perfect matchings in randomly colored random bipartite graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common, model], help="generate a random colored graph")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("match", parents=[common, source], help="maximum matching, or validate one")
    p.add_argument("--validate", metavar="MATCHING", help="check a matching file against the graph")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("mcp", parents=[common, source], help="exact matching color profile (small n)")
    p.add_argument("--method", choices=("dp", "bruteforce"), default="dp")
    p.add_argument("--cap", type=int, help="override the size cap")
    p.set_defaults(func=cmd_mcp)

    p = sub.add_parser("recolor", parents=[common, source], help="recolor a perfect matching to a target profile")
    p.add_argument("--target", required=True, help="m1,m2,...")
    p.set_defaults(func=cmd_recolor)

    p = sub.add_parser("trace", parents=[common, source], help="layered expansion diagnostic")
    p.add_argument("--src", type=int, required=True, help="over-subscribed color (1-based)")
    p.add_argument("--dst", type=int, required=True, help="under-subscribed color (1-based)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--a0", type=int, help="root A vertex (1-based; default: first vertex matched in color dst)")
    p.add_argument("--alpha", type=float, help="color probability of dst used in thresholds (default 1/q)")
    p.add_argument("--full", action="store_true", help="keep layering past the goal layer")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("audit", parents=[common, source], help="sample witness sets for one lemma condition")
    p.add_argument("--condition", choices=CONDITIONS, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=5.0)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--color", type=int, default=1, help="color index (1-based)")
    p.add_argument("--alpha", type=float, help="probability of that color (default 1/q)")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("demo-theorem", parents=[common, model], help="recolor-to-target success rate")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--target", default="balanced", help="'balanced', 'beta-corner' or m1,m2,...")
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(func=cmd_demo_theorem)

    p = sub.add_parser("check-isolated", parents=[common, model], help="isolated vertices in one color class")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--color", type=int, default=1)
    p.set_defaults(func=cmd_check_isolated)

    p = sub.add_parser("check-fullcube", parents=[common, model], help="monochromatic perfect matchings at inflated p")
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(func=cmd_check_fullcube)

    p = sub.add_parser("sweep", parents=[common, model], help="factorial threshold sweep (CSV + JSON mirror)")
    p.add_argument("--n-values", required=True, help="e.g. 200,500")
    p.add_argument("--c-values", required=True, help="multipliers c in p = c ln n/n, e.g. 0.9,1.2,2")
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--targets", default="balanced", help="'/'-separated target specs")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a runtime column (breaks byte-reproducibility)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("demo-theorem", "check-isolated", "check-fullcube") and args.n is None:
        parser.error(f"{args.command} needs --n")
    try:
        args.func(args)
    except ExperimentFailure as exc:
        _emit(args, _dump_json(exc.payload))
        print(f"mcprofile: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ModelDomainError as exc:
        print(f"mcprofile: model domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        print(f"mcprofile: {exc}", file=sys.stderr)
        return EXIT_ARGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
