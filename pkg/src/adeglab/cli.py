"""Command-line front end.

Subcommands: analyze, dual, simulate-gates, census, compose-table, amplify,
maj-projection, cache.  Epsilons are rational strings like 1/3 (floats are
rejected so every threshold decision stays exact).  Exit codes: 0 success,
1 usage error, 2 budget/limit exceeded, 3 failed internal invariant.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

from . import degrees, experiments, gadgets, spectral
from .amplify import verify_amplifier_pipeline
from .boolfn import BooleanFunction
from .cache import shared_cache
from .errors import BudgetError, InvariantError, UsageError
from .exprs import parse_to_function
from .rational import format_rational, parse_rational

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_flags(parser):
    parser.add_argument("--mode", choices=("exact", "float"), default="exact",
                        help="certificate mode (default exact)")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker pool size for batch commands")
    parser.add_argument("--eps", default="1/3",
                        help="error budget as a rational string like 1/3")
    parser.add_argument("--dump-lp", default=None, metavar="DIR",
                        help="dump every solved LP in text interchange form")


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="adeglab",
                             description="Boolean-function degree laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="all degree measures of an expression")
    p.add_argument("expr")
    _common_flags(p)

    p = sub.add_parser("dual", help="dual witness or refutation at a purity degree")
    p.add_argument("expr")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--one-sided", action="store_true")
    _common_flags(p)

    p = sub.add_parser("simulate-gates", help="extract AND2/OR2 circuits from a base")
    p.add_argument("expr")
    _common_flags(p)

    p = sub.add_parser("census", help="gadget-extraction census at an arity")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--sample", type=int, default=None)
    _common_flags(p)

    p = sub.add_parser("compose-table", help="composition table over (f,g) pairs")
    p.add_argument("--pairs", default=None,
                   help="file with 'f_expr, g_expr' lines (default: built-in grid)")
    _common_flags(p)

    p = sub.add_parser("amplify", help="run the amplifier pipeline on one instance")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--middle", default="MAJ",
                   help="MAJ, AND, or a function expression")
    p.add_argument("--t", type=int, default=1, dest="copies")
    p.add_argument("--delta", default="1/4")
    _common_flags(p)

    p = sub.add_parser("maj-projection", help="find MAJ_n inside a recursive base")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", choices=(gadgets.BASE_MAJ3, gadgets.BASE_ANDOR),
                   required=True)
    p.add_argument("--d-max", type=int, default=8)
    p.add_argument("--attempts", type=int, default=100_000)
    _common_flags(p)

    p = sub.add_parser("cache", help="certificate cache maintenance")
    p.add_argument("action", choices=("gc", "stats"))
    _common_flags(p)
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _config(args) -> degrees.DegreesConfig:
    return degrees.DegreesConfig(dump_dir=args.dump_lp)


def _cmd_analyze(args) -> int:
    f = parse_to_function(args.expr)
    eps = parse_rational(args.eps)
    cfg = _config(args)
    exact = degrees.exact_degree(f)
    approx = degrees.approx_degree(f, eps, mode=args.mode, config=cfg)
    sign = degrees.sign_degree(f, mode=args.mode, config=cfg)
    one_sided = degrees.one_sided_approx_degree(f, eps, mode=args.mode, config=cfg)
    spec = spectral.spectral_sensitivity(f)
    payload = {
        "expr": args.expr,
        "function": f.to_json(),
        "bit_order": experiments.BIT_ORDER_NOTE,
        "epsilon": format_rational(eps),
        "exact_degree": exact.to_json(),
        "approx_degree": approx.to_json(),
        "sign_degree": sign.to_json(),
        "one_sided_degree": one_sided.to_json(),
        "spectral_sensitivity": spec.to_json(),
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def _cmd_dual(args) -> int:
    f = parse_to_function(args.expr)
    eps = parse_rational(args.eps)
    result = degrees.dual_witness(f, eps, args.degree, one_sided=args.one_sided,
                                  mode=args.mode, config=_config(args))
    if isinstance(result, degrees.DualWitness):
        payload = {"kind": "witness", "witness": result.to_json()}
    else:
        payload = {"kind": "refutation", "refutation": result.to_json()}
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def _cmd_simulate_gates(args) -> int:
    h = parse_to_function(args.expr)
    and2 = gadgets.simulate_and2(h)
    or2 = gadgets.simulate_or2(h)
    block = gadgets.find_min_sensitive_block2(h)
    payload = {
        "base": h.to_json(),
        "and2_circuit": and2.to_json(),
        "or2_circuit": or2.to_json(),
        "sensitive_block": {
            "point": "".join(str(b) for b in block.point),
            "indices": list(block.indices),
            "orientation": block.orientation,
        },
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def _cmd_census(args) -> int:
    report = experiments.gadget_census(args.arity, sample=args.sample,
                                       seed=args.seed)
    buf = io.StringIO()
    experiments.write_census_csv(report, buf)
    _emit(buf.getvalue(), args.out)
    if report.passed != report.qualifying:
        raise InvariantError(
            f"census found {report.qualifying - report.passed} failing functions"
        )
    return EXIT_OK


def _cmd_compose_table(args) -> int:
    eps = parse_rational(args.eps)
    if args.pairs:
        pairs = []
        with open(args.pairs, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                left, right = line.split(",", 1)
                pairs.append((left.strip(), right.strip()))
    else:
        pairs = experiments.DEFAULT_PAIR_GRID
    rows = experiments.composition_table(pairs, eps, config=_config(args),
                                         jobs=args.jobs)
    _emit(experiments.composition_csv_text(rows, eps), args.out)
    if any(row.error for row in rows):
        raise BudgetError("some rows failed; see the error column")
    if not all(row.sandwich_ok for row in rows):
        raise InvariantError("a row violated the degree sandwich")
    return EXIT_OK


def _cmd_amplify(args) -> int:
    eps = parse_rational(args.eps)
    delta = parse_rational(args.delta)
    middle = args.middle
    if middle.upper() not in ("MAJ", "AND"):
        middle = parse_to_function(middle)
    report = verify_amplifier_pipeline(
        parse_to_function(args.outer), parse_to_function(args.inner),
        args.copies, eps, delta, middle, config=_config(args))
    _emit(json.dumps(report.to_json(), indent=2), args.out)
    if not (report.degree_reduction_ok and report.approximation_ok and report.mu_ok):
        raise InvariantError("amplifier invariants failed; see the report")
    return EXIT_OK


def _cmd_maj_projection(args) -> int:
    result = gadgets.majority_projection(
        args.n, args.base, d_max=args.d_max, seed=args.seed,
        attempts_per_depth=args.attempts)
    _emit(json.dumps(result.to_json(), indent=2), args.out)
    return EXIT_OK


def _cmd_cache(args) -> int:
    cache = shared_cache()
    if args.action == "gc":
        removed = cache.gc()
        payload = {"removed": removed}
    else:
        payload = cache.stats()
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "dual": _cmd_dual,
    "simulate-gates": _cmd_simulate_gates,
    "census": _cmd_census,
    "compose-table": _cmd_compose_table,
    "amplify": _cmd_amplify,
    "maj-projection": _cmd_maj_projection,
    "cache": _cmd_cache,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
