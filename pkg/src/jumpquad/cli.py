"""Command line interface.

    jumpquad rule --gauss N
    jumpquad integrate (--file PATH | --builtin NAME) --method M --n CELLS
                       [--jumps auto|analytic|v0,v1,... --xstar X]
    jumpquad refine --builtin NAME --method M --levels I0..I1 [--corrected] --out CSV
    jumpquad experiment {1,2,3,4} [--points M] [--trials T] [--seed S] --out PREFIX

Exit status: 0 on success, 2 on bad arguments or input files, 1 on numerical
failures (oracle non-convergence, no clear discontinuity).
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import harness
from .correction import corrected_grid_rule, corrected_integrate_analytic, default_order
from .detect import estimate_jumps, locate_discontinuity
from .functions import BUILTIN_NAMES, get_problem
from .harness import fmt
from .model import (
    GridSamples,
    JumpData,
    NoDiscontinuityError,
    OracleError,
    QuadratureError,
    jumps_from_analytic,
    piecewise_from_json,
)
from .rules import apply_grid_rule, gauss_legendre_composite, gauss_legendre_rule, parse_method


def _method(text):
    try:
        return parse_method(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _levels(text):
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError(f"levels must look like I0..I1 with I0 <= I1, got {text!r}")
    return tuple(2**i for i in range(int(m.group(1)), int(m.group(2)) + 1))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jumpquad", description="Jump-corrected quadrature.")
    sub = p.add_subparsers(dest="verb", required=True)

    r = sub.add_parser("rule", help="print Gauss-Legendre nodes and weights")
    r.add_argument("--gauss", type=int, required=True, metavar="N")

    i = sub.add_parser("integrate", help="integrate one piecewise function")
    src = i.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", type=Path, help="piecewise-polynomial JSON file")
    src.add_argument("--builtin", choices=BUILTIN_NAMES)
    i.add_argument("--method", type=_method, required=True, help="trap, simpson13, simpson38 or gl:<m>")
    i.add_argument("--n", type=int, required=True, help="number of cells")
    i.add_argument("--jumps", help="auto, analytic, or a comma-separated jump vector")
    i.add_argument("--xstar", type=float, help="breakpoint for an explicit jump vector")
    i.add_argument("--order", type=int, help="jump order l (default: rule exactness degree)")
    i.add_argument("--deriv-order", type=int, default=0, help="derivative order the detector looks at")
    i.add_argument("--stencil", type=int, help="one-sided nodes per side for --jumps auto (default l+2)")

    f = sub.add_parser("refine", help="grid-refinement study to CSV")
    f.add_argument("--builtin", choices=BUILTIN_NAMES, required=True)
    f.add_argument("--method", type=_method, required=True)
    f.add_argument("--levels", type=_levels, required=True, help="exponent range, n = 2^i")
    f.add_argument("--corrected", action="store_true")
    f.add_argument("--jumps", choices=("analytic", "auto"), default="analytic")
    f.add_argument("--order", type=int)
    f.add_argument("--deriv-order", type=int, default=0)
    f.add_argument("--stencil", type=int)
    f.add_argument("--out", required=True, help="CSV path, or - for stdout")

    e = sub.add_parser("experiment", help="reproduce one of the four experiments")
    e.add_argument("number", type=int, choices=(1, 2, 3, 4))
    e.add_argument("--points", type=int, help="Gauss points (experiments 3 and 4)")
    e.add_argument("--trials", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", required=True, help="prefix for the CSV files")
    return p


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")
        print(f"wrote {path}", file=sys.stderr)


def _cmd_rule(args) -> None:
    rule = gauss_legendre_rule(args.gauss)
    print("index,node,weight")
    for k, (x, w) in enumerate(zip(rule.nodes, rule.weights)):
        print(f"{k},{fmt(x)},{fmt(w)}")


def _cmd_integrate(args) -> None:
    if args.file is not None:
        try:
            text = args.file.read_text(encoding="utf-8")
        except OSError as exc:
            raise ValueError(f"cannot read {args.file}: {exc.strerror}") from None
        func, iv = piecewise_from_json(text, str(args.file))
    else:
        prob = get_problem(args.builtin)
        func, iv = prob.func, prob.interval

    method = args.method
    n = method.admissible_n(args.n)
    if n != args.n:
        print(f"note: n rounded up from {args.n} to {n} for {method}", file=sys.stderr)
    l = default_order(method) if args.order is None else args.order

    if args.jumps is None:
        if args.xstar is not None:
            raise ValueError("--xstar only makes sense with an explicit --jumps vector")
        value = (
            apply_grid_rule(method, GridSamples.from_function(func, iv, n))
            if method.is_grid
            else gauss_legendre_composite(func, iv, n, method.points)
        )
        print(fmt(value))
        return

    samples = GridSamples.from_function(func, iv, n)
    if args.jumps == "auto":
        det = locate_discontinuity(samples, args.deriv_order)
        stencil = args.stencil if args.stencil is not None else l + 2
        j = estimate_jumps(samples, det.x_estimate, l, stencil)
        print(f"note: break located at {fmt(det.x_estimate)} (cell {det.cell_index})", file=sys.stderr)
    elif args.jumps == "analytic":
        j = jumps_from_analytic(func, l)
    else:
        if args.xstar is None:
            raise ValueError("an explicit --jumps vector needs --xstar")
        try:
            values = tuple(float(v) for v in args.jumps.split(","))
        except ValueError:
            raise ValueError(f"--jumps must be auto, analytic or numbers separated by commas, got {args.jumps!r}") from None
        j = JumpData(args.xstar, values)

    if method.is_grid:
        value = corrected_grid_rule(samples, j, method)
    else:
        value = corrected_integrate_analytic(func, j, iv, method, n)
    print(fmt(value))


def _cmd_refine(args) -> None:
    cfg = harness.StudyConfig(
        args.builtin,
        str(args.method),
        args.levels,
        corrected=args.corrected,
        jump_source="estimated" if args.jumps == "auto" else "analytic",
        jump_order=args.order,
        deriv_order=args.deriv_order,
        stencil=args.stencil,
    )
    report = harness.refinement_study(cfg)
    _write(args.out, harness.report_csv(report))
    print(f"{report.rule_name} on {report.function_name}: fitted order {fmt(harness.fitted_order(report.ns, report.errors))}")


def _summarize_tables(tables) -> None:
    for name, table in tables.items():
        for s in table.series:
            oc = harness.fitted_order(s.classical.ns, s.classical.errors)
            ok = harness.fitted_order(s.corrected.ns, s.corrected.errors)
            print(f"{name},{s.rule},fitted_classical={fmt(oc)},fitted_corrected={fmt(ok)}")


def _cmd_experiment(args) -> None:
    prefix = args.out
    if args.number == 3:
        points = (2, 3, 4, 5) if args.points is None else (args.points,)
        results = harness.experiment3(points, args.trials, args.seed)
        for m, res in results.items():
            _write(f"{prefix}_tab_exp1_p{m}.csv", harness.monte_carlo_csv(res))
            print(f"points={m},max_classical={fmt(res.max_classical)},max_corrected={fmt(res.max_corrected)}")
        _write(f"{prefix}_tab_exp1.csv", harness.experiment3_summary_csv(results))
        return
    if args.number == 1:
        tables = harness.experiment1()
    elif args.number == 2:
        tables = harness.experiment2()
    else:
        points = (2, 3, 4, 5) if args.points is None else (args.points,)
        tables = harness.experiment4(points=points)
    for name, table in tables.items():
        _write(f"{prefix}_{name}.csv", table.to_csv())
    _summarize_tables(tables)


_COMMANDS = {
    "rule": _cmd_rule,
    "integrate": _cmd_integrate,
    "refine": _cmd_refine,
    "experiment": _cmd_experiment,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.verb](args)
    except (NoDiscontinuityError, OracleError) as exc:
        print(f"jumpquad: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"jumpquad: error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"jumpquad: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())
