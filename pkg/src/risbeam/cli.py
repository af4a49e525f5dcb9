"""Command-line front end: scenario files in, reports/codebooks/CSV out.

Subcommands: ``optimize``, ``pcm``, ``quantize``, ``sweep``, ``heatmap``,
``multihop``.  Each takes ``--scenario <file>`` plus output-path flags.
On success the report JSON goes to ``--report`` (or stdout) and the exit
code is 0; on failure a machine-readable ``{"error": ...}`` JSON is
printed and the exit code is 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .scenario import (
    ScenarioError,
    coverage_heatmap,
    load_scenario,
    report_json,
    rows_to_csv,
    run_multihop,
    run_scenario,
    sweep_pattern,
)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--scenario", required=True, help="scenario JSON file")
    parser.add_argument("--report", help="write the report JSON here (default: stdout)")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized init")


def _add_codebook(parser: argparse.ArgumentParser):
    parser.add_argument("--codebook", help="write the text codebook here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risbeam",
        description="Simulate RIS-aided links and compute phase configurations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="far-field link via manifold descent")
    _add_common(p)
    _add_codebook(p)

    p = sub.add_parser("pcm", help="near-field link via phase compensation")
    _add_common(p)
    _add_codebook(p)

    p = sub.add_parser("quantize", help="run the scenario with 1-bit quantization on")
    _add_common(p)
    _add_codebook(p)

    p = sub.add_parser("sweep", help="power versus departure angle")
    _add_common(p)
    p.add_argument("--theta-start", type=float, default=-90.0)
    p.add_argument("--theta-stop", type=float, default=90.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=None, help="fixed azimuth (default: receiver's)")
    p.add_argument("--csv", help="write the sweep table here")

    p = sub.add_parser("heatmap", help="near-field coverage grid")
    _add_common(p)
    p.add_argument("--csv", help="write the heatmap table here")

    p = sub.add_parser("multihop", help="sequentially optimized relay chain")
    _add_common(p)
    _add_codebook(p)

    return parser


def _write(path: str | None, content: str):
    if path is None:
        sys.stdout.write(content)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)


def _emit_report(args, report: dict):
    _write(args.report, report_json(report))
    codebook_path = getattr(args, "codebook", None)
    if codebook_path:
        codebook = report.get("codebook")
        if codebook is None:
            raise ScenarioError("no codebook produced (enable quantize in the scenario)")
        _write(codebook_path, codebook["text"])


def _run(args) -> int:
    scenario = load_scenario(args.scenario)

    if args.command == "optimize":
        scenario = replace(scenario, mode="far_rgd")
        _emit_report(args, run_scenario(scenario, seed=args.seed))
    elif args.command == "pcm":
        scenario = replace(scenario, mode="near_pcm")
        _emit_report(args, run_scenario(scenario, seed=args.seed))
    elif args.command == "quantize":
        scenario = replace(scenario, quantize=True)
        _emit_report(args, run_scenario(scenario, seed=args.seed))
    elif args.command == "multihop":
        scenario = replace(scenario, mode="multihop")
        _emit_report(args, run_multihop(scenario, seed=args.seed))
    elif args.command == "sweep":
        rows, report = sweep_pattern(
            scenario, args.theta_start, args.theta_stop, args.step, args.phi, seed=args.seed
        )
        if args.csv:
            _write(args.csv, rows_to_csv(rows, "theta_deg,phi_deg,power_db"))
        _write(args.report, report_json(report))
    elif args.command == "heatmap":
        rows, report = coverage_heatmap(scenario, seed=args.seed)
        if args.csv:
            _write(args.csv, rows_to_csv(rows, "x_m,y_m,power_db"))
        _write(args.report, report_json(report))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ScenarioError, ValueError, RuntimeError, OSError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error, sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())
