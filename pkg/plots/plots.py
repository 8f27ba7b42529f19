#!/usr/bin/env python3
"""Render benchmark-harness CSV files as charts.

Three chart kinds, one per invocation:

  plots.py trace   --in trace_*.csv   --out fig.png   [--dim 10]
  plots.py score   --in aggregate.csv --out fig.png
  plots.py success --in aggregate.csv --out fig.png

`trace` draws a three-panel figure (best value, learning rates with a dotted
line at the default rate, path length) from one or more trace files; `score`
draws evaluations/success-rate against population size per learning-rate
mode, omitting zero-success points; `success` draws success-rate bars.

Exit codes: 0 ok, 2 bad invocation or malformed CSV, 3 missing file / I/O.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

TRACE_COLUMNS = ("evals", "f_best", "eta_sigma", "eta_b", "l_theta", "gamma")
AGGREGATE_COLUMNS = (
    "function", "dim", "lambda", "lr_mode", "multiplier", "trials",
    "success_rate", "mean_evals_success", "score", "base_seed",
)


class MalformedCsv(Exception):
    """Input row that does not conform to the harness schema."""


def default_learning_rate(dim: int) -> float:
    return 0.6 * (3.0 + math.log(dim)) / (dim * math.sqrt(dim))


def _parse_float(row_number, field, raw):
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise MalformedCsv(
            f"row {row_number}: field {field!r} is not numeric: {raw!r}"
        ) from None


def load_trace(path: Path) -> dict[str, list[float]]:
    """Read one trace CSV into column lists; unknown columns are ignored."""
    series: dict[str, list[float]] = {name: [] for name in TRACE_COLUMNS}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRACE_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise MalformedCsv(f"row 1: missing columns {sorted(missing)}")
        for number, row in enumerate(reader, start=2):
            for name in TRACE_COLUMNS:
                series[name].append(_parse_float(number, name, row[name]))
    if not series["evals"]:
        raise MalformedCsv("row 2: file contains no data rows")
    return series


def load_aggregate(path: Path) -> list[dict]:
    """Read aggregate rows; empty multiplier/score fields become None."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(AGGREGATE_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise MalformedCsv(f"row 1: missing columns {sorted(missing)}")
        for number, row in enumerate(reader, start=2):
            rows.append(
                {
                    "function": row["function"],
                    "lam": int(_parse_float(number, "lambda", row["lambda"])),
                    "mode": _mode_label(row),
                    "success_rate": _parse_float(number, "success_rate", row["success_rate"]),
                    "score": (
                        _parse_float(number, "score", row["score"]) if row["score"] else None
                    ),
                }
            )
    if not rows:
        raise MalformedCsv("row 2: file contains no data rows")
    return rows


def _mode_label(row) -> str:
    if row["lr_mode"] == "adaptive":
        return "adaptive"
    multiplier = row["multiplier"] or "1"
    return f"fixed x{float(multiplier):g}"


def score_series(rows: list[dict]) -> dict[str, tuple[list[int], list[float]]]:
    """Per-mode (lambdas, scores), with zero-success points left out."""
    series: dict[str, tuple[list[int], list[float]]] = {}
    for row in sorted(rows, key=lambda r: (r["mode"], r["lam"])):
        if row["success_rate"] <= 0.0 or row["score"] is None:
            continue
        xs, ys = series.setdefault(row["mode"], ([], []))
        xs.append(row["lam"])
        ys.append(row["score"])
    return series


def success_series(rows: list[dict]) -> dict[str, tuple[list[int], list[float]]]:
    series: dict[str, tuple[list[int], list[float]]] = {}
    for row in sorted(rows, key=lambda r: (r["mode"], r["lam"])):
        xs, ys = series.setdefault(row["mode"], ([], []))
        xs.append(row["lam"])
        ys.append(row["success_rate"])
    return series


def build_trace_figure(traces: dict[str, dict[str, list[float]]], dim: int):
    """Three stacked panels: f_best, learning rates, path length."""
    fig, (ax_f, ax_eta, ax_len) = plt.subplots(
        3, 1, figsize=(7.0, 8.5), sharex=True, constrained_layout=True
    )
    for label, tr in traces.items():
        ax_f.plot(tr["evals"], tr["f_best"], label=label)
        ax_eta.plot(tr["evals"], tr["eta_sigma"], label=f"{label} eta_sigma")
        ax_eta.plot(tr["evals"], tr["eta_b"], "--", label=f"{label} eta_b")
        ax_len.plot(tr["evals"], tr["l_theta"], label=f"{label} l_theta")
        ax_len.plot(tr["evals"], tr["gamma"], ":", alpha=0.6, label=f"{label} gamma")
    reference = default_learning_rate(dim)
    ax_eta.axhline(reference, linestyle=":", color="green", label="default rate")
    ax_f.set_yscale("log")
    ax_f.set_ylabel("best value")
    ax_eta.set_yscale("log")
    ax_eta.set_ylabel("learning rate")
    ax_len.set_ylabel("path length")
    ax_len.set_xlabel("evaluations")
    for ax in (ax_f, ax_eta, ax_len):
        ax.legend(fontsize="x-small")
        ax.grid(alpha=0.3)
    return fig


def build_score_figure(rows: list[dict]):
    fig, ax = plt.subplots(figsize=(6.5, 4.5), constrained_layout=True)
    for mode, (xs, ys) in sorted(score_series(rows).items()):
        ax.plot(xs, ys, marker="o", label=mode)
    ax.set_yscale("log")
    ax.set_xlabel("population size")
    ax.set_ylabel("evaluations / success rate")
    ax.legend(fontsize="small")
    ax.grid(alpha=0.3)
    return fig


def build_success_figure(rows: list[dict]):
    fig, ax = plt.subplots(figsize=(6.5, 4.5), constrained_layout=True)
    series = success_series(rows)
    lambdas = sorted({lam for xs, _ in series.values() for lam in xs})
    width = 0.8 / max(len(series), 1)
    for offset, (mode, (xs, ys)) in enumerate(sorted(series.items())):
        by_lam = dict(zip(xs, ys))
        positions = [i + offset * width for i in range(len(lambdas))]
        ax.bar(positions, [by_lam.get(lam, 0.0) for lam in lambdas],
               width=width, label=mode)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(lambdas))])
    ax.set_xticklabels([str(lam) for lam in lambdas])
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("population size")
    ax.set_ylabel("success rate")
    ax.legend(fontsize="small")
    ax.grid(alpha=0.3, axis="y")
    return fig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots.py", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, blurb in (
        ("trace", "multi-panel run trace"),
        ("score", "score against population size"),
        ("success", "success-rate bars"),
    ):
        cmd = sub.add_parser(kind, help=blurb)
        cmd.add_argument("--in", dest="inputs", nargs="+", required=True,
                         help="input CSV file(s)")
        cmd.add_argument("--out", required=True, help="output image file")
        cmd.add_argument("--format", choices=("png", "svg"), default="png")
        if kind == "trace":
            cmd.add_argument("--dim", type=int, default=10,
                             help="problem dimension for the default-rate line")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    paths = [Path(p) for p in args.inputs]
    for path in paths:
        if not path.is_file():
            print(f"error: input file not found: {path}", file=sys.stderr)
            return EXIT_IO
    try:
        if args.kind == "trace":
            traces = {path.stem: load_trace(path) for path in paths}
            fig = build_trace_figure(traces, args.dim)
        else:
            rows = [row for path in paths for row in load_aggregate(path)]
            fig = build_score_figure(rows) if args.kind == "score" else build_success_figure(rows)
    except MalformedCsv as exc:
        print(f"error: malformed CSV: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        fig.savefig(args.out, format=args.format, dpi=150)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        plt.close(fig)
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
