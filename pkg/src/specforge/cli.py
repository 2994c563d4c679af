"""Command-line pipeline: synthesize data, generate specs, evaluate, verify, render.

Exit codes: 0 success, 1 usage error, 2 data or schema error. Every command
is deterministic given its flags, and the effective configuration is echoed
into output metadata so results can be reproduced from their own headers.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .dataset import (
    Dataset,
    DatasetStats,
    TaskKind,
    bin_labels,
    load_csv,
    save_csv,
    split,
    synth_spiral,
    synth_throughput_series,
    window_timeseries,
)
from .cluster import ClusterParams
from .evaluation import evaluate, format_report
from .generators import DEFAULT_CELL_CAP, gen_cluster, gen_grid, gen_human_throughput, gen_tree
from .network import load_network
from .render import render_specs
from .speccore import ClassLabel, load_specset, save_specset
from .tree import TreeParams
from .verifier import verify_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

CELL_CAP_ENV = "SPECFORGE_CELL_CAP"


class UsageError(Exception):
    """Bad flags or parameter combinations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _echo(command: str, **config) -> None:
    print(f"# {command} config: " + " ".join(f"{k}={v}" for k, v in config.items()))


def _load_dataset(path, label_column, task: str) -> Dataset:
    """Load a CSV with --task auto|classification|regression semantics."""
    if task == "classification":
        return load_csv(path, label_column, TaskKind.CLASSIFICATION)
    data = load_csv(path, label_column, TaskKind.REGRESSION)
    if task == "regression":
        return data
    ints = data.labels.astype(np.int64)
    if np.all(data.labels == ints) and np.all(ints >= 0):
        return Dataset(data.features, ints, TaskKind.CLASSIFICATION, data.feature_names)
    return data


def _cell_cap() -> int:
    raw = os.environ.get(CELL_CAP_ENV)
    if raw is None:
        return DEFAULT_CELL_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{CELL_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UsageError(f"{CELL_CAP_ENV} must be >= 1, got {cap}")
    return cap


def cmd_synth(args) -> None:
    if args.kind == "spiral":
        if args.classes < 2:
            raise UsageError("--classes must be >= 2")
        if args.per_class < 1:
            raise UsageError("--per-class must be >= 1")
        if args.noise < 0:
            raise UsageError("--noise must be >= 0")
        data = synth_spiral(args.per_class, args.classes, args.noise, args.seed)
        _echo("synth", kind="spiral", per_class=args.per_class, classes=args.classes,
              noise=args.noise, seed=args.seed, out=args.out)
    else:
        if args.window < 1:
            raise UsageError("--window must be >= 1")
        if args.length <= args.window:
            raise UsageError("--length must exceed --window")
        series = synth_throughput_series(args.length, args.seed, args.peak)
        data = window_timeseries(series, args.window)
        if args.bins:
            data = bin_labels(data, args.bins, bin_features=args.bin_features)
        _echo("synth", kind="timeseries", length=args.length, window=args.window,
              peak=args.peak, bins=args.bins, seed=args.seed, out=args.out)
    save_csv(data, args.out)
    print(f"wrote {data.n} rows x {data.dim} features ({data.task.value}) to {args.out}")


def cmd_gen(args) -> None:
    if not 0.0 < args.split < 1.0:
        raise UsageError("--split must lie in (0, 1)")
    if args.algo == "human":
        if args.bins < 2:
            raise UsageError("--bins must be >= 2")
        specset = gen_human_throughput(args.bins)
        specset.metadata["params"]["source"] = "enumerated"
        save_specset(specset, args.out)
        _echo("gen", algo="human", bins=args.bins, out=args.out)
        print(f"wrote {len(specset)} specs to {args.out}")
        return

    if args.data is None:
        raise UsageError(f"--algo {args.algo} needs a dataset file")
    data = _load_dataset(args.data, args.label_column, args.task)
    stats = DatasetStats.from_datasets(data)
    if args.no_split:
        gen_fold, eval_fold = data, None
    else:
        gen_fold, eval_fold = split(data, args.split, args.seed, shuffle=not args.no_shuffle)

    if args.algo == "grid":
        if args.beta < 1:
            raise UsageError("--beta must be >= 1")
        specset = gen_grid(gen_fold, args.beta, cell_cap=_cell_cap())
    elif args.algo == "cluster":
        if args.k < 1:
            raise UsageError("--k must be >= 1")
        specset = gen_cluster(gen_fold, ClusterParams(k=args.k, seed=args.seed))
    else:
        if args.min_leaf < 1:
            raise UsageError("--min-leaf must be >= 1")
        if args.max_depth is not None and args.max_depth < 0:
            raise UsageError("--max-depth must be >= 0")
        params = TreeParams(
            max_depth=args.max_depth,
            min_samples_leaf=args.min_leaf,
            min_samples_split=max(2, args.min_leaf + 1),
            seed=args.seed,
        )
        specset = gen_tree(gen_fold, params)

    specset.metadata["params"].update(
        {
            "source": str(args.data),
            "split": None if args.no_split else args.split,
            "split_seed": args.seed,
            "shuffled": not args.no_shuffle,
            "stats": stats.to_dict(),
        }
    )
    save_specset(specset, args.out)
    if args.eval_out and eval_fold is not None:
        save_csv(eval_fold, args.eval_out)
    _echo("gen", algo=args.algo, data=args.data, split=args.split, seed=args.seed, out=args.out)
    print(f"wrote {len(specset)} specs to {args.out} (generation fold: {gen_fold.n} rows)")
    if args.eval_out and eval_fold is not None:
        print(f"wrote evaluation fold ({eval_fold.n} rows) to {args.eval_out}")


def cmd_eval(args) -> None:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("--alpha must lie in (0, 1)")
    specset = load_specset(args.specs)
    eval_data = load_csv(args.data, args.label_column, specset.task)
    if eval_data.dim != specset.feature_dim:
        raise ValueError(
            f"dimension mismatch: spec file {args.specs} is {specset.feature_dim}-D "
            f"but dataset {args.data} has {eval_data.dim} features"
        )
    if args.full:
        stats = DatasetStats.from_datasets(load_csv(args.full, args.label_column, specset.task))
    elif isinstance(specset.metadata.get("params"), dict) and "stats" in specset.metadata["params"]:
        stats = DatasetStats.from_dict(specset.metadata["params"]["stats"])
    else:
        stats = DatasetStats.from_datasets(eval_data)
    report = evaluate(specset, eval_data, args.alpha, stats)
    _echo("eval", specs=args.specs, data=args.data, alpha=args.alpha)
    print(format_report(report))
    if report.specs_filtered:
        print(f"(range filter removed {report.specs_filtered} of {len(specset)} specs)")
    if args.out:
        doc = report.to_dict()
        doc["config"] = {"specs": str(args.specs), "data": str(args.data), "alpha": args.alpha}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"wrote report to {args.out}")


def _write_cex_csv(summary, dim: int, out_dim: int, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = (
            ["spec_index", "provenance", "source"]
            + [f"x{j}" for j in range(dim)]
            + [f"out{j}" for j in range(out_dim)]
            + ["expected_class", "expected_lo", "expected_hi"]
        )
        writer.writerow(header)
        for c in summary.counterexamples:
            if isinstance(c.expected, ClassLabel):
                expected = [c.expected.label, "", ""]
            else:
                expected = ["", repr(c.expected.lo), repr(c.expected.hi)]
            writer.writerow(
                [c.spec_index, c.provenance, c.source]
                + [repr(float(v)) for v in c.x]
                + [repr(float(v)) for v in c.output]
                + expected
            )


def cmd_verify(args) -> None:
    if args.budget < 0:
        raise UsageError("--budget must be >= 0")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    net = load_network(args.net)
    specset = load_specset(args.specs)
    eval_data = None
    if args.data:
        eval_data = load_csv(args.data, args.label_column, specset.task)
    if eval_data is not None:
        stats = DatasetStats.from_datasets(eval_data)
    elif isinstance(specset.metadata.get("params"), dict) and "stats" in specset.metadata["params"]:
        stats = DatasetStats.from_dict(specset.metadata["params"]["stats"])
    else:
        stats = None

    summary = verify_all(net, specset, stats, args.budget, args.seed, eval_data)
    _echo("verify", net=args.net, specs=args.specs, budget=args.budget, seed=args.seed)
    print(f"verified: {summary.verified}  violated: {summary.violated}  unknown: {summary.unknown}")
    n_cex = len(summary.counterexamples)
    print(f"counterexamples recorded: {n_cex}")
    for c in summary.counterexamples[:5]:
        x = ", ".join(f"{v:.4g}" for v in c.x)
        out = ", ".join(f"{v:.4g}" for v in c.output)
        want = f"class {c.expected.label}" if isinstance(c.expected, ClassLabel) else f"[{c.expected.lo:.4g}, {c.expected.hi:.4g}]"
        print(f"  spec {c.spec_index} ({c.provenance}): input ({x}) -> output ({out}), expected {want} [{c.source}]")

    if args.out:
        doc = {
            "config": {"net": str(args.net), "specs": str(args.specs), "budget": args.budget, "seed": args.seed},
            "verified": summary.verified,
            "violated": summary.violated,
            "unknown": summary.unknown,
            "results": [
                {
                    "spec_index": r.spec_index,
                    "provenance": r.provenance,
                    "status": r.status.value,
                    "clamped": r.clamped,
                    "output_lower": [float(v) for v in r.bounds.lower],
                    "output_upper": [float(v) for v in r.bounds.upper],
                    "counterexamples": len(r.counterexamples),
                }
                for r in summary.results
            ],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"wrote report to {args.out}")
    if args.cex:
        _write_cex_csv(summary, specset.feature_dim, net.output_dim, args.cex)
        print(f"wrote {n_cex} counterexamples to {args.cex}")


def cmd_render(args) -> None:
    specset = load_specset(args.specs)
    data = load_csv(args.data, args.label_column, specset.task)
    if data.dim != 2 or specset.feature_dim != 2:
        raise UsageError(
            f"rendering needs 2-D data; {args.data} has {data.dim} features "
            f"and {args.specs} is {specset.feature_dim}-D"
        )
    render_specs(specset, data, args.out)
    _echo("render", specs=args.specs, data=args.data, out=args.out)
    print(f"wrote figure to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specforge", description="Mine, score, and check input-output specifications.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="synthesize a dataset CSV")
    p.add_argument("kind", choices=["spiral", "timeseries"])
    p.add_argument("--per-class", type=int, default=300, help="spiral points per class")
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--noise", type=float, default=0.2, help="spiral angle noise std")
    p.add_argument("--length", type=int, default=1200, help="timeseries length before windowing")
    p.add_argument("--window", type=int, default=4, help="history window width")
    p.add_argument("--peak", type=float, default=100.0, help="timeseries maximum level")
    p.add_argument("--bins", type=int, default=0, help="bin timeseries labels into this many classes (0 = raw)")
    p.add_argument("--bin-features", action="store_true", help="also map features to bin indices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gen", help="generate a specification set from a dataset")
    p.add_argument("data", nargs="?", help="dataset CSV (not needed for --algo human)")
    p.add_argument("--algo", required=True, choices=["grid", "cluster", "tree", "human"])
    p.add_argument("--beta", type=int, default=10, help="grid cells per dimension")
    p.add_argument("--k", type=int, default=30, help="number of clusters")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--bins", type=int, default=10, help="bin count for --algo human")
    p.add_argument("--split", type=float, default=0.9, help="generation-fold fraction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-shuffle", action="store_true", help="chronological split instead of shuffled")
    p.add_argument("--no-split", action="store_true", help="use the whole file as the generation fold")
    p.add_argument("--task", choices=["auto", "classification", "regression"], default="auto")
    p.add_argument("--label-column", default="label")
    p.add_argument("--out", required=True)
    p.add_argument("--eval-out", help="also write the evaluation fold CSV here")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="score a spec file against an evaluation dataset")
    p.add_argument("specs")
    p.add_argument("data", help="evaluation fold CSV")
    p.add_argument("--alpha", type=float, default=0.1, help="output-range filter fraction")
    p.add_argument("--full", help="full dataset CSV for range stats (defaults to spec-file metadata)")
    p.add_argument("--label-column", default="label")
    p.add_argument("--out", help="write the report as JSON here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check a network against a spec file")
    p.add_argument("net", help="network weights JSON")
    p.add_argument("specs")
    p.add_argument("--data", help="evaluation CSV used for stats and dataset falsification")
    p.add_argument("--budget", type=int, default=10_000, help="random samples per spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label-column", default="label")
    p.add_argument("--out", help="write the report as JSON here")
    p.add_argument("--cex", help="write counterexamples as CSV here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw 2-D data and spec boxes as SVG")
    p.add_argument("specs")
    p.add_argument("data")
    p.add_argument("--label-column", default="label")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except UsageError as e:
        print(f"specforge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, RuntimeError) as e:
        print(f"specforge: error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
