"""Command-line entry point: ``mdlcause {infer,benchmark,sweep,trace,generate}``."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

from . import data
from .complexity import estimate_k, write_trace_csv
from .errors import (
    DegenerateColumnError,
    EncodingError,
    FetchError,
    MDLCauseError,
    ParseError,
)
from .evaluation import run_benchmark, sweep, write_sweep_csv
from .greedy import DEFAULT_CANDIDATES
from .inference import InferenceConfig, format_table, infer_pair, write_jsonl

EXIT_OK = 0
EXIT_FAILURES = 1  # some benchmark entries failed, or an unclassified error
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_DEGENERATE = 5
EXIT_INVALID = 6


class StageError(Exception):
    def __init__(self, stage: str, cause: MDLCauseError):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except MDLCauseError as exc:
        raise StageError(name, exc) from exc


def exit_code_for(exc: MDLCauseError) -> int:
    if isinstance(exc, FetchError):
        return EXIT_IO
    if isinstance(exc, (ParseError, EncodingError)):
        return EXIT_PARSE
    if isinstance(exc, DegenerateColumnError):
        return EXIT_DEGENERATE
    if isinstance(exc, ValueError):
        return EXIT_INVALID
    return EXIT_FAILURES


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", newline="")
        except OSError as exc:
            raise StageError("write", FetchError(f"cannot open {path}: {exc}")) from exc
        with fh:
            yield fh


def _parse_ordinal(specs) -> dict:
    out = {}
    for spec in specs or []:
        col, sep, labels = spec.partition("=")
        if not sep or not labels:
            raise StageError("arguments", ParseError(f"--ordinal expects COL=a,b,c, got {spec!r}"))
        out[col] = labels.split(",")
    return out


def cmd_infer(args) -> int:
    ordinal = _parse_ordinal(args.ordinal)
    with stage("read"):
        xs, ys, dropped = data.read_csv_pair(args.csv, args.x_col, args.y_col, ordinal)
    with stage("normalize"):
        x = data.normalize(xs, args.x_col)
        y = data.normalize(ys, args.y_col)
    with stage("infer"):
        config = InferenceConfig(max_bins=args.max_bins, threshold=args.threshold)
        analysis = infer_pair(x, y, config, dataset=args.dataset or args.csv)
    v = analysis.verdict
    print(format_table([v]))
    print(f"rows used: {x.n}, dropped: {dropped}")
    print(json.dumps(v.complexities, indent=2))
    if args.out:
        with _output(args.out) as fh:
            write_jsonl([v], fh)
    return EXIT_OK


def _benchmark(args):
    with stage("registry"):
        entries = data.load_registry(args.registry)
    if args.only:
        entries = [e for e in entries if e.name in args.only]
    config = InferenceConfig(max_bins=args.max_bins, threshold=getattr(args, "threshold", 0.0))
    report = run_benchmark(entries, config, cache_dir=args.cache_dir, workers=args.workers)
    for f in report.failures:
        print(f"failed {f.entry.label}: {f.error}", file=sys.stderr)
    return report


def _fmt_precision(p) -> str:
    return "absent" if p is None else f"{100 * p:.1f}%"


def cmd_benchmark(args) -> int:
    report = _benchmark(args)
    verdicts = report.verdicts(args.threshold)
    print(format_table(verdicts))
    print(f"precision at threshold {args.threshold:g}%: {_fmt_precision(report.precision(args.threshold))}")
    if args.out:
        with _output(args.out) as fh:
            write_jsonl(verdicts, fh)
    return EXIT_OK if report.ok else EXIT_FAILURES


def cmd_sweep(args) -> int:
    report = _benchmark(args)
    with stage("sweep"):
        result = sweep(report.rows, args.min, args.max, args.steps)
    with _output(args.out) as fh:
        write_sweep_csv(result, fh)
    return EXIT_OK if report.ok else EXIT_FAILURES


def _trace_source(args):
    if args.toy:
        with stage("generate"):
            if args.toy == "solar_pair":
                x, y = data.generate_toy("solar_pair", args.n, args.seed)
                return y if args.column == "power" else x
            return data.generate_toy(args.toy, args.n, args.seed)
    if not args.csv or not args.column:
        raise StageError("arguments", ParseError("trace needs --csv with --column, or --toy"))
    with stage("read"):
        vals, _, _ = data.read_csv_pair(args.csv, args.column, args.column,
                                        _parse_ordinal(args.ordinal))
    with stage("normalize"):
        return data.normalize(vals, args.column)


def cmd_trace(args) -> int:
    series = _trace_source(args)
    strategies = ["uniform", "greedy"] if args.strategy == "both" else [args.strategy]
    traces = {}
    with stage("estimate"):
        for s in strategies:
            est = estimate_k(series, s, args.max_bins, args.m)
            traces[s] = est.trace
            print(f"{s}: K = {est.k_value:.2f} bits at {est.optimal_bin_count} bins",
                  file=sys.stderr)
    with _output(args.out) as fh:
        # a lone strategy gets the bare five-column layout
        write_trace_csv(traces if len(traces) > 1 else traces[strategies[0]], fh)
    return EXIT_OK


def cmd_generate(args) -> int:
    with stage("generate"):
        out = data.generate_toy(args.kind, args.n, args.seed)
    columns = {s.source_label: s.values for s in (out if isinstance(out, tuple) else (out,))}
    with _output(args.out) as fh:
        data.write_series_csv(fh, columns)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdlcause", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--max-bins", type=int, default=None,
                        help="largest uniform bin count tried (default min(n, 200))")

    def registry(sp):
        sp.add_argument("--registry", default=None, help="registry JSON (default: bundled)")
        sp.add_argument("--cache-dir", default=None,
                        help=f"dataset cache (default ${data.CACHE_ENV} or ~/.cache/mdlcause)")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--only", action="append", help="restrict to datasets with this name")

    sp = sub.add_parser("infer", help="infer the direction between two CSV columns")
    sp.add_argument("csv")
    sp.add_argument("--x-col", required=True)
    sp.add_argument("--y-col", required=True)
    sp.add_argument("--threshold", type=float, default=0.0)
    sp.add_argument("--ordinal", action="append", metavar="COL=a,b,c")
    sp.add_argument("--dataset", default=None)
    sp.add_argument("--out", default=None, help="write the verdict as JSON lines")
    common(sp)
    sp.set_defaults(func=cmd_infer)

    sp = sub.add_parser("benchmark", help="run every registry pair")
    sp.add_argument("--threshold", type=float, default=0.0)
    sp.add_argument("--out", default=None)
    registry(sp)
    common(sp)
    sp.set_defaults(func=cmd_benchmark)

    sp = sub.add_parser("sweep", help="precision across conclusivity thresholds")
    sp.add_argument("--min", type=float, default=0.0)
    sp.add_argument("--max", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=6)
    sp.add_argument("--out", default=None)
    registry(sp)
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("trace", help="cost trace over bin counts")
    sp.add_argument("--csv", default=None)
    sp.add_argument("--column", default=None)
    sp.add_argument("--ordinal", action="append", metavar="COL=a,b,c")
    sp.add_argument("--toy", choices=data.TOY_KINDS, default=None)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--strategy", choices=("uniform", "greedy", "both"), default="uniform")
    sp.add_argument("--m", type=int, default=DEFAULT_CANDIDATES,
                    help="greedy candidate splits per step")
    sp.add_argument("--out", default=None)
    common(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("generate", help="write toy data as CSV")
    sp.add_argument("--kind", choices=data.TOY_KINDS, required=True)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return exit_code_for(exc.cause)


if __name__ == "__main__":
    sys.exit(main())
