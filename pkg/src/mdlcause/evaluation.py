"""Benchmark runs over a registry and precision-versus-threshold sweeps."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .data import DatasetRegistryEntry, fetch_dataset
from .errors import InvalidParameterError, MDLCauseError
from .inference import INCONCLUSIVE, CausalVerdict, InferenceConfig, PairAnalysis, infer_pair

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BenchmarkRow:
    entry: DatasetRegistryEntry
    analysis: PairAnalysis

    @property
    def ground_truth(self) -> str:
        return self.entry.ground_truth

    def verdict(self, threshold: float) -> CausalVerdict:
        return self.analysis.verdict_at(threshold)


@dataclass(frozen=True)
class BenchmarkFailure:
    entry: DatasetRegistryEntry
    error: str


@dataclass(frozen=True, eq=False)
class BenchmarkReport:
    rows: tuple
    failures: tuple = ()

    def verdicts(self, threshold: float) -> list[CausalVerdict]:
        return [r.verdict(threshold) for r in self.rows]

    def precision(self, threshold: float) -> Optional[float]:
        return precision(self.rows, threshold)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class SweepResult:
    thresholds: list
    precision_at: list  # None where no verdict was conclusive
    conclusive_counts: list
    correct_counts: list = field(default_factory=list)

    def spread(self) -> Optional[float]:
        """Max minus min precision over thresholds with a defined value."""
        vals = [p for p in self.precision_at if p is not None]
        return max(vals) - min(vals) if vals else None


def _score(rows: Sequence[BenchmarkRow], threshold: float) -> tuple[int, int]:
    conclusive = correct = 0
    for row in rows:
        v = row.verdict(threshold)
        if v.direction == INCONCLUSIVE:
            continue
        conclusive += 1
        correct += v.direction == row.ground_truth
    return correct, conclusive


def precision(rows: Sequence[BenchmarkRow], threshold: float) -> Optional[float]:
    """Fraction of conclusive verdicts that match ground truth; None if none are conclusive."""
    correct, conclusive = _score(rows, threshold)
    return correct / conclusive if conclusive else None


def _evaluate(entry: DatasetRegistryEntry, cache_dir, config: InferenceConfig):
    try:
        ds = fetch_dataset(entry, cache_dir)
        return infer_pair(ds.x, ds.y, config, dataset=entry.name), None
    except MDLCauseError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_benchmark(entries: Sequence[DatasetRegistryEntry], config: InferenceConfig | None = None,
                  cache_dir=None, workers: int = 1) -> BenchmarkReport:
    """Infer every registry pair; failures are collected, not raised.

    Rows come back in registry order whatever the worker count.
    """
    config = config or InferenceConfig()
    if workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, entries, [cache_dir] * len(entries),
                                    [config] * len(entries)))
    else:
        results = [_evaluate(e, cache_dir, config) for e in entries]

    rows, failures = [], []
    for entry, (analysis, err) in zip(entries, results):
        if err is None:
            rows.append(BenchmarkRow(entry, analysis))
        else:
            log.warning("%s failed: %s", entry.label, err)
            failures.append(BenchmarkFailure(entry, err))
    return BenchmarkReport(tuple(rows), tuple(failures))


def sweep_thresholds(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 1 or lo < 0 or hi < lo:
        raise InvalidParameterError("need 0 <= min <= max and steps >= 1")
    if steps == 1:
        return [float(lo)]
    return [float(t) for t in np.linspace(lo, hi, steps)]


def sweep(rows: Sequence[BenchmarkRow], lo: float, hi: float, steps: int) -> SweepResult:
    """Precision at evenly spaced thresholds, reusing each pair's complexities."""
    thresholds = sweep_thresholds(lo, hi, steps)
    prec, conc, corr = [], [], []
    for t in thresholds:
        correct, conclusive = _score(rows, t)
        prec.append(correct / conclusive if conclusive else None)
        conc.append(conclusive)
        corr.append(correct)
    return SweepResult(thresholds, prec, conc, corr)


def write_sweep_csv(result: SweepResult, fh):
    writer = csv.writer(fh)
    writer.writerow(["threshold", "precision", "conclusive", "correct"])
    for t, p, c, k in zip(result.thresholds, result.precision_at, result.conclusive_counts,
                          result.correct_counts):
        writer.writerow([repr(t), "" if p is None else repr(p), c, k])
