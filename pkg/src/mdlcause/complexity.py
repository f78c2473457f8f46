"""Two-part description length of a series under a binning, and its minimum.

Costs are in bits and split three ways:

* model cost: one bit per bin plus ``log2`` of each coded bin's Shannon code length,
* code-length cost: ``log2`` of the code length of each point's bin,
* error cost: ``log2 |p - mean(bin_p)|`` per point, clamped to [1, 7].

All sums go through :func:`math.fsum`, so results are independent of point
order and of how the terms were grouped.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .binning import (
    DEFAULT_MAX_BINS,
    Binning,
    NormalizedSeries,
    make_uniform_binning,
)
from .errors import ContractViolation, InvalidParameterError

ERROR_FLOOR = 1.0
ERROR_CEIL = 7.0  # ceil(log2(100)) for data on [0, 100]

Strategy = Literal["uniform", "greedy"]
TRACE_FIELDS = ("bin_count", "model_cost", "code_length_cost", "error_cost", "total")


@dataclass(frozen=True)
class CostBreakdown:
    model_cost: float
    code_length_cost: float
    error_cost: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "total", math.fsum((self.model_cost, self.code_length_cost, self.error_cost))
        )

    @property
    def total_without_error(self) -> float:
        return math.fsum((self.model_cost, self.code_length_cost))


@dataclass(frozen=True, eq=False)
class ComplexityEstimate:
    """Minimum-cost binning found by a strategy, with the full search trace."""

    k_value: float
    k_value_no_error: float
    optimal_binning: Binning
    trace: tuple[tuple[int, CostBreakdown], ...]
    strategy: Strategy = "uniform"

    @property
    def optimal_bin_count(self) -> int:
        return self.optimal_binning.n_bins

    @property
    def optimal_cost(self) -> CostBreakdown:
        for b, cost in self.trace:
            if b == self.optimal_bin_count:
                return cost
        raise ContractViolation("optimal bin count missing from trace")


def point_error_costs(values: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Per-point error bits, ``clip(log2|p - center|, 1, 7)``; an exact hit costs 1 bit."""
    with np.errstate(divide="ignore"):
        raw = np.log2(np.abs(values - centers))
    return np.clip(raw, ERROR_FLOOR, ERROR_CEIL)


def model_cost(counts: np.ndarray, code_lengths: np.ndarray) -> float:
    coded = counts > 0
    terms = 1.0 + np.log2(code_lengths[coded].astype(float))
    return math.fsum(np.concatenate([terms, np.ones(int((~coded).sum()))]))


def complexity(series: NormalizedSeries, binning: Binning) -> CostBreakdown:
    """Cost breakdown of ``series`` coded with ``binning``."""
    values = series.values
    idx = binning.assign(values)
    recount = np.bincount(idx, minlength=binning.n_bins)
    if recount.size != binning.n_bins or not np.array_equal(recount, binning.counts):
        raise ContractViolation("binning counts do not match the series")

    log_cl = np.zeros(binning.n_bins)
    coded = binning.counts > 0
    log_cl[coded] = np.log2(binning.code_lengths[coded].astype(float))

    return CostBreakdown(
        model_cost=model_cost(binning.counts, binning.code_lengths),
        code_length_cost=math.fsum(log_cl[idx]),
        error_cost=math.fsum(point_error_costs(values, binning.means[idx])),
    )


def default_max_bins(n: int) -> int:
    return min(n, DEFAULT_MAX_BINS)


def _pick(trace: Sequence[tuple[int, CostBreakdown]]) -> int:
    # strict < keeps the smallest bin count among equal totals
    best = 0
    for i in range(1, len(trace)):
        if trace[i][1].total < trace[best][1].total:
            best = i
    return best


def uniform_trace(series: NormalizedSeries, max_bins: int):
    binnings, trace = [], []
    for b in range(1, max_bins + 1):
        binning = make_uniform_binning(series, b, max_bins=max_bins)
        binnings.append(binning)
        trace.append((b, complexity(series, binning)))
    return binnings, trace


def estimate_k(
    series: NormalizedSeries,
    strategy: Strategy = "uniform",
    max_bins: int | None = None,
    m: int = 128,
) -> ComplexityEstimate:
    """Estimate K(X) as the minimum total cost over a family of binnings.

    ``uniform`` evaluates every equal-width layout with 1..max_bins bins;
    ``greedy`` takes the minimum along the greedy refinement trajectory.
    ``max_bins`` defaults to ``min(n, 200)``.
    """
    if max_bins is None:
        max_bins = default_max_bins(series.n)
    if max_bins < 1:
        raise InvalidParameterError(f"max_bins must be >= 1, got {max_bins}")

    if strategy == "uniform":
        binnings, trace = uniform_trace(series, max_bins)
    elif strategy == "greedy":
        from .greedy import greedy_refine

        steps = greedy_refine(series, max_bins, m)
        binnings = [bn for bn, _ in steps]
        trace = [(bn.n_bins, cost) for bn, cost in steps]
    else:
        raise InvalidParameterError(f"unknown strategy {strategy!r}")

    best = _pick(trace)
    cost = trace[best][1]
    return ComplexityEstimate(
        k_value=cost.total,
        k_value_no_error=cost.total_without_error,
        optimal_binning=binnings[best],
        trace=tuple(trace),
        strategy=strategy,
    )


def write_trace_csv(traces, fh):
    """Write cost-trace rows to an open text file.

    ``traces`` is either one trace or a mapping of strategy name to trace; the
    mapping form adds a leading ``strategy`` column so traces can share a file.
    """
    writer = csv.writer(fh)
    labelled = isinstance(traces, dict)
    header = list(TRACE_FIELDS)
    if labelled:
        header.insert(0, "strategy")
    writer.writerow(header)
    items = traces.items() if labelled else [(None, traces)]
    for label, trace in items:
        for b, cost in trace:
            row = [b, repr(cost.model_cost), repr(cost.code_length_cost),
                   repr(cost.error_cost), repr(cost.total)]
            if labelled:
                row.insert(0, label)
            writer.writerow(row)


def read_trace_csv(fh) -> dict[str, list[tuple[int, CostBreakdown]]]:
    """Inverse of :func:`write_trace_csv`; unlabelled traces come back under ``""``."""
    out: dict[str, list[tuple[int, CostBreakdown]]] = {}
    for row in csv.DictReader(fh):
        cost = CostBreakdown(float(row["model_cost"]), float(row["code_length_cost"]),
                             float(row["error_cost"]))
        out.setdefault(row.get("strategy", ""), []).append((int(row["bin_count"]), cost))
    return out
