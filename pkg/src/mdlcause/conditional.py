"""Conditional complexity K(X|Y) by reusing Y's binning and balancing counts.

X is binned with Y's optimal uniform bin count. Its counts are then moved,
one transfer at a time, until they equal Y's; every transfer is charged
``1 + log2(b)`` bits. The points of X are finally coded with the Shannon code
of the balanced counts. Y's bin layout itself is free, so no per-bin model
cost is charged.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .binning import NormalizedSeries, bin_statistics, shannon_code_length, uniform_index
from .complexity import ComplexityEstimate, estimate_k, point_error_costs
from .errors import ContractViolation, InvalidParameterError, PairedDataError


@dataclass(frozen=True, eq=False)
class BalanceTrace:
    """Transfers applied to X's counts; each step is ``(i, j, moved)``, i receiving."""

    steps: tuple[tuple[int, int, int], ...]
    step_cost: float
    final_counts: np.ndarray

    @property
    def total_cost(self) -> float:
        return math.fsum([self.step_cost] * len(self.steps))

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True, eq=False)
class ConditionalEstimate:
    raw_conditional: float
    capped_conditional: float
    balance: BalanceTrace
    bin_count_used: int
    code_length_cost: float
    error_cost: float
    include_error: bool
    unconditional: float

    @property
    def capped(self) -> bool:
        return self.capped_conditional < self.raw_conditional


def balance_counts(counts_x, counts_y) -> BalanceTrace:
    """Move X's counts onto Y's, largest deficit against largest surplus.

    Each transfer settles at least one bin fully, so at most ``b - 1`` steps
    are taken. Ties go to the smaller bin index.
    """
    cur = np.array(counts_x, dtype=np.int64)
    target = np.asarray(counts_y, dtype=np.int64)
    if cur.shape != target.shape or cur.ndim != 1 or cur.size == 0:
        raise ContractViolation("count vectors must be 1-D and of equal, non-zero length")
    if np.any(cur < 0) or np.any(target < 0):
        raise ContractViolation("counts must be non-negative")
    if cur.sum() != target.sum():
        raise ContractViolation("count vectors must share the same total")

    steps = []
    diff = target - cur
    while diff.max() > 0:
        i = int(np.argmax(diff))
        j = int(np.argmin(diff))
        moved = int(min(diff[i], -diff[j]))
        cur[i] += moved
        cur[j] -= moved
        diff[i] -= moved
        diff[j] += moved
        steps.append((i, j, moved))
    cur.setflags(write=False)
    return BalanceTrace(tuple(steps), 1.0 + math.log2(target.size), cur)


def conditional_k(
    x: NormalizedSeries,
    y: NormalizedSeries,
    y_estimate: ComplexityEstimate,
    include_error: bool = False,
    x_estimate: Optional[ComplexityEstimate] = None,
    max_bins: Optional[int] = None,
) -> ConditionalEstimate:
    """Estimate K(X|Y) and its capped form ``min(K(X|Y), K(X))``.

    ``y_estimate`` must come from the uniform strategy on ``y``. The cap uses
    ``x_estimate`` (computed if not given) in the same accounting mode: with
    error cost when ``include_error`` is set, without it otherwise.
    """
    if x.n != y.n:
        raise PairedDataError(f"series lengths differ: {x.n} vs {y.n}")
    if y_estimate.strategy != "uniform":
        raise InvalidParameterError("conditioning requires a uniform estimate of Y")
    b = y_estimate.optimal_bin_count
    if b < 1:
        raise ContractViolation("conditioning binning has no bins")
    counts_y = y_estimate.optimal_binning.counts
    if int(counts_y.sum()) != y.n:
        raise ContractViolation("y_estimate was not computed on y")

    n = x.n
    idx = uniform_index(x.values, b)
    counts_x, means_x = bin_statistics(x.values, idx, b)
    trace = balance_counts(counts_x, counts_y)

    # bins emptied by balancing may still hold points of X; code them as singletons
    code_lengths = np.array(
        [shannon_code_length(max(int(c), 1), n) for c in trace.final_counts], dtype=float
    )
    code_cost = math.fsum(np.log2(code_lengths)[idx])
    error_cost = math.fsum(point_error_costs(x.values, means_x[idx])) if include_error else 0.0
    raw = math.fsum((trace.total_cost, code_cost, error_cost))

    if x_estimate is None:
        x_estimate = estimate_k(x, "uniform", max_bins)
    unconditional = x_estimate.k_value if include_error else x_estimate.k_value_no_error
    return ConditionalEstimate(
        raw_conditional=raw,
        capped_conditional=min(raw, unconditional),
        balance=trace,
        bin_count_used=b,
        code_length_cost=code_cost,
        error_cost=error_cost,
        include_error=include_error,
        unconditional=unconditional,
    )


def write_balance_csv(trace: BalanceTrace, fh):
    writer = csv.writer(fh)
    writer.writerow(["step", "i", "j", "transferred"])
    for k, (i, j, moved) in enumerate(trace.steps, start=1):
        writer.writerow([k, i, j, moved])
