"""Greedy bin refinement: insert one boundary per step where it lowers cost most."""

from __future__ import annotations

import math

import numpy as np

from .binning import HIGH, LOW, NormalizedSeries, make_binning, shannon_code_length
from .complexity import complexity, point_error_costs
from .errors import InvalidParameterError

DEFAULT_CANDIDATES = 128


def _segment_cost(seg: np.ndarray, n: int) -> float:
    # the part of the total cost owned by one non-empty bin
    cl = shannon_code_length(seg.size, n)
    log_cl = math.log2(cl)
    mean = math.fsum(seg) / seg.size
    err = math.fsum(point_error_costs(seg, np.full(seg.size, mean)))
    return 1.0 + log_cl + seg.size * log_cl + err


def _candidates(sorted_vals: np.ndarray, cuts: list[int]):
    """(boundary, bin, split position) for every admissible split, left to right."""
    out = []
    for k in range(len(cuts) - 1):
        lo, hi = cuts[k], cuts[k + 1]
        seg = sorted_vals[lo:hi]
        if seg.size < 2:
            continue
        change = np.nonzero(seg[1:] != seg[:-1])[0]
        for i in change:
            a, b = seg[i], seg[i + 1]
            mid = (a + b) / 2.0
            if a < mid < b:
                out.append((float(mid), k, lo + int(i) + 1))
    return out


def _subsample(cands: list, m: int) -> list:
    if len(cands) <= m:
        return cands
    picks = np.unique(np.round(np.linspace(0, len(cands) - 1, m)).astype(int))
    return [cands[i] for i in picks]


def greedy_refine(series: NormalizedSeries, max_bins: int, m: int = DEFAULT_CANDIDATES):
    """Grow a variable-width binning one boundary at a time.

    Starts from the single bin [0, 100]. Each step considers the midpoints
    between consecutive distinct values inside every bin (thinned evenly by
    rank to at most ``m``) and keeps the insertion with the lowest total
    cost; ties go to the leftmost boundary. Stops at ``max_bins`` bins or when
    no bin can be split further.

    Returns a list of ``(Binning, CostBreakdown)``, entry ``k`` holding
    ``k + 1`` bins.
    """
    if max_bins < 1 or m < 1:
        raise InvalidParameterError("max_bins and m must be positive")
    n = series.n
    vals = np.sort(series.values)
    boundaries = [LOW, HIGH]
    cuts = [0, n]  # bin k covers vals[cuts[k]:cuts[k+1]]
    seg_cost = [_segment_cost(vals, n)]

    first = make_binning(series, boundaries)
    steps = [(first, complexity(series, first))]
    while len(boundaries) - 1 < max_bins:
        cands = _subsample(_candidates(vals, cuts), m)
        if not cands:
            break
        best = None
        for mid, k, pos in cands:
            left = _segment_cost(vals[cuts[k]:pos], n)
            right = _segment_cost(vals[pos:cuts[k + 1]], n)
            delta = left + right - seg_cost[k]
            if best is None or delta < best[0]:
                best = (delta, mid, k, pos, left, right)
        _, mid, k, pos, left, right = best
        boundaries.insert(k + 1, mid)
        cuts.insert(k + 1, pos)
        seg_cost[k:k + 1] = [left, right]
        binning = make_binning(series, boundaries)
        steps.append((binning, complexity(series, binning)))
    return steps


def greedy_trace(series: NormalizedSeries, max_bins: int, m: int = DEFAULT_CANDIDATES):
    return [(bn.n_bins, cost) for bn, cost in greedy_refine(series, max_bins, m)]


__all__ = ["greedy_refine", "greedy_trace"]
