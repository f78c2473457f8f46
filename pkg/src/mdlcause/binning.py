"""Histogram layouts over a normalized series.

Every series handled here lives on the fixed range [0, 100]. A :class:`Binning`
records the layout (boundaries) together with per-bin counts, member means and
Shannon code lengths, so that cost accounting never has to re-derive them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ContractViolation, InvalidParameterError

LOW, HIGH = 0.0, 100.0
DEFAULT_MAX_BINS = 200

BinningKind = Literal["uniform", "greedy"]


def _frozen(arr, dtype) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class NormalizedSeries:
    """A column of points on [0, 100], in ingestion order."""

    values: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        values = _frozen(self.values, float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidParameterError("series must be a non-empty 1-D array")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("series contains non-finite values")
        if values.min() < LOW or values.max() > HIGH:
            raise InvalidParameterError("series values must lie in [0, 100]")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class Binning:
    """Bin layout plus the statistics of the series it was built over.

    ``means`` is NaN and ``code_lengths`` is 0 for empty bins.
    """

    boundaries: np.ndarray
    counts: np.ndarray
    means: np.ndarray
    code_lengths: np.ndarray
    kind: BinningKind = "uniform"
    n: int = field(init=False)

    def __post_init__(self):
        for name, dtype in (("boundaries", float), ("counts", np.int64),
                            ("means", float), ("code_lengths", np.int64)):
            object.__setattr__(self, name, _frozen(getattr(self, name), dtype))
        b = self.counts.size
        if self.boundaries.size != b + 1:
            raise ContractViolation("boundaries must have one more entry than counts")
        if np.any(np.diff(self.boundaries) <= 0):
            raise ContractViolation("boundaries must be strictly increasing")
        object.__setattr__(self, "n", int(self.counts.sum()))

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def assign(self, values) -> np.ndarray:
        """Bin index of each value; the right edge (100) joins the last bin."""
        return assign_points(np.asarray(values, dtype=float), self.boundaries, self.kind)

    def kraft_sum(self) -> float:
        coded = self.code_lengths[self.counts > 0]
        return math.fsum(2.0 ** -coded.astype(float))

    def __repr__(self):
        return f"Binning(kind={self.kind!r}, n_bins={self.n_bins}, n={self.n})"


def uniform_index(values: np.ndarray, b: int) -> np.ndarray:
    width = (HIGH - LOW) / b
    idx = np.floor((values - LOW) / width).astype(np.int64)
    return np.clip(idx, 0, b - 1)


def assign_points(values: np.ndarray, boundaries: np.ndarray, kind: str) -> np.ndarray:
    b = boundaries.size - 1
    if kind == "uniform":
        return uniform_index(values, b)
    return np.searchsorted(boundaries[1:-1], values, side="right").astype(np.int64)


def shannon_code_length(count: int, n: int) -> int:
    """Length in bits of the Shannon code for a bin holding ``count`` of ``n`` points.

    Floored at one bit so a bin with probability 1 still has a codeword.

    >>> shannon_code_length(1, 1000)
    10
    """
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    if count < 1:
        raise ContractViolation("empty bins carry no Shannon code")
    if count > n:
        raise ContractViolation(f"count {count} exceeds n {n}")
    # exact integer form of ceil(log2(n / count)), avoids float edge cases at powers of two
    k = 0
    while count << k < n:
        k += 1
    return max(1, k)


def code_lengths_for(counts: np.ndarray, n: int) -> np.ndarray:
    return np.array(
        [shannon_code_length(int(c), n) if c > 0 else 0 for c in counts], dtype=np.int64
    )


def bin_statistics(values: np.ndarray, idx: np.ndarray, b: int):
    """Per-bin counts and member means (NaN for empty bins).

    Means use a correctly rounded sum, so they do not depend on point order.
    """
    counts = np.bincount(idx, minlength=b).astype(np.int64)
    order = np.argsort(idx, kind="stable")
    groups = np.split(values[order], np.cumsum(counts)[:-1])
    means = np.array(
        [math.fsum(g) / g.size if g.size else np.nan for g in groups], dtype=float
    )
    return counts, means


def _build(values: np.ndarray, boundaries: np.ndarray, kind: BinningKind) -> Binning:
    b = boundaries.size - 1
    idx = assign_points(values, boundaries, kind)
    counts, means = bin_statistics(values, idx, b)
    return Binning(boundaries, counts, means, code_lengths_for(counts, values.size), kind)


def make_uniform_binning(series: NormalizedSeries, b: int, max_bins: int | None = None) -> Binning:
    """Split [0, 100] into ``b`` equal-width bins and fill in the statistics."""
    limit = DEFAULT_MAX_BINS if max_bins is None else max_bins
    if not isinstance(b, (int, np.integer)) or b < 1 or b > limit:
        raise InvalidParameterError(f"bin count must be in [1, {limit}], got {b}")
    b = int(b)
    boundaries = np.linspace(LOW, HIGH, b + 1)
    return _build(series.values, boundaries, "uniform")


def make_binning(series: NormalizedSeries, boundaries, kind: BinningKind = "greedy") -> Binning:
    """Binning over explicit boundaries, which must start at 0 and end at 100."""
    boundaries = np.asarray(boundaries, dtype=float)
    if boundaries.size < 2 or boundaries[0] != LOW or boundaries[-1] != HIGH:
        raise InvalidParameterError("boundaries must span [0, 100]")
    return _build(series.values, boundaries, kind)
