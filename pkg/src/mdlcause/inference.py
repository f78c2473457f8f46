"""Directional verdicts from the four complexity estimates of a pair.

X -> Y is supported when ``K(X) + K(Y|X) < K(Y) + K(X|Y)``. The strength of
the evidence is reported as the percent change of the second sum relative
to the first.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Optional

from .binning import NormalizedSeries
from .complexity import ComplexityEstimate, estimate_k
from .conditional import ConditionalEstimate, conditional_k
from .errors import InvalidParameterError, PairedDataError

X_CAUSES_Y = "x_causes_y"
Y_CAUSES_X = "y_causes_x"
INCONCLUSIVE = "inconclusive"
DIRECTIONS = (X_CAUSES_Y, Y_CAUSES_X, INCONCLUSIVE)

RECORD_FIELDS = ("dataset", "x_label", "y_label", "sum_yx", "sum_xy", "percent_change",
                 "direction", "threshold_used")


@dataclass(frozen=True)
class CausalVerdict:
    sum_xy: float
    sum_yx: float
    percent_change: float
    direction: str
    threshold_used: float
    dataset: str = ""
    x_label: str = ""
    y_label: str = ""
    # scalar diagnostics (all four complexities in both accounting modes, bin counts)
    complexities: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return asdict(self)

    @classmethod
    def from_record(cls, record: dict) -> "CausalVerdict":
        return cls(**record)


@dataclass(frozen=True)
class InferenceConfig:
    max_bins: Optional[int] = None
    threshold: float = 0.0


@dataclass(frozen=True, eq=False)
class PairAnalysis:
    """A verdict together with every estimate that produced it."""

    verdict: CausalVerdict
    x_estimate: ComplexityEstimate
    y_estimate: ComplexityEstimate
    x_given_y: ConditionalEstimate
    y_given_x: ConditionalEstimate
    x_given_y_with_error: ConditionalEstimate
    y_given_x_with_error: ConditionalEstimate

    def verdict_at(self, threshold: float) -> CausalVerdict:
        c = self.verdict.complexities
        fresh = infer_direction(c["kx"], c["ky"], c["kx_given_y"], c["ky_given_x"], threshold)
        return replace(self.verdict, direction=fresh.direction, threshold_used=fresh.threshold_used)


def _check(name: str, value: float):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")
    if value < 0:
        raise InvalidParameterError(f"{name} must be non-negative, got {value}")


def infer_direction(kx: float, ky: float, kx_given_y: float, ky_given_x: float,
                    threshold: float = 0.0) -> CausalVerdict:
    """Compare ``K(X) + K(Y|X)`` against ``K(Y) + K(X|Y)``.

    ``threshold`` is in percent: the verdict is directional only when the
    percent change exceeds it in magnitude.

    >>> infer_direction(28366, 34939, 0, 0).percent_change.__round__(1)
    23.2
    """
    for name, v in (("kx", kx), ("ky", ky), ("kx_given_y", kx_given_y),
                    ("ky_given_x", ky_given_x), ("threshold", threshold)):
        _check(name, float(v))
    sum_xy = math.fsum((kx, ky_given_x))
    sum_yx = math.fsum((ky, kx_given_y))
    if sum_xy <= 0:
        raise InvalidParameterError("K(X) + K(Y|X) must be positive")
    pct = 100.0 * (sum_yx - sum_xy) / sum_xy
    if pct > threshold:
        direction = X_CAUSES_Y
    elif pct < -threshold:
        direction = Y_CAUSES_X
    else:
        direction = INCONCLUSIVE
    return CausalVerdict(sum_xy, sum_yx, pct, direction, float(threshold))


def infer_pair(x: NormalizedSeries, y: NormalizedSeries, config: InferenceConfig | None = None,
               dataset: str = "") -> PairAnalysis:
    """Run the full pipeline on one pair of aligned series.

    Both marginals are binned with the uniform strategy (error cost included
    when choosing the bin count). The verdict itself uses error-free values,
    with each conditional capped by its unconditional counterpart.
    """
    config = config or InferenceConfig()
    if x.n != y.n:
        raise PairedDataError(f"series lengths differ: {x.n} vs {y.n}")
    ex = estimate_k(x, "uniform", config.max_bins)
    ey = estimate_k(y, "uniform", config.max_bins)
    xy = conditional_k(x, y, ey, include_error=False, x_estimate=ex)
    yx = conditional_k(y, x, ex, include_error=False, x_estimate=ey)
    xy_e = conditional_k(x, y, ey, include_error=True, x_estimate=ex)
    yx_e = conditional_k(y, x, ex, include_error=True, x_estimate=ey)

    base = infer_direction(ex.k_value_no_error, ey.k_value_no_error,
                           xy.capped_conditional, yx.capped_conditional, config.threshold)
    complexities = {
        "kx": ex.k_value_no_error,
        "ky": ey.k_value_no_error,
        "kx_given_y": xy.capped_conditional,
        "ky_given_x": yx.capped_conditional,
        "kx_given_y_raw": xy.raw_conditional,
        "ky_given_x_raw": yx.raw_conditional,
        "kx_with_error": ex.k_value,
        "ky_with_error": ey.k_value,
        "kx_given_y_with_error": xy_e.capped_conditional,
        "ky_given_x_with_error": yx_e.capped_conditional,
        "x_bins": ex.optimal_bin_count,
        "y_bins": ey.optimal_bin_count,
        "x_balance_steps": len(xy.balance),
        "y_balance_steps": len(yx.balance),
    }
    verdict = replace(base, dataset=dataset, x_label=x.source_label, y_label=y.source_label,
                      complexities=complexities)
    return PairAnalysis(verdict, ex, ey, xy, yx, xy_e, yx_e)


def write_jsonl(verdicts: Iterable[CausalVerdict], fh):
    for v in verdicts:
        fh.write(json.dumps(v.to_record()) + "\n")


def read_jsonl(fh) -> list[CausalVerdict]:
    return [CausalVerdict.from_record(json.loads(line)) for line in fh if line.strip()]


def _arrow(direction: str) -> str:
    return {X_CAUSES_Y: "X -> Y", Y_CAUSES_X: "Y -> X"}.get(direction, "inconclusive")


def format_table(verdicts: Iterable[CausalVerdict]) -> str:
    """Plain-text table with one row per pair, both sums rounded to whole bits."""
    header = ("dataset", "X", "Y", "K(Y)+K(X|Y)", "K(X)+K(Y|X)", "result", "% change")
    rows = [header]
    for v in verdicts:
        rows.append((v.dataset, v.x_label, v.y_label, f"{v.sum_yx:.0f}", f"{v.sum_xy:.0f}",
                     _arrow(v.direction), f"{v.percent_change:.1f}"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
