"""Ingestion: rescaling, ordinal encoding, toy generators and the dataset registry."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .binning import NormalizedSeries
from .errors import (
    DegenerateColumnError,
    EncodingError,
    FetchError,
    InvalidParameterError,
    ParseError,
)

log = logging.getLogger(__name__)

CACHE_ENV = "MDLCAUSE_CACHE_DIR"
MISSING = {"", "?", "na", "nan", "null"}
MIN_BENCHMARK_ROWS = 501
GROUND_TRUTHS = ("x_causes_y", "y_causes_x", "unknown")


# -- rescaling and encoding -------------------------------------------------

def normalize(raw, source_label: str = "") -> NormalizedSeries:
    """Map a column affinely onto [0, 100], keeping point order.

    Data that already spans exactly [0, 100] is returned unchanged, which
    makes the map idempotent bit for bit.
    """
    v = np.asarray(raw, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidParameterError("normalize expects a non-empty 1-D column")
    if not np.all(np.isfinite(v)):
        raise InvalidParameterError("column contains non-finite values")
    lo, hi = v.min(), v.max()
    if lo == hi:
        raise DegenerateColumnError(f"column {source_label or '<unnamed>'} is constant ({lo!r})")
    if lo == 0.0 and hi == 100.0:
        return NormalizedSeries(v.copy(), source_label)
    out = 100.0 * (v - lo) / (hi - lo)
    out[v == hi] = 100.0
    return NormalizedSeries(out, source_label)


def ordinal_encode(column: Sequence[str], ordering: Sequence[str]) -> np.ndarray:
    """Replace each label by its 0-based rank in ``ordering``."""
    rank = {label: float(i) for i, label in enumerate(ordering)}
    unseen = sorted({c for c in column if c not in rank})
    if unseen:
        raise EncodingError(f"labels not in ordering {list(ordering)}: {unseen}")
    return np.array([rank[c] for c in column], dtype=float)


# -- toy distributions ------------------------------------------------------

@dataclass(frozen=True)
class ToyParams:
    bimodal_weights: tuple = (0.4, 0.6)
    bimodal_means: tuple = (35.0, 65.0)
    bimodal_sd: float = 8.0
    skew_shape: float = 2.0
    solar_mean: float = 50.0
    solar_sd: float = 10.0
    solar_extreme_fraction: float = 0.03
    solar_extreme_sd: float = 30.0
    solar_gain: float = 1.0
    solar_clip_quantile: float = 0.8
    solar_noise_sd: float = 1.0


@dataclass(frozen=True)
class ToySample:
    x: np.ndarray
    y: Optional[np.ndarray] = None
    component: Optional[np.ndarray] = None
    clip_level: Optional[float] = None


TOY_KINDS = ("bimodal", "normal", "skew", "solar_pair")


def toy_samples(kind: str, n: int, seed: int, params: ToyParams = ToyParams()) -> ToySample:
    """Raw (unnormalized) draws for a toy distribution."""
    if kind not in TOY_KINDS:
        raise InvalidParameterError(f"unknown toy kind {kind!r}; expected one of {TOY_KINDS}")
    if n < 1:
        raise InvalidParameterError("n must be positive")
    rng = np.random.default_rng(seed)
    if kind == "normal":
        return ToySample(rng.normal(0.0, 1.0, n))
    if kind == "skew":
        return ToySample(rng.gamma(params.skew_shape, 1.0, n))
    if kind == "bimodal":
        comp = (rng.random(n) >= params.bimodal_weights[0]).astype(np.int64)
        means = np.asarray(params.bimodal_means)[comp]
        return ToySample(rng.normal(means, params.bimodal_sd), component=comp)

    x = rng.normal(params.solar_mean, params.solar_sd, n)
    extreme = rng.random(n) < params.solar_extreme_fraction
    x[extreme] = rng.normal(params.solar_mean, params.solar_extreme_sd, int(extreme.sum()))
    x = np.maximum(x, 0.0)
    ideal = params.solar_gain * x
    clip = float(np.quantile(ideal, params.solar_clip_quantile))
    noise = rng.normal(0.0, params.solar_noise_sd, n)
    y = np.where(ideal < clip, np.minimum(ideal + noise, clip), clip)
    y = np.maximum(y, 0.0)
    return ToySample(x, y, component=extreme.astype(np.int64), clip_level=clip)


def generate_toy(kind: str, n: int, seed: int, params: ToyParams = ToyParams()):
    """Normalized toy data: one series, or an ``(x, y)`` pair for ``solar_pair``."""
    s = toy_samples(kind, n, seed, params)
    if kind == "solar_pair":
        return normalize(s.x, "solar"), normalize(s.y, "power")
    return normalize(s.x, kind)


# -- tabular parsing --------------------------------------------------------

@dataclass(frozen=True)
class TableFormat:
    delimiter: Optional[str] = ","  # None splits on runs of whitespace
    header: bool = True
    columns: Optional[tuple] = None

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "TableFormat":
        d = d or {}
        cols = d.get("columns")
        return cls(d.get("delimiter", ","), bool(d.get("header", True)),
                   tuple(cols) if cols else None)


def parse_table(text: str, fmt: TableFormat = TableFormat()) -> tuple[list[str], list[list[str]]]:
    if fmt.delimiter is None:
        rows = [line.split() for line in text.splitlines() if line.strip()]
    else:
        reader = csv.reader(io.StringIO(text), delimiter=fmt.delimiter, skipinitialspace=True)
        rows = [[c.strip() for c in r] for r in reader if any(c.strip() for c in r)]
    if fmt.header:
        if not rows:
            raise ParseError("table has no header row")
        names, rows = [c.strip() for c in rows[0]], rows[1:]
    elif fmt.columns:
        names = list(fmt.columns)
    else:
        raise ParseError("headerless tables need explicit column names")
    for k, r in enumerate(rows):
        if len(r) != len(names):
            raise ParseError(f"row {k + 1} has {len(r)} fields, expected {len(names)}")
    return names, rows


def extract_pair(names, rows, x_col: str, y_col: str, ordinal: Optional[dict] = None):
    """Pull two aligned columns as floats, dropping rows where either is missing.

    Returns ``(x, y, dropped)``.
    """
    ordinal = ordinal or {}
    for col in (x_col, y_col):
        if col not in names:
            raise ParseError(f"column {col!r} not found; available: {names}")
    ix, iy = names.index(x_col), names.index(y_col)
    kept = [(r[ix], r[iy]) for r in rows
            if r[ix].strip().lower() not in MISSING and r[iy].strip().lower() not in MISSING]
    dropped = len(rows) - len(kept)
    if dropped:
        log.info("dropped %d rows with missing %s/%s", dropped, x_col, y_col)

    def convert(col, cells):
        if col in ordinal:
            return ordinal_encode([c.strip().rstrip(".") for c in cells], ordinal[col])
        try:
            return np.array([float(c) for c in cells], dtype=float)
        except ValueError as exc:
            raise ParseError(f"column {col!r} is not numeric: {exc}") from None

    xs = convert(x_col, [a for a, _ in kept])
    ys = convert(y_col, [b for _, b in kept])
    return xs, ys, dropped


def read_csv_pair(path, x_col: str, y_col: str, ordinal: Optional[dict] = None,
                  fmt: TableFormat = TableFormat()):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FetchError(f"cannot read {path}: {exc}") from exc
    names, rows = parse_table(text, fmt)
    return extract_pair(names, rows, x_col, y_col, ordinal)


def write_series_csv(fh, columns: dict):
    """Write aligned columns (name -> values) as a CSV with a header row."""
    writer = csv.writer(fh)
    names = list(columns)
    writer.writerow(names)
    for row in zip(*(columns[k] for k in names)):
        writer.writerow([repr(float(v)) for v in row])


# -- registry and fetching --------------------------------------------------

@dataclass(frozen=True)
class DatasetRegistryEntry:
    name: str
    x_col: str
    y_col: str
    ground_truth: str = "unknown"
    url: Optional[str] = None
    path: Optional[str] = None
    cache_name: Optional[str] = None
    sha256: Optional[str] = None
    format: TableFormat = field(default_factory=TableFormat)
    ordinal: dict = field(default_factory=dict)
    toy: Optional[dict] = None
    note: str = ""

    @classmethod
    def from_dict(cls, d: dict, base_dir: Optional[Path] = None) -> "DatasetRegistryEntry":
        try:
            name, x_col, y_col = d["name"], d["x_col"], d["y_col"]
        except KeyError as exc:
            raise ParseError(f"registry entry missing field {exc}") from None
        truth = d.get("ground_truth", "unknown")
        if truth not in GROUND_TRUTHS:
            raise ParseError(f"{name}: ground_truth must be one of {GROUND_TRUTHS}")
        path = d.get("path")
        if path and base_dir is not None and not os.path.isabs(path):
            path = str(base_dir / path)
        return cls(name=name, x_col=x_col, y_col=y_col, ground_truth=truth, url=d.get("url"),
                   path=path, cache_name=d.get("cache_name"), sha256=d.get("sha256"),
                   format=TableFormat.from_dict(d.get("format")),
                   ordinal=dict(d.get("ordinal") or {}), toy=d.get("toy"),
                   note=d.get("note", ""))

    @property
    def label(self) -> str:
        return f"{self.name}: {self.x_col} -> {self.y_col}"

    @property
    def cache_file(self) -> Optional[str]:
        if self.cache_name:
            return self.cache_name
        src = self.url or self.path
        return os.path.basename(src) if src else None


@dataclass(frozen=True, eq=False)
class PairDataset:
    name: str
    x: NormalizedSeries
    y: NormalizedSeries
    ground_truth: str
    row_count: int
    dropped_rows: int = 0


def load_registry(path=None) -> list[DatasetRegistryEntry]:
    """Read a registry file; with no path, the bundled registry is used."""
    if path is None:
        text = resources.files("mdlcause").joinpath("resources/registry.json").read_text()
        base = None
    else:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise FetchError(f"cannot read registry {path}: {exc}") from exc
        base = path.parent
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"registry is not valid JSON: {exc}") from exc
    return [DatasetRegistryEntry.from_dict(d, base) for d in doc.get("datasets", [])]


def cache_root(cache_dir=None) -> Path:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "mdlcause"


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _download(url: str, dest: Path, timeout: float):
    dest.parent.mkdir(parents=True, exist_ok=True)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            data = resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise FetchError(f"download of {url} failed: {exc}") from exc
    fd, tmp = tempfile.mkstemp(dir=dest.parent, prefix=dest.name + ".", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, dest)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return data


def fetch_raw(entry: DatasetRegistryEntry, cache_dir=None, timeout: float = 60.0) -> bytes:
    """Raw bytes for an entry: local path, else warm cache, else download into the cache."""
    if entry.path:
        try:
            data = Path(entry.path).read_bytes()
        except OSError as exc:
            raise FetchError(f"{entry.name}: cannot read {entry.path}: {exc}") from exc
    else:
        if not entry.cache_file:
            raise FetchError(f"{entry.name}: no url or local path configured")
        dest = cache_root(cache_dir) / entry.cache_file
        if dest.exists():
            data = dest.read_bytes()
        elif entry.url:
            data = _download(entry.url, dest, timeout)
        else:
            raise FetchError(f"{entry.name}: {dest} not in cache and no url configured. {entry.note}")
    if entry.sha256 and _sha256(data) != entry.sha256.lower():
        raise FetchError(f"{entry.name}: checksum mismatch for {entry.cache_file}")
    return data


def fetch_dataset(entry: DatasetRegistryEntry, cache_dir=None,
                  min_rows: int = MIN_BENCHMARK_ROWS) -> PairDataset:
    """Materialize a registry entry as a normalized, aligned pair."""
    if entry.toy:
        spec = dict(entry.toy)
        kind = spec.pop("kind")
        if kind != "solar_pair":
            raise ParseError(f"{entry.name}: toy registry entries must be solar_pair")
        x, y = generate_toy(kind, int(spec.get("n", 1000)), int(spec.get("seed", 0)))
        x = NormalizedSeries(x.values, entry.x_col)
        y = NormalizedSeries(y.values, entry.y_col)
        dropped = 0
    else:
        raw = fetch_raw(entry, cache_dir)
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            text = raw.decode("latin-1")
        names, rows = parse_table(text, entry.format)
        xs, ys, dropped = extract_pair(names, rows, entry.x_col, entry.y_col, entry.ordinal)
        x = normalize(xs, entry.x_col)
        y = normalize(ys, entry.y_col)
    if x.n < min_rows:
        raise ParseError(f"{entry.name}: {x.n} rows, need at least {min_rows}")
    return PairDataset(entry.name, x, y, entry.ground_truth, x.n, dropped)
