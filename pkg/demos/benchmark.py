"""
Running the benchmark registry
==============================

Every bundled dataset pair is fetched (or read from the cache), normalized
and scored. Pairs that cannot be fetched are reported and skipped. The
precision sweep reuses the complexities computed once per pair.

Point ``MDLCAUSE_CACHE_DIR`` at a directory holding the raw files to run
offline, e.g. the copy under ``tests/data/cache``.
"""

import os
import sys

from mdlcause import load_registry, run_benchmark, sweep
from mdlcause.inference import format_table

cache = sys.argv[1] if len(sys.argv) > 1 else os.environ.get("MDLCAUSE_CACHE_DIR")
report = run_benchmark(load_registry(), cache_dir=cache)
for f in report.failures:
    print("skipped", f.entry.label, "-", f.error)
print(format_table(report.verdicts(0.0)))

res = sweep(report.rows, 0.0, 5.0, 6)
for t, p, k in zip(res.thresholds, res.precision_at, res.conclusive_counts):
    print(f"threshold {t:.0f}%: precision {'absent' if p is None else f'{p:.2f}'} "
          f"over {k} conclusive")
