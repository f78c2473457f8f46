import shutil
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mdlcause import NormalizedSeries

FIXTURE_CACHE = Path(__file__).parent / "data" / "cache"

_acceptance = []


def record_acceptance(criterion, passed, detail):
    _acceptance.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_acceptance, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")


@pytest.fixture
def warm_cache(tmp_path):
    """A writable copy of the offline dataset cache."""
    dest = tmp_path / "cache"
    shutil.copytree(FIXTURE_CACHE, dest)
    return dest


@pytest.fixture(scope="module")
def module_cache(tmp_path_factory):
    dest = tmp_path_factory.mktemp("cache") / "cache"
    shutil.copytree(FIXTURE_CACHE, dest)
    return dest


def series_strategy(min_size=1, max_size=300):
    point = st.one_of(
        st.floats(0, 100, allow_nan=False),
        st.sampled_from([0.0, 25.0, 50.0, 100.0 / 3, 100.0]),
    )
    return st.lists(point, min_size=min_size, max_size=max_size).map(
        lambda v: NormalizedSeries(np.array(v))
    )
