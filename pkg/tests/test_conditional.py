import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import series_strategy
from mdlcause import (
    ContractViolation,
    InvalidParameterError,
    NormalizedSeries,
    PairedDataError,
    balance_counts,
    conditional_k,
    estimate_k,
    generate_toy,
)
from mdlcause.conditional import write_balance_csv
from oracles import log2, shannon_ref, simulate_balance, uniform_members


def test_single_transfer():
    t = balance_counts([1, 3], [3, 1])
    assert t.steps == ((0, 1, 2),)
    assert t.step_cost == 2.0
    assert t.total_cost == 2.0
    assert t.final_counts.tolist() == [3, 1]


def test_three_bin_example_matches_simulator():
    t = balance_counts([2, 4, 2], [5, 0, 3])
    steps, final, _ = simulate_balance([2, 4, 2], [5, 0, 3])
    assert list(t.steps) == steps == [(0, 1, 3), (2, 1, 1)]
    assert t.final_counts.tolist() == final == [5, 0, 3]


def test_equal_counts_need_no_steps():
    t = balance_counts([4, 0, 6], [4, 0, 6])
    assert len(t) == 0 and t.total_cost == 0.0


@pytest.mark.parametrize("cx, cy", [([1, 2], [1, 1]), ([1, 2], [1, 2, 0]), ([-1, 3], [1, 1]), ([], [])])
def test_bad_count_vectors(cx, cy):
    with pytest.raises(ContractViolation):
        balance_counts(cx, cy)


@st.composite
def paired_counts(draw):
    b = draw(st.integers(1, 64))
    n = draw(st.integers(0, 10_000))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    cx = rng.multinomial(n, rng.dirichlet(np.ones(b)))
    cy = rng.multinomial(n, rng.dirichlet(np.ones(b) * draw(st.sampled_from([0.1, 1.0, 10.0]))))
    return cx.tolist(), cy.tolist()


@settings(max_examples=200, deadline=None)
@given(paired_counts())
def test_balance_properties(pair):
    cx, cy = pair
    t = balance_counts(cx, cy)
    steps, final, sums = simulate_balance(cx, cy)
    assert list(t.steps) == steps
    assert t.final_counts.tolist() == cy == final
    assert len(t) <= max(len(cx) - 1, 0)
    assert all(s == sum(cx) for s in sums)
    # L1 discrepancy strictly falls with every transfer
    cur = np.array(cx)
    dist = np.abs(cur - cy).sum()
    for i, j, moved in t.steps:
        assert moved > 0
        cur[i] += moved
        cur[j] -= moved
        new = np.abs(cur - cy).sum()
        assert new < dist
        dist = new


def _oracle_conditional(x, y_counts, b, include_error):
    """K(X|Y) built from the oracle helpers and the literal balancing loop."""
    idx, members = uniform_members(list(x), b)
    steps, final, _ = simulate_balance([len(m) for m in members], y_counts)
    n = len(x)
    cl = [shannon_ref(max(c, 1), n) for c in final]
    code = math.fsum(log2(cl[i]) for i in idx)
    err = 0.0
    if include_error:
        means = [math.fsum(m) / len(m) if m else 0.0 for m in members]
        err = math.fsum(min(max(log2(abs(p - means[i])) if p != means[i] else 1.0, 1.0), 7.0)
                        for p, i in zip(x, idx))
    return math.fsum([1 + log2(b)] * len(steps) + [code, err])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 150), st.integers(0, 10_000), st.booleans())
def test_conditional_matches_oracle(n, seed, include_error):
    rng = np.random.default_rng(seed)
    x = NormalizedSeries(rng.uniform(0, 100, n))
    y = NormalizedSeries(rng.beta(0.5, 2.0, n) * 100)
    ey = estimate_k(y)
    ce = conditional_k(x, y, ey, include_error=include_error)
    b = ey.optimal_bin_count
    expected = _oracle_conditional(x.values, ey.optimal_binning.counts.tolist(), b, include_error)
    assert ce.raw_conditional == pytest.approx(expected, rel=1e-12)
    assert ce.bin_count_used == b
    assert ce.balance.final_counts.tolist() == ey.optimal_binning.counts.tolist()
    ex = estimate_k(x)
    cap = ex.k_value if include_error else ex.k_value_no_error
    assert ce.capped_conditional == min(ce.raw_conditional, cap)


@settings(max_examples=30, deadline=None)
@given(series_strategy(min_size=2, max_size=150))
def test_self_conditioning(series):
    est = estimate_k(series)
    for include_error in (False, True):
        ce = conditional_k(series, series, est, include_error=include_error, x_estimate=est)
        assert len(ce.balance) == 0
        assert ce.balance.total_cost == 0.0
        bound = est.k_value if include_error else est.k_value_no_error
        assert ce.capped_conditional <= bound


def test_emptied_bins_code_as_singletons():
    x = NormalizedSeries([0.0, 10.0, 90.0, 100.0])
    y = NormalizedSeries([0.0, 5.0, 8.0, 100.0])
    ey = estimate_k(y, "uniform", 2)
    assert ey.optimal_bin_count == 2
    ce = conditional_k(x, y, ey)
    assert np.isfinite(ce.raw_conditional)


def test_errors():
    a = NormalizedSeries([0.0, 50.0, 100.0])
    b = NormalizedSeries([0.0, 100.0])
    with pytest.raises(PairedDataError):
        conditional_k(a, b, estimate_k(b))
    with pytest.raises(InvalidParameterError):
        conditional_k(a, a, estimate_k(a, "greedy"))
    with pytest.raises(ContractViolation):
        conditional_k(a, a, estimate_k(NormalizedSeries([0.0, 1.0, 2.0, 100.0])))


def test_balance_csv():
    buf = io.StringIO()
    write_balance_csv(balance_counts([2, 4, 2], [5, 0, 3]), buf)
    assert buf.getvalue().splitlines() == ["step,i,j,transferred", "1,0,1,3", "2,2,1,1"]


def test_solar_pair_runs():
    x, y = generate_toy("solar_pair", 600, 0)
    ce = conditional_k(y, x, estimate_k(x))
    assert ce.capped_conditional <= ce.unconditional
