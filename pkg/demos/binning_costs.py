"""
Binning a sample and reading the cost breakdown
===============================================

A normalized series is coded with equal-width histograms of every size up to
200 bins. The model cost grows with the number of bins while the per-point
error cost shrinks, and the bin count with the lowest total is the estimate
of K(X).
"""

import numpy as np

from mdlcause import estimate_k, generate_toy, make_uniform_binning

x = generate_toy("bimodal", 1000, seed=0)
print(f"{x.n} points, range [{x.values.min():g}, {x.values.max():g}]")

# a single layout first
bn = make_uniform_binning(x, 10)
print("counts      ", bn.counts)
print("code lengths", bn.code_lengths)
print("Kraft sum    %.3f" % bn.kraft_sum())

###############################################################################
# Search over 1..200 bins and print a few rows of the trace

est = estimate_k(x, "uniform", max_bins=200)
print(f"\nK(X) = {est.k_value:.1f} bits with {est.optimal_bin_count} bins")
print(f"{'bins':>5} {'model':>8} {'code':>8} {'error':>8} {'total':>8}")
for b, cost in est.trace:
    if b in (1, 2, 5, 10, 25, 50, 100, 200):
        print(f"{b:5d} {cost.model_cost:8.1f} {cost.code_length_cost:8.1f} "
              f"{cost.error_cost:8.1f} {cost.total:8.1f}")

###############################################################################
# The greedy strategy grows variable-width bins one boundary at a time

g = estimate_k(x, "greedy", max_bins=60)
print(f"\ngreedy minimum {g.k_value:.1f} bits at {g.optimal_bin_count} bins")
print("boundaries", np.round(g.optimal_binning.boundaries, 2))
