"""
Inferring the direction of a clipped solar pair
===============================================

Solar intensity drives panel output, which saturates at a clip level. Both
directions are scored as ``K(X) + K(Y|X)`` and ``K(Y) + K(X|Y)``; the verdict
follows the smaller sum once the percent change clears a threshold.
"""

import io

from mdlcause import generate_toy, infer_pair
from mdlcause.conditional import write_balance_csv
from mdlcause.inference import format_table

solar, power = generate_toy("solar_pair", 1000, seed=0)
analysis = infer_pair(solar, power, dataset="toy solar")
print(format_table([analysis.verdict]))

###############################################################################
# The pieces behind the verdict

c = analysis.verdict.complexities
for key in ("kx", "ky", "kx_given_y_raw", "ky_given_x_raw", "kx_given_y", "ky_given_x"):
    print(f"{key:15s} {c[key]:10.1f}")
print(f"bins: solar {c['x_bins']}, power {c['y_bins']}")

# count transfers needed to morph power's histogram into solar's
buf = io.StringIO()
write_balance_csv(analysis.y_given_x.balance, buf)
print(buf.getvalue())

###############################################################################
# The same complexities at stricter thresholds

for t in (0.0, 1.0, 5.0):
    print(t, analysis.verdict_at(t).direction)
