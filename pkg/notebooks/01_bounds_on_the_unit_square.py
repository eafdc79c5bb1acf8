"""
01_bounds_on_the_unit_square.py

Walk through the bound family on the Dirichlet Laplacian of the unit square,
whose eigenvalues are known exactly: pi^2 (j^2 + k^2).

Run:
    python3 notebooks/01_bounds_on_the_unit_square.py
"""

import math

import numpy as np

from eigenbounds import box_spectrum, bound_table
from eigenbounds.profiles import classical_membrane
from eigenbounds.solvers import all_bounds

# %% the spectrum, in units of pi^2
s = box_spectrum([1.0, 1.0], 12)
print("eigenvalues / pi^2:", np.round(np.array(s.values) / math.pi**2, 6))

# %% the classical profile for a planar domain: c = 4/n = 2, weight w(lam) = lam
P = classical_membrane(2)
print(P)

# %% four classical bounds for lambda_{m+1}, next to the truth
print(f"{'m':>3} {'true':>10} {'PPW':>10} {'HP':>10} {'YANG2':>10} {'YANG1':>10}")
for m in range(1, 11):
    b = all_bounds(P, s, m)
    row = [b[k].value / math.pi**2 for k in ("PPW", "HP", "YANG2", "YANG1")]
    print(f"{m:>3} {s[m] / math.pi**2:>10.4f} " + " ".join(f"{v:>10.4f}" for v in row))

# With m = 1 every bound collapses to (1 + c) lambda_1 = 6 pi^2; the truth is 5 pi^2.

# %% the full p family for one prefix
m = 5
for r in bound_table(P, s, m, [0, 0.5, 1, 1.5, 2, 3, 4]):
    tag = "" if r.p is None else f"p={r.p:g}"
    print(f"{r.method.value:>14} {tag:>6}  {r.value / math.pi**2:.6f} pi^2")

# The smallest value sits at p = 2: the p <= 2 branch improves as p grows and the
# p >= 2 branch gets worse, so YANG1 is the sharpest member of the family.
