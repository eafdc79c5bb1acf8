"""
02_sweeping_p.py

Sweep the exponent p across both regimes and watch the bound dip to its
minimum at p = 2. Writes plot-ready CSV next to this script; plotting is
left to whatever tool you prefer.

Run:
    python3 notebooks/02_sweeping_p.py
"""

from pathlib import Path

import numpy as np

from eigenbounds import make_spectrum, sigma_p, sigma_tilde_p
from eigenbounds.profiles import classical_membrane

P = classical_membrane(2)
s = make_spectrum([1.0, 2.0])

# %% sweep
grid = np.arange(0.0, 4.0 + 1e-12, 0.25)
vals = [sigma_p(P, s, 2, p).value if p <= 2 else sigma_tilde_p(P, s, 2, p).value for p in grid]
for p, v in zip(grid, vals):
    bar = "#" * int(round((v - 4.0) * 20))
    print(f"p={p:4.2f}  {v:.6f}  {bar}")

# %% same curve for a single eigenvalue: flat below 2, rising linearly above
one = make_spectrum([3.0])
flat = [sigma_p(P, one, 1, p).value for p in grid[grid <= 2]]
rise = [sigma_tilde_p(P, one, 1, p).value for p in grid[grid >= 2]]
print("m=1, p<=2:", np.round(flat, 12))
print("m=1, p>=2:", np.round(rise, 12))  # 3 (1 + p)

# %% save
out = Path(__file__).with_suffix(".csv")
np.savetxt(out, np.column_stack([grid, vals]), delimiter=",", header="p,value", comments="", fmt="%.17g")
print("wrote", out)
