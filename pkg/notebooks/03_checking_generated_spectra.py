"""
03_checking_generated_spectra.py

Generate spectra from discretized 1D problems, pair each with the profile
that matches its construction, and run the inequality checks.

Run:
    python3 notebooks/03_checking_generated_spectra.py
"""

import math

from eigenbounds import SpectrumSource, consistent_profile, generate, make_spectrum, run_suite
from eigenbounds.profiles import classical_membrane
from eigenbounds.verify import check_family_inequality

sources = [
    SpectrumSource("sturm", {"p": "affine:1,1", "q": "const:0", "interval": [0, 1], "grid": 400}, 8),
    SpectrumSource("sturm", {"p": "poly:1,0,1", "q": "const:2", "interval": [0, 1], "grid": 400}, 8),
    SpectrumSource("inhomogeneous", {"q": "affine:1,1", "interval": [0, 1], "grid": 400}, 8),
]

# %% spectra and their profiles
for src in sources:
    s = generate(src)
    P = consistent_profile(src)
    print(src.kind, src.params)
    print("   lambda_1..3 =", [round(x, 4) for x in s.values[:3]], " profile:", P.name, f"c={P.c:.4g} b={P.b:.4g}")

    # slack of the p family for m = 4, relative to lambda_5^p
    m = 4
    for p in (0, 1, 2, 4):
        r = check_family_inequality(P, s, m, p)
        print(f"   p={p}: slack/lambda^p = {r.slack / s[m] ** p:+.4f}  pass={r.passed}")

    # the whole suite, every m
    reports = run_suite(P, s, chebyshev_trials=500, al_trials=10)
    print(f"   suite: {sum(r.passed for r in reports)}/{len(reports)} checks pass")

# %% a spectrum that cannot come from this problem class

fake = make_spectrum([1.0, 2.0, 4.5])  # third value above its YANG1 bound 3 + sqrt(1.5)
bad = [r for r in run_suite(classical_membrane(2), fake, m=2, chebyshev_trials=50, al_trials=5) if not r.passed]
for r in bad:
    print("FAIL", r.check, "p =", r.witness.get("p"), "slack =", r.slack)
print("YANG1 bound:", 3 + math.sqrt(1.5))
