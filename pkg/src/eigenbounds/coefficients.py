"""Named built-in coefficient functions.

Coefficient functions for Sturm-Liouville and density problems are given as
strings, never as code:

* ``const:<v>``            -> ``v``
* ``affine:<a>,<b>``       -> ``a*x + b``
* ``poly:<c0>,<c1>,...``   -> ``c0 + c1*x + c2*x**2 + ...``

The parsed object evaluates on scalars or numpy arrays and knows its exact
first and second derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[float, ...]  # ascending powers
    spec: str = ""

    def __call__(self, x):
        # Horner, highest power first
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out if out.ndim else float(out)

    def derivative(self) -> "Polynomial":
        d = tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0.0,)
        return Polynomial(d)


def parse_coefficient(spec: str) -> Polynomial:
    """Parse a coefficient spec string into an evaluable polynomial."""
    if not isinstance(spec, str) or ":" not in spec:
        raise InputError(f"coefficient spec must look like 'kind:values', got {spec!r}")
    kind, _, rest = spec.partition(":")
    try:
        nums = [float(t) for t in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise InputError(f"non-numeric value in coefficient spec {spec!r}") from None
    if not all(np.isfinite(nums)):
        raise InputError(f"non-finite value in coefficient spec {spec!r}")
    kind = kind.strip().lower()
    if kind == "const" and len(nums) == 1:
        coeffs = (nums[0],)
    elif kind == "affine" and len(nums) == 2:
        coeffs = (nums[1], nums[0])
    elif kind == "poly" and nums:
        coeffs = tuple(nums)
    else:
        raise InputError(f"unrecognised coefficient spec {spec!r}")
    return Polynomial(coeffs, spec)
