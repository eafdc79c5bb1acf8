"""Scalar gap functions whose roots are the eigenvalue bounds.

For a profile ``(c, a, b)``, a prefix ``lambda_1..lambda_m`` and gaps
``d_i = sigma - lambda_i``:

    f_p(sigma)       = (1/m) [ sum d_i^p - c       sum d_i^(p-1) w_i ]    0 <= p <= 2
    f~_p(sigma)      = (1/m) [ sum d_i^p - c p/2   sum d_i^(p-1) w_i ]    p >= 2
    f+_p(sigma, r)   =        sum (d_i - r)_+^p - K(p) sum (d_i - r)_+^(p-1) w_i

``f_p`` and ``f~_p`` are normalized by ``1/m``; the truncated form is not.
Sums use ``math.fsum`` and the convention ``0**0 == 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InputError, LengthMismatch
from .profiles import BoundProfile
from .spectra import Spectrum


@dataclass(frozen=True)
class GapFunction:
    profile: BoundProfile
    spectrum: Spectrum
    m: int
    p: float

    def __post_init__(self):
        if not (isinstance(self.m, (int, np.integer)) and 1 <= self.m <= len(self.spectrum)):
            raise InputError(f"prefix length must be in [1, {len(self.spectrum)}], got {self.m!r}")
        if not (math.isfinite(self.p) and self.p >= 0):
            raise InputError(f"exponent p must be finite and >= 0, got {self.p!r}")

    @property
    def lams(self) -> tuple[float, ...]:
        return self.spectrum.values[: self.m]

    @property
    def weights(self) -> tuple[float, ...]:
        a, b = self.profile.a, self.profile.b
        return tuple(a * lam + b for lam in self.lams)

    @property
    def lam_m(self) -> float:
        return self.spectrum.values[self.m - 1]

    def with_p(self, p: float) -> "GapFunction":
        return GapFunction(self.profile, self.spectrum, self.m, p)


def _power_sums(gaps, weights, p):
    """``(sum d^p, sum d^(p-1) w)`` for nonnegative gaps.

    A zero gap with ``p < 1`` makes the second sum infinite; its sign is the
    sign of the weights sitting on zero gaps.
    """
    zero_w = math.fsum(w for d, w in zip(gaps, weights) if d == 0.0)
    s1 = math.fsum(d**p for d in gaps)
    if p < 1 and any(d == 0.0 for d in gaps):
        rest = math.fsum(d ** (p - 1) * w for d, w in zip(gaps, weights) if d != 0.0)
        if zero_w == 0.0:
            return s1, rest
        return s1, math.copysign(math.inf, zero_w)
    return s1, math.fsum(d ** (p - 1) * w for d, w in zip(gaps, weights))


def _gaps(g: GapFunction, sigma: float):
    if not sigma >= g.lam_m:
        raise DomainError(f"sigma={sigma!r} lies below lambda_m={g.lam_m!r}")
    return [sigma - lam for lam in g.lams]


def eval_f(g: GapFunction, sigma: float) -> float:
    """``f_p(sigma)`` for ``0 <= p <= 2``.

    At ``sigma == lambda_m`` with ``p < 1`` the value is a signed infinity
    (``-inf`` for positive weights), which bisection can still use.
    """
    if g.p > 2:
        raise DomainError(f"f_p is defined for p <= 2; use eval_f_tilde for p={g.p!r}")
    s1, s2 = _power_sums(_gaps(g, sigma), g.weights, g.p)
    return (s1 - g.profile.c * s2) / g.m


def eval_f_tilde(g: GapFunction, sigma: float) -> float:
    """``f~_p(sigma)`` for ``p >= 2``; coincides with ``f_2`` at ``p == 2``."""
    if g.p < 2:
        raise DomainError(f"f~_p is defined for p >= 2, got p={g.p!r}")
    s1, s2 = _power_sums(_gaps(g, sigma), g.weights, g.p)
    return (s1 - g.profile.K(g.p) * s2) / g.m


def eval_f_plus(g: GapFunction, sigma: float, r: float) -> float:
    """Un-normalized truncated gap function with shift ``r >= 0``."""
    if g.p < 2:
        raise DomainError(f"the truncated form is used for p >= 2, got p={g.p!r}")
    if r < 0:
        raise DomainError(f"shift r must be nonnegative, got {r!r}")
    p = g.p
    terms = [(sigma - lam - r, w) for lam, w in zip(g.lams, g.weights)]
    s1 = math.fsum(d**p for d, _ in terms if d > 0)
    s2 = math.fsum(d ** (p - 1) * w for d, w in terms if d > 0)
    return s1 - g.profile.K(p) * s2


def eval_f_derivative(g: GapFunction, sigma: float) -> float:
    """Derivative of ``f_p`` in ``sigma`` for ``0 <= p <= 2``.

    ``(1/m) [ p sum d^(p-1) - c (p-1) sum d^(p-2) w ]``; the second term
    vanishes identically at ``p == 1``.
    """
    p = g.p
    if p > 2:
        raise DomainError(f"derivative defined here for p <= 2, got p={p!r}")
    gaps = _gaps(g, sigma)
    if p < 2 and min(gaps) == 0.0:
        raise DomainError("derivative requires sigma > lambda_m when p < 2")
    first = p * math.fsum(d ** (p - 1) for d in gaps) if p != 0 else 0.0
    if p == 1:
        second = 0.0
    else:
        second = (p - 1) * math.fsum(d ** (p - 2) * w for d, w in zip(gaps, g.weights))
    return (first - g.profile.c * second) / g.m


def f_tilde_values(g: GapFunction, sigmas) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``f~_p`` on an array of ``sigma >= lambda_m``.

    Returns the values and a per-point rounding scale (the mean absolute size
    of the summed terms).
    """
    sig = np.asarray(sigmas, dtype=float)
    lams = np.asarray(g.lams)
    w = np.asarray(g.weights)
    d = np.maximum(sig[:, None] - lams[None, :], 0.0)
    t1 = d**g.p
    t2 = g.profile.K(g.p) * d ** (g.p - 1) * w[None, :]
    vals = (t1.sum(axis=1) - t2.sum(axis=1)) / g.m
    scale = (np.abs(t1).sum(axis=1) + np.abs(t2).sum(axis=1)) / g.m
    return vals, scale


def term_scale(g: GapFunction, sigma: float) -> float:
    """Mean absolute size of the terms of ``f_p``/``f~_p`` at ``sigma``."""
    gaps = _gaps(g, sigma)
    K = g.profile.K(g.p)
    s = math.fsum(d**g.p for d in gaps)
    s += K * math.fsum(
        abs(d ** (g.p - 1) * w) for d, w in zip(gaps, g.weights) if d > 0 or g.p >= 1
    )
    return s / g.m


def chebyshev_gap(weights: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """``sum(w) sum(w a b) - sum(w a) sum(w b)``.

    Nonpositive whenever ``a`` and ``b`` are oppositely ordered and the
    weights are nonnegative; nonnegative when they are similarly ordered.
    """
    if not (len(weights) == len(a) == len(b)):
        raise LengthMismatch(f"lengths differ: {len(weights)}, {len(a)}, {len(b)}")
    if any(w < 0 for w in weights):
        raise InputError("weights must be nonnegative")
    # pairwise form: 1/2 sum_ij w_i w_j (a_i - a_j)(b_i - b_j), free of cancellation
    n = len(weights)
    return math.fsum(
        weights[i] * weights[j] * (a[i] - a[j]) * (b[i] - b[j])
        for i in range(n)
        for j in range(i + 1, n)
    )
