"""Beta function and adaptive Simpson quadrature."""

from __future__ import annotations

import math
from typing import Callable

from .errors import DomainError, QuadratureNonConvergence


def beta_function(s: float, t: float) -> float:
    """``B(s, t) = Gamma(s) Gamma(t) / Gamma(s + t)`` for ``s, t > 0``.

    Uses ``math.gamma`` directly while ``s + t`` is small enough not to
    overflow, and ``exp`` of log-gamma sums beyond that.
    """
    if not (s > 0 and t > 0):
        raise DomainError(f"beta function needs positive arguments, got {s!r}, {t!r}")
    if s + t < 170:
        return math.gamma(s) * math.gamma(t) / math.gamma(s + t)
    return math.exp(math.lgamma(s) + math.lgamma(t) - math.lgamma(s + t))


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    max_depth: int = 40,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by recursive Simpson bisection.

    A panel is accepted once the two-half estimate agrees with the whole to
    ``15 * tol`` (tolerance halves with each split); accepted panels carry the
    Richardson correction. Raises :class:`QuadratureNonConvergence` past
    ``max_depth`` levels.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureNonConvergence(f"adaptive Simpson exceeded its depth limit near [{a!r}, {b!r}]")
    return _simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + _simpson_rec(
        f, m, b, fm, frm, fb, right, tol / 2, depth - 1
    )


def _smoothing_power(beta: float) -> int:
    """Integer ``n`` such that ``x = u**n`` turns ``x**beta dx`` into
    ``n u**(n(beta+1)-1) du`` with an exponent of at least 1."""
    if beta >= 1 or (beta >= 0 and float(beta).is_integer()):
        return 1
    return math.ceil(2.0 / (beta + 1.0))


def truncated_power_integral(gap: float, alpha: float, p: float, rtol: float = 1e-12) -> float:
    """``int_0^inf (gap - r)_+^alpha r^(p-3) dr`` by adaptive Simpson.

    The interval ``[0, gap]`` is split at its midpoint; near ``r = 0`` the
    substitution ``r = (gap/2) u^n`` and near ``r = gap`` the substitution
    ``gap - r = (gap/2) v^k`` remove the endpoint power behaviour, with
    integer ``n, k`` chosen from the exponents ``p - 3`` and ``alpha``.
    """
    if not (p > 2 and alpha > -1):
        raise DomainError(f"need p > 2 and alpha > -1, got p={p!r}, alpha={alpha!r}")
    if gap <= 0:
        return 0.0
    half = 0.5 * gap
    beta = p - 3.0
    n = _smoothing_power(beta)
    k = _smoothing_power(alpha)

    def lower(u):
        if u == 0.0:
            return 0.0 if n * (beta + 1) - 1 > 0 else half ** (beta + 1) * n * (gap ** alpha)
        r = half * u**n
        return n * half ** (beta + 1) * u ** (n * (beta + 1) - 1) * (gap - r) ** alpha

    def upper(v):
        if v == 0.0:
            return 0.0 if k * (alpha + 1) - 1 > 0 else half ** (alpha + 1) * k * gap**beta
        s = half * v**k
        return k * half ** (alpha + 1) * v ** (k * (alpha + 1) - 1) * (gap - s) ** beta

    # rough scale from a single Simpson panel on each half
    scale = abs((lower(0) + 4 * lower(0.5) + lower(1)) / 6) + abs((upper(0) + 4 * upper(0.5) + upper(1)) / 6)
    tol = rtol * max(scale, 1e-300)
    return adaptive_simpson(lower, 0.0, 1.0, tol) + adaptive_simpson(upper, 0.0, 1.0, tol)
