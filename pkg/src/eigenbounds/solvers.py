"""Upper bounds for the (m+1)-st eigenvalue from the first m.

Closed forms: PPW, YANG2 (p = 1) and YANG1 (p = 2). Root-found: HP
(p = 0, safeguarded Newton), the general ``sigma_p`` for
``0 <= p <= 2`` (bisection) and ``sigma~_p`` for ``p >= 2`` (first crossing
of ``f~_p`` above ``lambda_m``, by marching then bisection).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BracketFailure,
    ComplexRoots,
    InadmissibleSpectrum,
    InputError,
    NonPositiveWeight,
    NumericalError,
)
from .gapfn import (
    GapFunction,
    eval_f,
    eval_f_derivative,
    eval_f_tilde,
    f_tilde_values,
    term_scale,
)
from .profiles import BoundProfile
from .spectra import Spectrum

EPS = np.finfo(float).eps

BISECT_RTOL = 1e-13
ROOT_SIGN_TOL = 1e-12  # relative to the term scale of f at the test point
MARCH_STEPS = 1000
VERIFY_SAMPLES = 1000
MAX_DOUBLINGS = 64


class Method(str, enum.Enum):
    PPW = "PPW"
    HP = "HP"
    YANG2 = "YANG2"
    YANG1 = "YANG1"
    SIGMA_P = "SIGMA_P"
    SIGMA_TILDE_P = "SIGMA_TILDE_P"


@dataclass(frozen=True)
class BoundResult:
    value: float
    method: Method
    p: float | None
    bracket: tuple[float, float]
    residual: float = 0.0
    iterations: int = 0
    flags: tuple[str, ...] = ()
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "method": self.method.value,
            "value": self.value,
            "bracket": list(self.bracket),
            "residual": self.residual,
            "iterations": self.iterations,
            "flags": list(self.flags),
            "error": self.error,
        }


def _mean(xs) -> float:
    xs = list(xs)
    return math.fsum(xs) / len(xs)


def _gap(profile, spectrum, m, p) -> GapFunction:
    return GapFunction(profile, spectrum, m, p)


def _require_positive_weights(g: GapFunction):
    bad = [i for i, w in enumerate(g.weights) if not w > 0]
    if bad:
        i = bad[0]
        raise NonPositiveWeight(
            f"weight w(lambda) = {g.weights[i]!r} at prefix position {i + 1} is not positive"
        )


def ppw_bound(profile: BoundProfile, spectrum: Spectrum, m: int) -> BoundResult:
    """``lambda_m + c * mean(w)``: the weakest, fully explicit bound."""
    g = _gap(profile, spectrum, m, 1.0)
    value = g.lam_m + profile.c * _mean(g.weights)
    return BoundResult(value, Method.PPW, None, (g.lam_m, value))


def yang2_bound(profile: BoundProfile, spectrum: Spectrum, m: int) -> BoundResult:
    """Root of the linear ``f_1``: ``S_1 + c * mean(w)``; ``(1+c) S_1`` when ``w = lambda``."""
    g = _gap(profile, spectrum, m, 1.0)
    value = _mean(g.lams) + profile.c * _mean(g.weights)
    if value < g.lam_m:
        raise InadmissibleSpectrum(
            f"f_1 vanishes at {value!r} < lambda_m = {g.lam_m!r}; the prefix violates the p=1 inequality"
        )
    return BoundResult(value, Method.YANG2, 1.0, (g.lam_m, value))


def yang1_bound(profile: BoundProfile, spectrum: Spectrum, m: int) -> BoundResult:
    """Larger root of the quadratic ``f_2``.

    ``sigma^2 - (2 S_1 + c W_1) sigma + (S_2 + c W_lam) = 0``. The half
    discriminant is assembled from centered moments,
    ``(c W_1 / 2)^2 - var(lambda) - c cov(lambda, w)``, which avoids the
    cancellation in ``B^2 - 4C``.
    """
    g = _gap(profile, spectrum, m, 2.0)
    c = profile.c
    lams, ws = g.lams, g.weights
    s1, w1 = _mean(lams), _mean(ws)
    var = _mean((x - s1) ** 2 for x in lams)
    cov = _mean((x - s1) * (w - w1) for x, w in zip(lams, ws))
    half_b = s1 + c * w1 / 2
    quarter_disc = (c * w1 / 2) ** 2 - var - c * cov
    if quarter_disc < -1e-12 * half_b**2:
        raise ComplexRoots(f"quadratic f_2 has no real root (discriminant/4 = {quarter_disc!r})")
    root = math.sqrt(max(quarter_disc, 0.0))
    big = half_b + math.copysign(root, half_b)
    prod = _mean(x * x for x in lams) + c * _mean(w * x for x, w in zip(lams, ws))
    other = prod / big if big != 0 else 0.0
    value = max(big, other)
    _check_admissible(g, value)
    return BoundResult(value, Method.YANG1, 2.0, (min(big, other), value))


def _check_admissible(g: GapFunction, value: float):
    if value < g.lam_m or eval_f(g, g.lam_m) > ROOT_SIGN_TOL * term_scale(g, g.lam_m):
        raise InadmissibleSpectrum(
            f"f_{g.p:g} is positive at lambda_m = {g.lam_m!r}; the prefix violates the "
            f"inequality one index lower"
        )


def _low_end(g: GapFunction, hi: float) -> float:
    return g.lam_m + 1e-12 * max(abs(g.lam_m), hi - g.lam_m)


def hp_bound(profile: BoundProfile, spectrum: Spectrum, m: int) -> BoundResult:
    """HP bound: the root of ``f_0`` above ``lambda_m``.

    ``f_0`` increases from ``-inf`` to 1 when all weights are positive, and
    is nonnegative at the PPW value, so ``(lambda_m, PPW]`` brackets the
    root. Newton steps are taken when they stay inside the current bracket,
    otherwise the bracket is bisected.
    """
    g = _gap(profile, spectrum, m, 0.0)
    _require_positive_weights(g)
    hi = ppw_bound(profile, spectrum, m).value
    lo = g.lam_m
    bracket = (lo, hi)
    f_hi = eval_f(g, hi)
    if f_hi == 0.0:
        return BoundResult(hi, Method.HP, 0.0, bracket)
    x = hi
    it = 0
    for it in range(1, 201):
        fx = eval_f(g, x) if x > g.lam_m else -math.inf
        if fx == 0.0:
            lo = hi = x
            break
        if fx < 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 4 * EPS * abs(hi):
            break
        step_ok = False
        if math.isfinite(fx):
            dfx = eval_f_derivative(g, x)
            if dfx > 0:
                nx = x - fx / dfx
                step_ok = lo < nx < hi
        if step_ok:
            if abs(nx - x) <= 2 * EPS * abs(x):
                x = nx
                break
            x = nx
        else:
            x = 0.5 * (lo + hi)
    value = x
    residual = abs(eval_f(g, value))
    return BoundResult(value, Method.HP, 0.0, bracket, residual, it)


def sigma_p(profile: BoundProfile, spectrum: Spectrum, m: int, p: float) -> BoundResult:
    """Unique root of ``f_p`` above ``lambda_m`` for ``0 <= p <= 2``, by bisection.

    The PPW value is the initial upper end; it is widened by doubling its
    distance to ``lambda_m`` if ``f_p`` is not yet positive there.
    """
    if not (0 <= p <= 2):
        raise InputError(f"sigma_p needs 0 <= p <= 2, got {p!r}")
    g = _gap(profile, spectrum, m, float(p))
    if p < 1:
        _require_positive_weights(g)
    hi = ppw_bound(profile, spectrum, m).value
    lo = _low_end(g, hi)
    if eval_f(g, lo) > ROOT_SIGN_TOL * term_scale(g, lo):
        raise InadmissibleSpectrum(
            f"f_{p:g} is already positive just above lambda_m = {g.lam_m!r}; "
            f"the prefix violates the inequality one index lower"
        )
    for _ in range(MAX_DOUBLINGS):
        if eval_f(g, hi) > 0:
            break
        hi = g.lam_m + 2 * (hi - g.lam_m)
    else:
        raise BracketFailure(f"no sign change of f_{p:g} found above lambda_m")
    bracket = (lo, hi)
    it = 0
    while hi - lo > BISECT_RTOL * abs(hi):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        it += 1
        if eval_f(g, mid) > 0:
            hi = mid
        else:
            lo = mid
    value = 0.5 * (lo + hi)
    return BoundResult(value, Method.SIGMA_P, float(p), bracket, abs(eval_f(g, value)), it)


def sigma_tilde_p(profile: BoundProfile, spectrum: Spectrum, m: int, p: float) -> BoundResult:
    """First point above ``lambda_m`` where ``f~_p`` turns positive (``p >= 2``).

    The search marches from ``lambda_m`` in steps of 1/1000 of the distance
    to the estimate ``lambda_m + (c p / 2) mean(w)``, bisects the first cell
    with a sign change, then rescans ``[lambda_m, value]`` on 1000 samples.
    Flags:

    * ``no_crossing_below_estimate``: no positive value up to the estimate;
      the estimate itself is returned.
    * ``positive_before_root``: the rescan found ``f~_p > 0`` below the
      returned value.
    """
    if not p >= 2:
        raise InputError(f"sigma_tilde_p needs p >= 2, got {p!r}")
    g = _gap(profile, spectrum, m, float(p))
    K = profile.K(p)
    est = g.lam_m + K * _mean(g.weights)
    span = est - g.lam_m
    if not span > 0:
        raise NonPositiveWeight("sigma~_p needs a positive mean weight over the prefix")

    def positive(vals, scales):
        return vals > ROOT_SIGN_TOL * scales

    h = span / MARCH_STEPS
    grid = g.lam_m + h * np.arange(MARCH_STEPS + 2)
    vals, scales = f_tilde_values(g, grid)
    pos = positive(vals, scales)
    if pos[0]:
        raise InadmissibleSpectrum(
            f"f~_{p:g} is positive at lambda_m = {g.lam_m!r}; the prefix violates the "
            f"inequality one index lower"
        )
    flags = []
    hits = np.flatnonzero(pos)
    if hits.size == 0:
        value = lo = est
        bracket = (g.lam_m, est)
        it = 0
        flags.append("no_crossing_below_estimate")
    else:
        k = int(hits[0])
        lo, hi = float(grid[k - 1]), float(grid[k])
        bracket = (lo, hi)
        it = 0
        while hi - lo > BISECT_RTOL * abs(hi):
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
            it += 1
            if eval_f_tilde(g, mid) > 0:
                hi = mid
            else:
                lo = mid
        value = 0.5 * (lo + hi)
    # rescan up to the last point certified nonpositive
    check = np.linspace(g.lam_m, lo, VERIFY_SAMPLES)
    if np.any(positive(*f_tilde_values(g, check))):
        flags.append("positive_before_root")
    residual = abs(eval_f_tilde(g, value))
    return BoundResult(value, Method.SIGMA_TILDE_P, float(p), bracket, residual, it, tuple(flags))


def bound_table(
    profile: BoundProfile, spectrum: Spectrum, m: int, p_list: Iterable[float] = ()
) -> list[BoundResult]:
    """PPW row followed by one row per distinct ``p`` in increasing order.

    ``p < 2`` uses :func:`sigma_p`, ``p > 2`` uses :func:`sigma_tilde_p`; at
    ``p == 2`` both run and must agree. Failures become rows carrying an
    ``error`` message; remaining rows are still computed.
    """
    rows = [ppw_bound(profile, spectrum, m)]
    for p in sorted(set(float(x) for x in p_list)):
        try:
            if p < 0 or not math.isfinite(p):
                raise InputError(f"p must be a finite nonnegative number, got {p!r}")
            if p < 2:
                rows.append(sigma_p(profile, spectrum, m, p))
            elif p > 2:
                rows.append(sigma_tilde_p(profile, spectrum, m, p))
            else:
                r = sigma_p(profile, spectrum, m, p)
                t = sigma_tilde_p(profile, spectrum, m, p)
                if abs(r.value - t.value) > 1e-9 * abs(r.value):
                    r = BoundResult(**{**r.__dict__, "flags": r.flags + ("sigma_tilde_2_mismatch",)})
                rows.append(r)
        except (InputError, NumericalError) as exc:
            method = Method.SIGMA_P if p <= 2 else Method.SIGMA_TILDE_P
            rows.append(
                BoundResult(math.nan, method, p, (math.nan, math.nan), math.nan, 0, (), str(exc))
            )
    return rows


def all_bounds(profile: BoundProfile, spectrum: Spectrum, m: int) -> dict[str, BoundResult]:
    """The four classical bounds keyed by name."""
    return {
        "PPW": ppw_bound(profile, spectrum, m),
        "HP": hp_bound(profile, spectrum, m),
        "YANG2": yang2_bound(profile, spectrum, m),
        "YANG1": yang1_bound(profile, spectrum, m),
    }
