"""Checks of the eigenvalue inequalities and identities, with slack reports.

Every check reports ``slack = RHS - LHS`` of the inequality it tests, so a
pass is always ``slack >= -tolerance``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import GNegative, GNotMonotone, InputError, LengthMismatch, MissingNextEigenvalue
from .gapfn import GapFunction, chebyshev_gap, eval_f_plus
from .profiles import BoundProfile
from .solvers import sigma_p, sigma_tilde_p
from .special import adaptive_simpson, beta_function, truncated_power_integral
from .spectra import Spectrum

FAMILY_P = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0)
LOW_GRID = tuple(0.25 * k for k in range(9))
HIGH_GRID = (2.0, 2.5, 3.0, 4.0, 6.0)

FAMILY_RTOL = 1e-10
MONOTONE_RTOL = 1e-9
H1_RTOL = 1e-9
CHEBYSHEV_RTOL = 1e-12
AL_RTOL = 1e-8


def digest(obj) -> str:
    """Short stable hash of a JSON-serializable description of the inputs."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"not serializable: {type(x).__name__}")


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check. ``passed`` is ``slack >= -tolerance``."""

    check: str
    inputs: str
    slack: float
    tolerance: float
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.slack >= -self.tolerance)

    def to_json(self) -> dict:
        witness = {k: _clean(v) for k, v in self.witness.items()}
        witness["inputs"] = self.inputs
        if not math.isfinite(self.slack):
            witness["slack_nonfinite"] = repr(float(self.slack))
        return {
            "check": self.check,
            "pass": self.passed,
            "slack": _finite_or_none(self.slack),
            "tolerance": self.tolerance,
            "witness": witness,
        }


def _clean(v):
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (float, np.floating)):
        return _finite_or_none(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def _report(check, inputs, slack, tolerance, **witness) -> CheckReport:
    return CheckReport(check, digest(inputs), float(slack) + 0.0, float(tolerance), witness)


def _next_gaps(profile: BoundProfile, spectrum: Spectrum, m: int):
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise InputError(f"m must be a positive integer, got {m!r}")
    if len(spectrum) < m + 1:
        raise MissingNextEigenvalue(
            f"need lambda_{m + 1} but the spectrum has only {len(spectrum)} values"
        )
    lams = spectrum.values[:m]
    nxt = spectrum.values[m]
    gaps = [nxt - lam for lam in lams]
    weights = [float(profile.weight(lam)) for lam in lams]
    return nxt, gaps, weights


# ---------------------------------------------------------------------------
# p-family and monotone-g inequalities


def check_family_inequality(
    profile: BoundProfile, spectrum: Spectrum, m: int, p: float, rtol: float = FAMILY_RTOL
) -> CheckReport:
    """``sum d^p <= K(p) sum d^(p-1) w`` with ``d_i = lambda_{m+1} - lambda_i``.

    For ``p < 1`` a zero gap makes the right side infinite (the inequality
    then holds trivially when the weights there are positive).
    """
    nxt, gaps, weights = _next_gaps(profile, spectrum, m)
    p = float(p)
    K = profile.K(p)
    lhs_terms = [d**p for d in gaps]
    rhs_terms = []
    for d, w in zip(gaps, weights):
        if d == 0.0 and p < 1:
            rhs_terms.append(math.copysign(math.inf, w) if w != 0 else 0.0)
        else:
            rhs_terms.append(K * d ** (p - 1) * w)
    lhs = math.fsum(lhs_terms)
    finite = [t for t in rhs_terms if math.isfinite(t)]
    infinite = [t for t in rhs_terms if not math.isfinite(t)]
    rhs = math.fsum(finite) + math.fsum(infinite) if infinite else math.fsum(finite)
    slack = rhs - lhs
    scale = lhs + math.fsum(abs(t) for t in finite)
    per_term = [r - l for l, r in zip(lhs_terms, rhs_terms)]
    worst = int(np.argmin(per_term))
    inputs = {"profile": profile, "spectrum": spectrum.values[: m + 1], "m": m, "p": p}
    return _report(
        "family_inequality",
        inputs,
        slack,
        rtol * scale,
        m=m,
        p=p,
        K=K,
        lambda_next=nxt,
        lhs=lhs,
        rhs=rhs,
        worst_i=worst + spectrum.index_origin,
    )


def check_hp_form(profile: BoundProfile, spectrum: Spectrum, m: int, rtol: float = FAMILY_RTOL) -> CheckReport:
    """The ``p = 0`` inequality written as ``m / c <= sum w_i / (lambda_{m+1} - lambda_i)``.

    Same content as :func:`check_family_inequality` at ``p = 0`` divided
    through by ``c``; the two must agree on pass/fail.
    """
    nxt, gaps, weights = _next_gaps(profile, spectrum, m)
    terms = []
    for d, w in zip(gaps, weights):
        terms.append(w / d if d != 0 else (math.copysign(math.inf, w) if w != 0 else 0.0))
    finite = [t for t in terms if math.isfinite(t)]
    rhs = math.fsum(finite) + math.fsum(t for t in terms if not math.isfinite(t))
    lhs = m / profile.c
    scale = lhs + math.fsum(abs(t) for t in finite)
    inputs = {"profile": profile, "spectrum": spectrum.values[: m + 1], "m": m}
    return _report("hp_form", inputs, rhs - lhs, rtol * scale, m=m, lambda_next=nxt, lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class MonotoneFunctionTable:
    """Samples ``(lambda, g(lambda))`` of a function claimed nonnegative and
    nondecreasing. Both claims are checked on construction, in ``lambda``
    order, at the tabulated points only."""

    lambdas: tuple
    values: tuple

    def __post_init__(self):
        if len(self.lambdas) != len(self.values):
            raise LengthMismatch(f"{len(self.lambdas)} abscissae but {len(self.values)} values")
        if any(math.isnan(v) for v in self.values):
            raise InputError("g table contains NaN")
        order = sorted(range(len(self.lambdas)), key=lambda i: self.lambdas[i])
        vals = [self.values[i] for i in order]
        neg = [v for v in vals if v < 0]
        if neg:
            raise GNegative(f"g takes the negative value {neg[0]!r}")
        for k in range(len(vals) - 1):
            if vals[k + 1] < vals[k]:
                raise GNotMonotone(
                    f"g decreases from {vals[k]!r} to {vals[k + 1]!r} between "
                    f"lambda={self.lambdas[order[k]]!r} and {self.lambdas[order[k + 1]]!r}"
                )

    @classmethod
    def from_function(cls, fn: Callable[[float], float], lambdas: Iterable[float]) -> "MonotoneFunctionTable":
        lams = tuple(float(x) for x in lambdas)
        return cls(lams, tuple(float(fn(x)) for x in lams))

    def lookup(self, lam: float) -> float:
        for x, v in zip(self.lambdas, self.values):
            if x == lam:
                return v
        raise InputError(f"g is not tabulated at lambda={lam!r}")


def check_theorem31(
    profile: BoundProfile,
    spectrum: Spectrum,
    m: int,
    g: MonotoneFunctionTable,
    rtol: float = FAMILY_RTOL,
) -> CheckReport:
    """``sum d_i^2 g(lambda_i) <= c sum d_i g(lambda_i) w_i`` for monotone ``g >= 0``."""
    nxt, gaps, weights = _next_gaps(profile, spectrum, m)
    gv = [g.lookup(lam) for lam in spectrum.values[:m]]
    c = profile.c
    # 0 * inf is taken as 0: a zero gap contributes nothing however large g is there
    lhs_terms = [_prod(d, d, gi) for d, gi in zip(gaps, gv)]
    rhs_terms = [c * _prod(d, gi, w) for d, gi, w in zip(gaps, gv, weights)]
    lhs, rhs = math.fsum(lhs_terms), math.fsum(rhs_terms)
    scale = lhs + math.fsum(abs(t) for t in rhs_terms)
    per_term = [r - l for l, r in zip(lhs_terms, rhs_terms)]
    inputs = {"profile": profile, "spectrum": spectrum.values[: m + 1], "m": m, "g": list(gv)}
    return _report(
        "monotone_g_inequality",
        inputs,
        rhs - lhs,
        rtol * scale,
        m=m,
        lambda_next=nxt,
        lhs=lhs,
        rhs=rhs,
        worst_i=int(np.argmin(per_term)) + spectrum.index_origin,
    )


def _prod(*xs) -> float:
    if any(x == 0 for x in xs):
        return 0.0
    return math.prod(xs)


def check_h1(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    samples: Sequence[float],
    rtol: float = H1_RTOL,
) -> CheckReport:
    """``(f(x) - f(y)) / (x - y) >= (f'(x) + f'(y)) / 2`` over all sample pairs."""
    xs = [float(x) for x in samples]
    fx = [float(f(x)) for x in xs]
    rx = [float(fprime(x)) for x in xs]
    best = math.inf
    witness = (None, None)
    scale = 0.0
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[i] == xs[j]:
                continue
            q = (fx[i] - fx[j]) / (xs[i] - xs[j])
            mean = 0.5 * (rx[i] + rx[j])
            scale = max(scale, abs(q) + abs(mean))
            if q - mean < best:
                best = q - mean
                witness = (xs[i], xs[j])
    if best == math.inf:
        best = 0.0
    return _report("h1", {"samples": xs}, best, rtol * scale, x=witness[0], y=witness[1])


# ---------------------------------------------------------------------------
# beta integrals


def aizenman_lieb_identity(gap: float, alpha: float, p: float, rtol: float = AL_RTOL) -> CheckReport:
    """Quadrature of ``int_0^gap (gap - r)^alpha r^(p-3) dr`` against
    ``gap^(alpha+p-2) B(p-2, alpha+1)``.

    The slack is minus the relative difference, so the report passes when
    the two agree to ``rtol``.
    """
    if not gap > 0:
        raise InputError(f"gap must be positive, got {gap!r}")
    quad = truncated_power_integral(gap, alpha, p)
    closed = gap ** (alpha + p - 2) * beta_function(p - 2, alpha + 1)
    rel = abs(quad - closed) / abs(closed)
    inputs = {"gap": gap, "alpha": alpha, "p": p}
    return _report("beta_integral", inputs, -rel, rtol, gap=gap, alpha=alpha, p=p, quadrature=quad, closed_form=closed)


def aizenman_lieb_batch(count: int = 50, seed: int = 0, rtol: float = AL_RTOL) -> CheckReport:
    """Seeded random triples ``p in (2, 8]``, ``alpha in (0, p]``, ``gap in (0.1, 5)``;
    reports the worst one."""
    rng = np.random.default_rng(seed)
    worst = None
    for _ in range(count):
        p = 8.0 - 6.0 * rng.random()  # (2, 8]
        alpha = p * (1.0 - rng.random())  # (0, p]
        gap = 0.1 + 4.9 * rng.random()
        rep = aizenman_lieb_identity(gap, alpha, p, rtol)
        if worst is None or rep.slack < worst.slack:
            worst = rep
    w = dict(worst.witness, trials=count, seed=seed)
    return _report("beta_integral_batch", {"count": count, "seed": seed}, worst.slack, rtol, **w)


def beta_ratio_report(rtol: float = 1e-12) -> CheckReport:
    """The two beta ratio identities behind the exponent lift.

    ``B(s,2)/B(s,3) = (s+2)/2`` and ``B(q-p,p)/B(q-p,p+1) = q/p``, on a fixed
    sample set. Slack is minus the worst relative error.
    """
    worst, where = 0.0, None
    for s in (0.5, 1.0, 2.0, 5.0, 0.1, 3.7):
        err = abs(beta_function(s, 2) / beta_function(s, 3) / ((s + 2) / 2) - 1)
        if err > worst:
            worst, where = err, {"identity": "s2_s3", "s": s}
    for p in (2.0, 2.5, 3.0, 4.0):
        for q in (2.25, 3.0, 4.5, 6.0, 8.0):
            if q <= p:
                continue
            err = abs(beta_function(q - p, p) / beta_function(q - p, p + 1) / (q / p) - 1)
            if err > worst:
                worst, where = err, {"identity": "q_over_p", "p": p, "q": q}
    return _report("beta_ratios", {"rtol": rtol}, -worst, rtol, worst=where)


def lift_identity(profile: BoundProfile, spectrum: Spectrum, m: int, sigma: float, p: float) -> tuple[float, float]:
    """Integrate the truncated ``p = 2`` gap function against ``r^(p-3)``.

    Returns ``(lifted, direct)`` where ``lifted`` is the integral divided by
    ``B(p-2, 3)`` and ``direct`` is the truncated ``f~_p`` (un-normalized)
    at ``sigma``; they coincide because ``B(p-2,2)/B(p-2,3) = p/2``.
    The integrand is piecewise smooth with kinks at ``r = sigma - lambda_i``,
    so each piece is integrated separately.
    """
    if not p > 2:
        raise InputError(f"the lift needs p > 2, got {p!r}")
    g2 = GapFunction(profile, spectrum, m, 2.0)
    gp = GapFunction(profile, spectrum, m, float(p))
    knots = sorted({0.0} | {sigma - lam for lam in g2.lams if sigma - lam > 0})

    def integrand(r):
        if r == 0.0 and p < 3:
            return 0.0
        return eval_f_plus(g2, sigma, r) * r ** (p - 3)

    scale = sum(abs(sigma - lam) ** p + abs(profile.weight(lam)) * abs(sigma - lam) ** (p - 1) for lam in g2.lams)
    tol = 1e-12 * max(scale, 1e-300)
    total = math.fsum(adaptive_simpson(integrand, a, b, tol) for a, b in zip(knots, knots[1:]))
    return total / beta_function(p - 2, 3), eval_f_plus(gp, sigma, 0.0)


# ---------------------------------------------------------------------------
# monotonicity and the Chebyshev comparator


def monotonicity_report(
    profile: BoundProfile,
    spectrum: Spectrum,
    m: int,
    p_low: Sequence[float] = LOW_GRID,
    p_high: Sequence[float] = HIGH_GRID,
    rtol: float = MONOTONE_RTOL,
) -> CheckReport:
    """``sigma_p`` nonincreasing on ``p_low`` and ``sigma~_p`` nondecreasing on ``p_high``.

    Slack is the smallest consecutive step in the asserted direction,
    relative to the larger of the two values.
    """
    low = sorted(float(p) for p in p_low)
    high = sorted(float(p) for p in p_high)
    lv = [sigma_p(profile, spectrum, m, p).value for p in low]
    hv = [sigma_tilde_p(profile, spectrum, m, p).value for p in high]
    best, where = math.inf, None
    for grid, vals, sign, name in ((low, lv, -1.0, "low"), (high, hv, 1.0, "high")):
        for k in range(len(vals) - 1):
            step = sign * (vals[k + 1] - vals[k]) / max(abs(vals[k]), abs(vals[k + 1]))
            if step < best:
                best, where = step, {"grid": name, "p": grid[k], "p_next": grid[k + 1]}
    if best == math.inf:
        best = 0.0
    inputs = {"profile": profile, "spectrum": spectrum.values[:m], "m": m, "low": low, "high": high}
    return _report(
        "monotonicity", inputs, best, rtol, m=m, worst=where, low_values=lv, high_values=hv
    )


def chebyshev_report(
    trials: int = 10_000, length: int = 8, seed: int = 0, control: bool = False, rtol: float = CHEBYSHEV_RTOL
) -> CheckReport:
    """Random weighted Chebyshev comparisons.

    With oppositely ordered ``a, b`` the gap should be nonpositive and the
    slack is ``-gap / scale``; the ``control`` run orders them the same way,
    where the gap should be nonnegative and the slack is ``gap / scale``.
    """
    if trials < 1 or length < 1:
        raise InputError("trials and length must be positive")
    rng = np.random.default_rng(seed)
    best, where = math.inf, None
    for t in range(trials):
        w = rng.random(length)
        a = np.sort(rng.normal(size=length))
        b = np.sort(rng.normal(size=length))
        if not control:
            b = b[::-1]
        gap = chebyshev_gap(w.tolist(), a.tolist(), b.tolist())
        scale = float(np.sum(w) * np.sum(np.abs(w * a * b)) + np.sum(np.abs(w * a)) * np.sum(np.abs(w * b)))
        s = (gap if control else -gap) / scale if scale > 0 else 0.0
        if s < best:
            best, where = s, t
    name = "chebyshev_control" if control else "chebyshev"
    inputs = {"trials": trials, "length": length, "seed": seed, "control": control}
    return _report(name, inputs, best, rtol, trial=where, trials=trials, length=length, seed=seed)


# ---------------------------------------------------------------------------
# suite


def run_suite(
    profile: BoundProfile,
    spectrum: Spectrum,
    m: int | None = None,
    seed: int = 0,
    family_p: Sequence[float] = FAMILY_P,
    chebyshev_trials: int = 10_000,
    al_trials: int = 50,
    family_rtol: float = FAMILY_RTOL,
) -> list[CheckReport]:
    """Every check for one ``(profile, spectrum)``.

    ``m = None`` runs the spectrum-dependent checks for every ``m`` that
    has a next eigenvalue. The seeded checks (Chebyshev comparisons, beta integrals)
    run once. ``family_rtol`` scales the tolerance of the inequality checks.
    """
    ms = [m] if m is not None else list(range(1, len(spectrum)))
    if not ms:
        raise MissingNextEigenvalue("need at least two eigenvalues to verify anything")
    reports = []
    for k in ms:
        for p in family_p:
            reports.append(check_family_inequality(profile, spectrum, k, p, family_rtol))
        reports.append(check_hp_form(profile, spectrum, k, family_rtol))
        ones = MonotoneFunctionTable(spectrum.values[:k], (1.0,) * k)
        reports.append(check_theorem31(profile, spectrum, k, ones, family_rtol))
        reports.append(monotonicity_report(profile, spectrum, k))
    reports.append(chebyshev_report(chebyshev_trials, 8, seed))
    reports.append(aizenman_lieb_batch(al_trials, seed))
    reports.append(beta_ratio_report())
    return reports
