"""Catalog of reduced-inequality profiles.

Every problem class handled here obeys an inequality of the shape

    sum_i (sigma - lambda_i)^p  <=  K(p) * sum_i (sigma - lambda_i)^(p-1) * w(lambda_i)

with an affine weight ``w(lam) = a*lam + b`` and a coefficient that is ``c``
for ``p <= 2`` and ``c*p/2`` for ``p >= 2``. A profile stores ``(c, a, b)``
plus the index origin of the spectra it applies to.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .coefficients import Polynomial, parse_coefficient
from .errors import (
    BadAngle,
    BadDensity,
    BadLambda1,
    BadRatio,
    InputError,
    NonPositiveP,
    NotSPD,
)


@dataclass(frozen=True)
class BoundProfile:
    name: str
    c: float
    a: float
    b: float
    index_origin: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise InputError(f"profile coefficient c must be positive and finite, got {self.c!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InputError("profile weight coefficients must be finite")
        if self.index_origin not in (0, 1):
            raise InputError(f"index_origin must be 0 or 1, got {self.index_origin!r}")

    def K(self, p: float) -> float:
        """Regime coefficient: ``c`` for p <= 2, ``c*p/2`` for p >= 2 (equal at 2)."""
        return self.c if p <= 2 else self.c * p / 2

    def weight(self, lam):
        return self.a * lam + self.b

    def to_json(self) -> dict:
        return asdict(self)


def classical_membrane(n: int) -> BoundProfile:
    """Dirichlet Laplacian on a domain in R^n: ``c = 4/n``, ``w = lambda``."""
    _check_dim(n)
    return BoundProfile(f"classical(n={n})", 4.0 / n, 1.0, 0.0, 1)


def inhomogeneous_membrane(n: int, q_min: float, q_max: float) -> BoundProfile:
    """``-Laplace u = lambda q u`` with density between ``q_min`` and ``q_max``."""
    _check_dim(n)
    if not (q_min > 0 and math.isfinite(q_max) and q_max >= q_min):
        raise BadDensity(f"need 0 < q_min <= q_max < inf, got q_min={q_min}, q_max={q_max}")
    return BoundProfile(
        f"inhomogeneous(n={n},q_min={q_min!r},q_max={q_max!r})",
        4.0 / n * (q_max / q_min),
        1.0,
        0.0,
        1,
    )


def sphere_cap_2d(theta: float) -> BoundProfile:
    """Domain in S^2 inside a geodesic disc of outer radius ``theta``."""
    if not (0 < theta < math.pi):
        raise BadAngle(f"outer radius must lie in (0, pi), got {theta!r}")
    return BoundProfile(f"sphere_cap_2d(theta={theta!r})", 8.0 / (1.0 + math.cos(theta)) ** 2, 1.0, 0.0, 1)


def sphere_n(n: int) -> BoundProfile:
    """Domain in S^n; ``c*w(lambda) = (4*lambda + n^2)/n``."""
    if not (isinstance(n, int) and n >= 2):
        raise InputError(f"sphere dimension must be an integer >= 2, got {n!r}")
    return BoundProfile(f"sphere(n={n})", 4.0 / n, 1.0, n * n / 4.0, 1)


def hyperbolic_2d(y_sup2: float, y_inf2: float) -> BoundProfile:
    """Half-plane model of H^2. The weight is constant (no lambda factor)."""
    if not (y_inf2 > 0 and math.isfinite(y_sup2) and y_sup2 >= y_inf2):
        raise BadRatio(f"need y_sup2 >= y_inf2 > 0, got {y_sup2!r}, {y_inf2!r}")
    return BoundProfile(f"hyperbolic_2d(ratio={y_sup2 / y_inf2!r})", 2.0 * (y_sup2 / y_inf2), 0.0, 1.0, 1)


def minimal_submanifold(n: int) -> BoundProfile:
    """Minimal n-submanifold of a sphere; spectra start at lambda_0 = 0."""
    _check_dim(n)
    return BoundProfile(f"minimal(n={n})", 4.0 / n, 1.0, n * n / 4.0, 0)


def homogeneous_manifold(lambda1: float) -> BoundProfile:
    """Compact homogeneous manifold with first nonzero eigenvalue ``lambda1``."""
    if not (math.isfinite(lambda1) and lambda1 > 0):
        raise BadLambda1(f"first nonzero eigenvalue must be positive, got {lambda1!r}")
    return BoundProfile(f"homogeneous(lambda1={lambda1!r})", 4.0, 1.0, lambda1 / 4.0, 0)


def schrodinger_like(N: int, M: float) -> BoundProfile:
    """``-sum T_k^2 + V`` with ``V >= M``. Weight positivity is left to the solvers."""
    _check_dim(N)
    return BoundProfile(f"schrodinger(N={N},M={M!r})", 4.0 / N, 1.0, -float(M), 1)


def elliptic_constant_coeff(A, b_vec) -> BoundProfile:
    """Constant-coefficient operator ``-div(A grad u) + b.grad u``.

    The eigenvalue shift is ``||A^{-1/2} b||^2 / 4 = b^T A^{-1} b / 4``,
    obtained from a Cholesky factorization ``A = L L^T`` as ``||L^{-1} b||^2``.
    """
    A = np.asarray(A, dtype=float)
    b_vec = np.asarray(b_vec, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"A must be a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if b_vec.shape != (n,):
        raise InputError(f"b must have length {n}, got shape {b_vec.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b_vec))):
        raise InputError("A and b must be finite")
    if not np.allclose(A, A.T, rtol=1e-12, atol=0.0):
        raise NotSPD("A is not symmetric")
    L = _cholesky(A)
    y = _forward_substitute(L, b_vec)
    s = float(np.dot(y, y))
    return BoundProfile(f"elliptic(n={n},shift={s / 4!r})", 4.0 / n, 1.0, -s / 4.0, 1)


def _cholesky(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    tol = 1e-12 * float(np.max(np.diag(A))) if n else 0.0
    L = np.zeros_like(A)
    for j in range(n):
        pivot = A[j, j] - np.dot(L[j, :j], L[j, :j])
        if pivot <= tol or pivot <= 0:
            raise NotSPD(f"nonpositive pivot {pivot!r} at column {j}")
        L[j, j] = math.sqrt(pivot)
        L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def _forward_substitute(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    y = np.zeros_like(b)
    for i in range(len(b)):
        y[i] = (b[i] - np.dot(L[i, :i], y[:i])) / L[i, i]
    return y


def sturm_potential(p_fn, q_fn, x, h=None, p_prime=None, p_second=None) -> np.ndarray:
    """Effective potential ``Q = q - p'^2/(16 p) + p''/4`` sampled at ``x``.

    Missing derivatives are replaced by central differences with step ``h``.
    For the built-in polynomial coefficients the exact derivatives are used.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p_fn(x), dtype=float) * np.ones_like(x)
    if isinstance(p_fn, Polynomial):
        d1 = p_fn.derivative()
        p_prime = p_prime or d1
        p_second = p_second or d1.derivative()
    if p_prime is None or p_second is None:
        if h is None:
            raise InputError("a finite-difference step is needed when derivatives are not supplied")
        pp = np.asarray(p_fn(x + h), dtype=float)
        pm = np.asarray(p_fn(x - h), dtype=float)
        if np.any(pp <= 0) or np.any(pm <= 0):
            raise NonPositiveP("p must be positive at the finite-difference stencil points")
    dp = np.asarray(p_prime(x), dtype=float) if p_prime is not None else (pp - pm) / (2 * h)
    d2p = np.asarray(p_second(x), dtype=float) if p_second is not None else (pp - 2 * p + pm) / (h * h)
    q = np.asarray(q_fn(x), dtype=float) * np.ones_like(x)
    return q - dp**2 / (16.0 * p) + d2p / 4.0


def sturm_liouville(
    p_fn: Callable | str,
    q_fn: Callable | str,
    interval: tuple[float, float],
    grid: int = 10_000,
    p_prime: Callable | None = None,
    p_second: Callable | None = None,
) -> BoundProfile:
    """``-(p u')' + q u = lambda u`` on an interval with Dirichlet ends.

    ``M`` is the minimum of the effective potential over ``grid`` equispaced
    points of the closed interval. A grid minimum can overshoot the true
    infimum if the potential oscillates below the grid scale.
    """
    if isinstance(p_fn, str):
        p_fn = parse_coefficient(p_fn)
    if isinstance(q_fn, str):
        q_fn = parse_coefficient(q_fn)
    lo, hi = map(float, interval)
    if not (lo < hi) or grid < 3:
        raise InputError(f"need a nonempty interval and grid >= 3, got {interval}, {grid}")
    x = np.linspace(lo, hi, grid)
    p = np.asarray(p_fn(x), dtype=float) * np.ones_like(x)
    if np.any(~np.isfinite(p)) or np.any(p <= 0):
        raise NonPositiveP("p must be positive on the sampling grid")
    Q = sturm_potential(p_fn, q_fn, x, h=x[1] - x[0], p_prime=p_prime, p_second=p_second)
    M = float(np.min(Q))
    return BoundProfile(f"sturm_liouville(M={M!r})", 4.0, 1.0, -M, 1)


def _check_dim(n):
    if not (isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n >= 1):
        raise InputError(f"dimension must be a positive integer, got {n!r}")


# --- parsing: inline "kind:k=v,..." and JSON forms -------------------------

def _num(params, key, cast=float):
    if key not in params:
        raise InputError(f"profile parameter {key!r} missing")
    try:
        return cast(params[key])
    except (TypeError, ValueError):
        raise InputError(f"profile parameter {key!r} has invalid value {params[key]!r}") from None


def _int(v):
    f = float(v)
    if not f.is_integer():
        raise ValueError(v)
    return int(f)


def _pair(v):
    if isinstance(v, str):
        v = v.split(",")
    lo, hi = (float(t) for t in v)
    return lo, hi


_BUILDERS = {
    "classical": lambda q: classical_membrane(_num(q, "n", _int)),
    "inhomogeneous": lambda q: inhomogeneous_membrane(
        _num(q, "n", _int), _num(q, "q_min"), _num(q, "q_max")
    ),
    "sphere_cap": lambda q: sphere_cap_2d(_num(q, "theta")),
    "sphere": lambda q: sphere_n(_num(q, "n", _int)),
    "hyperbolic": lambda q: hyperbolic_2d(_num(q, "y_sup2"), _num(q, "y_inf2")),
    "minimal": lambda q: minimal_submanifold(_num(q, "n", _int)),
    "homogeneous": lambda q: homogeneous_manifold(_num(q, "lambda1")),
    "schrodinger": lambda q: schrodinger_like(_num(q, "N", _int), _num(q, "M")),
    "elliptic": lambda q: _elliptic(q),
    "sturm": lambda q: sturm_liouville(
        q.get("p", "const:1"),
        q.get("q", "const:0"),
        _num(q, "interval", _pair),
        _num(q, "grid", _int) if "grid" in q else 10_000,
    ),
    "custom": lambda q: _custom(q),
}
_ALIASES = {
    "classical_membrane": "classical",
    "inhomogeneous_membrane": "inhomogeneous",
    "sphere_cap_2d": "sphere_cap",
    "sphere_n": "sphere",
    "hyperbolic_2d": "hyperbolic",
    "minimal_submanifold": "minimal",
    "homogeneous_manifold": "homogeneous",
    "schrodinger_like": "schrodinger",
    "elliptic_constant_coeff": "elliptic",
    "sturm_liouville": "sturm",
}


def _elliptic(q):
    if "A" not in q or "b" not in q:
        raise InputError("profile 'elliptic' needs parameters 'A' and 'b'")
    return elliptic_constant_coeff(q["A"], q["b"])


def _custom(q):
    origin = q.get("index_origin", q.get("origin", 1))
    return BoundProfile(
        str(q.get("name", "custom")), _num(q, "c"), _num(q, "a"), _num(q, "b"), _int(origin)
    )


def profile_from_params(kind: str, params: dict) -> BoundProfile:
    kind = _ALIASES.get(kind, kind)
    if kind not in _BUILDERS:
        raise InputError(f"unknown profile kind {kind!r}")
    try:
        return _BUILDERS[kind](params)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad parameters for profile {kind!r}: {exc}") from None


def parse_profile_spec(spec: str) -> BoundProfile:
    """Parse an inline spec such as ``classical:n=2`` or ``schrodinger:N=3,M=1``.

    Parameters are ``key=value`` pairs separated by commas. A comma-separated
    token without ``=`` continues the previous value, which lets coefficient
    strings and intervals through: ``sturm:p=affine:1,2,q=const:0,interval=0,1``.
    """
    kind, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    last = None
    for tok in rest.split(",") if rest else []:
        if "=" in tok:
            key, _, val = tok.partition("=")
            last = key.strip()
            params[last] = val.strip()
        elif last is not None:
            params[last] += "," + tok.strip()
        else:
            raise InputError(f"malformed profile spec {spec!r}")
    return profile_from_params(kind.strip(), params)


def profile_from_json(obj: dict) -> BoundProfile:
    """Accept the explicit ``{"name","c","a","b","index_origin"}`` record or a
    named-constructor form ``{"kind": "classical", "n": 2}``."""
    if not isinstance(obj, dict):
        raise InputError("profile JSON must be an object")
    if "kind" in obj:
        params = {k: v for k, v in obj.items() if k != "kind"}
        return profile_from_params(str(obj["kind"]), params)
    unknown = set(obj) - {"name", "c", "a", "b", "index_origin"}
    if unknown:
        raise InputError(f"unknown profile fields: {sorted(unknown)}")
    return profile_from_params("custom", obj)
