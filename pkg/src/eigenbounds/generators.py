"""Spectra with known ground truth.

Analytic box eigenvalues, finite-difference Dirichlet Laplacians in 1D and
2D, and finite-difference Sturm-Liouville and variable-density problems.
The discrete problems are symmetric tridiagonal and are solved by
Sturm-sequence bisection (:func:`tridiag_eigenvalues`).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .coefficients import parse_coefficient
from .errors import CountTooLarge, InputError, NonPositiveDensity, NonPositiveP, NumericalError
from .profiles import (
    BoundProfile,
    classical_membrane,
    inhomogeneous_membrane,
    sturm_liouville,
)
from .spectra import Spectrum, make_spectrum

EPS = np.finfo(float).eps
TINY = np.finfo(float).tiny


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size < 1 or e.shape != (d.size - 1,):
            raise InputError(f"need n diagonal and n-1 off-diagonal entries, got {d.shape}, {e.shape}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise InputError("tridiagonal entries must be finite")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.n)
        r[:-1] += np.abs(self.offdiag)
        r[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def sturm_count(T: TridiagonalMatrix, x) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``x``.

    Counts negative pivots of ``d_1 = a_1 - x``,
    ``d_i = (a_i - x) - e_{i-1}^2 / d_{i-1}``; a pivot that is exactly zero
    (or smaller than ``pivmin``) is replaced by ``-pivmin``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e2 = T.offdiag**2
    pivmin = TINY * max(1.0, float(e2.max()) if e2.size else 1.0)
    d = T.diag[0] - x
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    count = (d < 0).astype(np.int64)
    for i in range(1, T.n):
        d = (T.diag[i] - x) - e2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d < 0
    return count


def tridiag_eigenvalues(T: TridiagonalMatrix, count: int | None = None) -> np.ndarray:
    """The ``count`` smallest eigenvalues, ascending, by Sturm bisection.

    All requested eigenvalues are bisected simultaneously from the
    Gershgorin interval until the bracket cannot be split further in double
    precision.
    """
    n = T.n
    count = n if count is None else count
    if not 1 <= count <= n:
        raise CountTooLarge(f"requested {count} eigenvalues of a {n}x{n} matrix")
    if not np.any(T.offdiag):
        # decoupled: the diagonal is the spectrum
        return np.sort(np.asarray(T.diag, dtype=float))[:count]
    glo, ghi = T.gershgorin()
    width = max(ghi - glo, abs(glo), abs(ghi), TINY)
    pad = 2 * EPS * width + TINY
    k = np.arange(count)
    lo = np.full(count, glo - pad)
    hi = np.full(count, ghi + pad)
    floor = EPS * EPS * width
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi) & (hi - lo > np.maximum(2 * EPS * np.maximum(abs(lo), abs(hi)), floor))
        if not active.any():
            break
        c = sturm_count(T, mid)
        below = c <= k
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    return 0.5 * (lo + hi)


# --- analytic and discretized spectra ---------------------------------------

def box_spectrum(sides: Sequence[float], count: int) -> Spectrum:
    """Smallest ``count`` Dirichlet eigenvalues of the box with the given sides.

    ``pi^2 sum_j (k_j / a_j)^2`` over integer ``k_j >= 1``, with multiplicity.
    The energy cutoff doubles until at least ``count`` lattice points lie
    under it; enumeration below a cutoff is exhaustive.
    """
    sides = [float(a) for a in sides]
    if not sides or any(not (a > 0 and math.isfinite(a)) for a in sides):
        raise InputError(f"box sides must be positive, got {sides}")
    if count < 1:
        raise InputError(f"count must be positive, got {count}")
    inv2 = [1.0 / (a * a) for a in sides]
    cutoff = 2.0 * math.pi**2 * sum(inv2)
    while True:
        vals = _lattice_below(inv2, cutoff / math.pi**2)
        if len(vals) >= count:
            break
        cutoff *= 2.0
    vals.sort()
    return make_spectrum([math.pi**2 * v for v in vals[:count]], 1)


def _lattice_below(inv2, bound):
    """All ``sum_j k_j^2 inv2_j <= bound`` with ``k_j >= 1``."""
    out = []

    def rec(j, acc):
        if j == len(inv2):
            out.append(acc)
            return
        rest = sum(inv2[j + 1 :])  # every later k is at least 1
        k = 1
        while acc + k * k * inv2[j] + rest <= bound:
            rec(j + 1, acc + k * k * inv2[j])
            k += 1

    rec(0, 0.0)
    return out


def fd_eigenvalues_1d(length: float, grid: int, count: int) -> np.ndarray:
    """Closed form ``(4/h^2) sin^2(k pi / (2(n+1)))``, ``h = L/(n+1)``."""
    h = length / (grid + 1)
    k = np.arange(1, count + 1)
    return (4.0 / (h * h)) * np.sin(k * np.pi / (2 * (grid + 1))) ** 2


def laplacian_1d_matrix(length: float, grid: int) -> TridiagonalMatrix:
    h = length / (grid + 1)
    return TridiagonalMatrix(np.full(grid, 2.0 / (h * h)), np.full(grid - 1, -1.0 / (h * h)))


def fd_laplacian_1d(length: float, grid: int, count: int, cross_check: bool = True) -> Spectrum:
    """Dirichlet FD Laplacian on ``(0, length)`` with ``grid`` interior nodes.

    The closed form is returned; with ``cross_check`` it is compared against
    Sturm bisection of the assembled matrix at ``1e-10`` relative.
    """
    _check_grid(grid)
    if not length > 0:
        raise InputError(f"length must be positive, got {length}")
    if not 1 <= count:
        raise InputError(f"count must be positive, got {count}")
    if count > grid:
        raise CountTooLarge(f"{count} eigenvalues requested from a grid of {grid} nodes")
    vals = fd_eigenvalues_1d(length, grid, count)
    if cross_check:
        bis = tridiag_eigenvalues(laplacian_1d_matrix(length, grid), count)
        err = np.max(np.abs(bis - vals) / vals)
        if err > 1e-10:
            raise NumericalError(f"closed form and bisection disagree (relative error {err:.3g})")
    return make_spectrum(vals.tolist(), 1)


def fd_laplacian_2d_kronecker(lx: float, ly: float, nx: int, ny: int, count: int) -> Spectrum:
    """5-point Laplacian on a rectangle: eigenvalues are sums ``mu_j + nu_k``
    of the 1D eigenvalues; the smallest ``count`` sums come from a heap merge."""
    for n in (nx, ny):
        if n < 1:
            raise InputError(f"grid sizes must be positive, got {nx}, {ny}")
    if not (lx > 0 and ly > 0):
        raise InputError("side lengths must be positive")
    if not 1 <= count:
        raise InputError(f"count must be positive, got {count}")
    if count > nx * ny:
        raise CountTooLarge(f"{count} eigenvalues requested from a {nx}x{ny} grid")
    mu = fd_eigenvalues_1d(lx, nx, min(count, nx)).tolist()
    nu = fd_eigenvalues_1d(ly, ny, min(count, ny)).tolist()
    heap = [(mu[0] + nu[k], 0, k) for k in range(len(nu))]
    heapq.heapify(heap)
    out = []
    while len(out) < count:
        v, j, k = heapq.heappop(heap)
        out.append(v)
        if j + 1 < len(mu):
            heapq.heappush(heap, (mu[j + 1] + nu[k], j + 1, k))
    return make_spectrum(out, 1)


def sturm_liouville_matrix(p_fn, q_fn, interval, grid: int) -> TridiagonalMatrix:
    """Symmetric 3-point stencil for ``-(p u')' + q u`` with Dirichlet ends.

    ``p`` is sampled at cell midpoints, ``q`` at the interior nodes.
    """
    _check_grid(grid)
    a, b = map(float, interval)
    if not a < b:
        raise InputError(f"interval must be nonempty, got {interval}")
    h = (b - a) / (grid + 1)
    nodes = a + h * np.arange(1, grid + 1)
    mids = a + h * (np.arange(grid + 1) + 0.5)
    p = np.asarray(p_fn(mids), dtype=float) * np.ones_like(mids)
    if np.any(~np.isfinite(p)) or np.any(p <= 0):
        raise NonPositiveP("p must be positive at every grid midpoint")
    q = np.asarray(q_fn(nodes), dtype=float) * np.ones_like(nodes)
    diag = (p[:-1] + p[1:]) / (h * h) + q
    off = -p[1:-1] / (h * h)
    return TridiagonalMatrix(diag, off)


def sturm_liouville_fd(p_fn, q_fn, interval, grid: int, count: int) -> Spectrum:
    """Smallest ``count`` eigenvalues of the discretized Sturm-Liouville problem."""
    p_fn = parse_coefficient(p_fn) if isinstance(p_fn, str) else p_fn
    q_fn = parse_coefficient(q_fn) if isinstance(q_fn, str) else q_fn
    T = sturm_liouville_matrix(p_fn, q_fn, interval, grid)
    if count > grid:
        raise CountTooLarge(f"{count} eigenvalues requested from a grid of {grid} nodes")
    return make_spectrum(tridiag_eigenvalues(T, count).tolist(), 1)


def inhomogeneous_matrix(q_density, interval, grid: int) -> tuple[TridiagonalMatrix, np.ndarray]:
    """``D^{-1/2} A D^{-1/2}`` for ``A u = lambda D u`` (FD Laplacian, ``D = diag(q)``)."""
    _check_grid(grid)
    a, b = map(float, interval)
    if not a < b:
        raise InputError(f"interval must be nonempty, got {interval}")
    h = (b - a) / (grid + 1)
    nodes = a + h * np.arange(1, grid + 1)
    q = np.asarray(q_density(nodes), dtype=float) * np.ones_like(nodes)
    if np.any(~np.isfinite(q)) or np.any(q <= 0):
        raise NonPositiveDensity("density must be positive at every grid node")
    diag = 2.0 / (h * h * q)
    off = -1.0 / (h * h * np.sqrt(q[:-1] * q[1:]))
    return TridiagonalMatrix(diag, off), q


def inhomogeneous_fd_1d(q_density, interval, grid: int, count: int) -> Spectrum:
    """Smallest ``count`` eigenvalues of ``-u'' = lambda q u`` with Dirichlet ends."""
    q_density = parse_coefficient(q_density) if isinstance(q_density, str) else q_density
    T, _ = inhomogeneous_matrix(q_density, interval, grid)
    if count > grid:
        raise CountTooLarge(f"{count} eigenvalues requested from a grid of {grid} nodes")
    return make_spectrum(tridiag_eigenvalues(T, count).tolist(), 1)


def _check_grid(grid):
    if not (isinstance(grid, (int, np.integer)) and grid >= 3):
        raise InputError(f"grid must be an integer >= 3, got {grid!r}")


# --- source descriptions ----------------------------------------------------

_KINDS = {
    "box_analytic": "box_analytic",
    "box": "box_analytic",
    "fd_1d": "fd_1d",
    "fd1d": "fd_1d",
    "fd_2d_kronecker": "fd_2d_kronecker",
    "fd2d": "fd_2d_kronecker",
    "sturm_liouville_fd": "sturm_liouville_fd",
    "sturm": "sturm_liouville_fd",
    "inhomogeneous_fd_1d": "inhomogeneous_fd_1d",
    "inhomogeneous": "inhomogeneous_fd_1d",
}

_PARAMS = {
    "box_analytic": {"sides"},
    "fd_1d": {"length", "grid"},
    "fd_2d_kronecker": {"lengths", "grids"},
    "sturm_liouville_fd": {"p", "q", "interval", "grid"},
    "inhomogeneous_fd_1d": {"q", "interval", "grid"},
}
_DEFAULTS = {
    "sturm_liouville_fd": {"p": "const:1", "q": "const:0"},
}


@dataclass(frozen=True)
class SpectrumSource:
    """Recipe for a generated spectrum.

    Parameters by kind (JSON field names):

    * ``box_analytic``: ``sides``
    * ``fd_1d``: ``length``, ``grid``
    * ``fd_2d_kronecker``: ``lengths`` (two), ``grids`` (two)
    * ``sturm_liouville_fd``: ``p``, ``q`` (coefficient strings), ``interval``, ``grid``
    * ``inhomogeneous_fd_1d``: ``q`` (density string), ``interval``, ``grid``
    """

    kind: str
    params: dict = field(default_factory=dict)
    count: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown spectrum source kind {self.kind!r}")
        kind = _KINDS[self.kind]
        object.__setattr__(self, "kind", kind)
        params = {**_DEFAULTS.get(kind, {}), **self.params}
        missing = _PARAMS[kind] - set(params)
        extra = set(params) - _PARAMS[kind]
        if missing or extra:
            raise InputError(
                f"{kind}: missing parameters {sorted(missing)}, unexpected {sorted(extra)}"
            )
        object.__setattr__(self, "params", params)
        if not (isinstance(self.count, (int, np.integer)) and not isinstance(self.count, bool)
                and self.count >= 1):
            raise InputError(f"count must be a positive integer, got {self.count!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params, "count": self.count}


def source_from_json(obj: dict) -> SpectrumSource:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("spectrum source JSON must be an object with a 'kind'")
    params = {k: v for k, v in obj.items() if k not in ("kind", "count")}
    return SpectrumSource(str(obj["kind"]), params, obj.get("count", 1))


def generate(source: SpectrumSource) -> Spectrum:
    """Build the spectrum described by ``source``."""
    q = source.params
    try:
        if source.kind == "box_analytic":
            return box_spectrum(_floats(q["sides"]), source.count)
        if source.kind == "fd_1d":
            return fd_laplacian_1d(float(q["length"]), _int(q["grid"]), source.count)
        if source.kind == "fd_2d_kronecker":
            (lx, ly), (nx, ny) = _floats(q["lengths"], 2), [_int(v) for v in _seq(q["grids"], 2)]
            return fd_laplacian_2d_kronecker(lx, ly, nx, ny, source.count)
        if source.kind == "sturm_liouville_fd":
            return sturm_liouville_fd(
                parse_coefficient(q["p"]), parse_coefficient(q["q"]),
                _floats(q["interval"], 2), _int(q["grid"]), source.count,
            )
        return inhomogeneous_fd_1d(
            parse_coefficient(q["q"]), _floats(q["interval"], 2), _int(q["grid"]), source.count
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad parameters for {source.kind}: {exc}") from None


def consistent_profile(source: SpectrumSource, sl_grid: int = 10_000) -> BoundProfile:
    """The profile whose inequalities the generated problem satisfies."""
    q = source.params
    if source.kind == "box_analytic":
        return classical_membrane(len(_floats(q["sides"])))
    if source.kind == "fd_1d":
        return classical_membrane(1)
    if source.kind == "fd_2d_kronecker":
        return classical_membrane(2)
    if source.kind == "sturm_liouville_fd":
        return sturm_liouville(q["p"], q["q"], _floats(q["interval"], 2), sl_grid)
    T, dens = inhomogeneous_matrix(parse_coefficient(q["q"]), _floats(q["interval"], 2), _int(q["grid"]))
    return inhomogeneous_membrane(1, float(dens.min()), float(dens.max()))


def _seq(v, n=None):
    if isinstance(v, str):
        v = v.split(",")
    v = list(v)
    if n is not None and len(v) != n:
        raise InputError(f"expected {n} values, got {v!r}")
    return v


def _floats(v, n=None):
    return [float(t) for t in _seq(v, n)]


def _int(v):
    f = float(v)
    if not f.is_integer():
        raise InputError(f"expected an integer, got {v!r}")
    return int(f)
