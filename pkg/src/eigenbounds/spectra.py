"""Finite eigenvalue prefixes and their power moments."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, NonFinite, NotSorted, PrefixTooLong


@dataclass(frozen=True)
class Spectrum:
    """A validated nondecreasing prefix ``lambda_first <= lambda_first+1 <= ...``.

    Build instances with :func:`make_spectrum`, which validates.
    ``index_origin`` is bookkeeping only: 1 for Dirichlet problems on domains,
    0 for closed manifolds where the first eigenvalue is 0. Every operation
    addresses "the first m entries" regardless of the origin.
    """

    values: tuple[float, ...]
    index_origin: int = 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def prefix(self, m: int) -> tuple[float, ...]:
        """First ``m`` eigenvalues."""
        _check_prefix(self, m)
        return self.values[:m]

    def to_json(self) -> dict:
        return {"eigenvalues": list(self.values), "index_origin": self.index_origin}


def _validate(values: Sequence[float], index_origin: int, abs_tol: float = 0.0):
    if index_origin not in (0, 1):
        raise InputError(f"index_origin must be 0 or 1, got {index_origin!r}")
    if len(values) == 0:
        raise InputError("spectrum must contain at least one eigenvalue")
    for i, v in enumerate(values):
        if not math.isfinite(v):
            raise NonFinite(f"eigenvalue at position {i} is not finite: {v!r}")
    for i in range(len(values) - 1):
        if values[i + 1] < values[i] - abs_tol:
            raise NotSorted(
                f"eigenvalues not nondecreasing at position {i + 1}: "
                f"{values[i + 1]!r} < {values[i]!r}"
            )


def _check_prefix(s: Spectrum, m: int):
    if m < 1:
        raise InputError(f"prefix length must be positive, got {m}")
    if m > len(s.values):
        raise PrefixTooLong(f"prefix length {m} exceeds spectrum length {len(s.values)}")


def make_spectrum(values: Iterable[float], index_origin: int = 1, abs_tol: float = 0.0) -> Spectrum:
    """Validate and wrap a sequence of eigenvalues.

    Values are never sorted here: an out-of-order entry is a data error and
    raises :class:`NotSorted`. ``abs_tol`` tolerates descents of at most that
    size (zero by default).
    """
    vals = tuple(float(v) for v in values)
    _validate(vals, index_origin, abs_tol)
    return Spectrum(vals, index_origin)


def moment(s: Spectrum, m: int, ell: int) -> float:
    """Power mean ``(1/m) * sum(lambda_i ** ell)`` over the first ``m`` entries.

    Summation is exactly rounded (``math.fsum``), so the result does not
    depend on summation order.
    """
    if ell < 0:
        raise InputError(f"moment order must be nonnegative, got {ell}")
    _check_prefix(s, m)
    if ell == 0:
        return 1.0
    return math.fsum(v**ell for v in s.values[:m]) / m


def spectrum_from_json(obj: dict) -> Spectrum:
    """Parse ``{"eigenvalues": [...], "index_origin": 0|1}``; extra keys are rejected."""
    if not isinstance(obj, dict):
        raise InputError("spectrum JSON must be an object")
    unknown = set(obj) - {"eigenvalues", "index_origin"}
    if unknown:
        raise InputError(f"unknown spectrum fields: {sorted(unknown)}")
    if "eigenvalues" not in obj:
        raise InputError("spectrum JSON lacks 'eigenvalues'")
    vals = obj["eigenvalues"]
    if not isinstance(vals, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals
    ):
        raise InputError("'eigenvalues' must be a list of numbers")
    origin = obj.get("index_origin", 1)
    if isinstance(origin, bool) or origin not in (0, 1):
        raise InputError("'index_origin' must be 0 or 1")
    return make_spectrum(vals, origin)


def load_spectrum(path) -> Spectrum:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed spectrum JSON in {path}: {exc}") from None
    return spectrum_from_json(obj)
