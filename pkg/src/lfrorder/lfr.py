"""Single-component linear-failure-rate (LFR) lifetime distribution.

A component with hazard rate ``alpha + beta*x`` has cumulative hazard
``alpha*x + beta/2*x**2``; the CDF is one minus the exponential of its
negative.  ``beta = 0`` is the exponential sub-model, ``alpha = 0`` the
Rayleigh sub-model; both boundaries are accepted (the fully degenerate
``alpha = beta = 0`` is not).

All operations are pure functions of immutable inputs and accept scalar
or array arguments, returning a matching shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import DomainError

__all__ = [
    "LfrParams",
    "lfr_cdf",
    "lfr_sf",
    "lfr_pdf",
    "lfr_hrf",
    "lfr_quantile",
]


@dataclass(frozen=True)
class LfrParams:
    """Hazard coefficients of one component: rate ``alpha + beta*x``.

    ``alpha`` has units 1/time, ``beta`` units 1/time**2.  Both must be
    finite and nonnegative, and at least one strictly positive.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise DomainError(f"non-finite parameters: alpha={a}, beta={b}")
        if a < 0.0 or b < 0.0:
            raise DomainError(f"negative parameters: alpha={a}, beta={b}")
        if a == 0.0 and b == 0.0:
            raise DomainError("alpha and beta cannot both be zero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)


def _as_x(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite")
    if np.any(arr < 0.0):
        raise DomainError("x must be nonnegative")
    return np.ascontiguousarray(arr), scalar


def _as_u(u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise DomainError("probability must be finite")
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("probability must lie in [0, 1)")
    return np.ascontiguousarray(arr), scalar


def _ret(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def lfr_cdf(p: LfrParams, x):
    """P(lifetime <= x) = 1 - exp(-(alpha*x + beta/2*x^2))."""
    arr, scalar = _as_x(x)
    return _ret(_k.cdf_ab(p.alpha, p.beta, arr), scalar)


def lfr_sf(p: LfrParams, x):
    """Survival P(lifetime > x), evaluated in the exponent domain."""
    arr, scalar = _as_x(x)
    return _ret(_k.sf_ab(p.alpha, p.beta, arr), scalar)


def lfr_pdf(p: LfrParams, x):
    """Density (alpha + beta*x) * sf(x)."""
    arr, scalar = _as_x(x)
    return _ret(_k.pdf_ab(p.alpha, p.beta, arr), scalar)


def lfr_hrf(p: LfrParams, x):
    """Hazard rate, exactly alpha + beta*x."""
    arr, scalar = _as_x(x)
    return _ret(_k.hrf_ab(p.alpha, p.beta, arr), scalar)


def lfr_quantile(p: LfrParams, u):
    """Unique x with cdf(x) = u, for u in [0, 1).

    Uses the stable form ``-2*log(1-u) / (alpha + sqrt(alpha^2 -
    2*beta*log(1-u)))`` which avoids cancellation for small u and covers
    the beta = 0 branch.
    """
    arr, scalar = _as_u(u)
    return _ret(_k.quantile_ab(p.alpha, p.beta, arr), scalar)
