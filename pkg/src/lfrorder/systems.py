"""Lifetime distributions of series and parallel systems.

A series system of independent components fails at the minimum component
lifetime; its cumulative hazard is the sum of the component hazards, so
the system is itself LFR with aggregated coefficients ``(sum alpha_k,
sum beta_k)`` and inherits the closed-form quantile.  A parallel system
fails at the maximum; its CDF is the product of component CDFs and its
quantile is found by bracketed bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _kernels as _k
from .errors import DomainError
from .lfr import LfrParams, _as_u, _as_x, _ret

__all__ = [
    "ComponentSet",
    "SystemKind",
    "SystemDist",
    "series_cdf",
    "series_sf",
    "series_pdf",
    "series_hrf",
    "series_quantile",
    "parallel_cdf",
    "parallel_sf",
    "parallel_pdf",
    "parallel_hrf",
    "parallel_quantile",
    "system_dist",
]


class SystemKind(str, Enum):
    SERIES = "series"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class ComponentSet:
    """Ordered, nonempty collection of component parameters."""

    components: tuple[LfrParams, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 1:
            raise DomainError("a system needs at least one component")
        if not all(isinstance(c, LfrParams) for c in comps):
            raise DomainError("components must be LfrParams instances")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_arrays(cls, alphas: Sequence[float], betas: Sequence[float]) -> "ComponentSet":
        if len(alphas) != len(betas):
            raise DomainError("alphas and betas must have equal length")
        return cls(tuple(LfrParams(a, b) for a, b in zip(alphas, betas)))

    def __len__(self) -> int:
        return len(self.components)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([c.alpha for c in self.components])

    @property
    def betas(self) -> np.ndarray:
        return np.array([c.beta for c in self.components])

    @property
    def alpha_sum(self) -> float:
        return float(np.sum(self.alphas))

    @property
    def beta_sum(self) -> float:
        return float(np.sum(self.betas))

    def aggregate(self) -> LfrParams:
        """Single-component equivalent of the series system."""
        return LfrParams(self.alpha_sum, self.beta_sum)


# -- series ---------------------------------------------------------------
# All series evaluations delegate to the aggregated coefficients, which
# makes the aggregation identity with lfr_* exact by construction.


def series_cdf(cs: ComponentSet, x):
    arr, scalar = _as_x(x)
    return _ret(_k.cdf_ab(cs.alpha_sum, cs.beta_sum, arr), scalar)


def series_sf(cs: ComponentSet, x):
    arr, scalar = _as_x(x)
    return _ret(_k.sf_ab(cs.alpha_sum, cs.beta_sum, arr), scalar)


def series_pdf(cs: ComponentSet, x):
    """hrf * sf, valid for heterogeneous betas (reduces to the common-beta
    expression when all betas agree)."""
    arr, scalar = _as_x(x)
    return _ret(_k.pdf_ab(cs.alpha_sum, cs.beta_sum, arr), scalar)


def series_hrf(cs: ComponentSet, x):
    """Sum of component hazards: (sum alpha_k) + (sum beta_k) * x."""
    arr, scalar = _as_x(x)
    return _ret(_k.hrf_ab(cs.alpha_sum, cs.beta_sum, arr), scalar)


def series_quantile(cs: ComponentSet, u):
    """Closed-form inverse of the aggregated quadratic cumulative hazard."""
    arr, scalar = _as_u(u)
    return _ret(_k.quantile_ab(cs.alpha_sum, cs.beta_sum, arr), scalar)


# -- parallel ---------------------------------------------------------------


def parallel_cdf(cs: ComponentSet, x):
    arr, scalar = _as_x(x)
    return _ret(_k.parallel_cdf(cs.alphas, cs.betas, arr), scalar)


def parallel_sf(cs: ComponentSet, x):
    arr, scalar = _as_x(x)
    return _ret(_k.parallel_sf(cs.alphas, cs.betas, arr), scalar)


def parallel_pdf(cs: ComponentSet, x):
    arr, scalar = _as_x(x)
    return _ret(_k.parallel_pdf(cs.alphas, cs.betas, arr), scalar)


def parallel_hrf(cs: ComponentSet, x):
    """pdf / sf; no closed form.  Returns inf/nan where sf underflows --
    order checkers guard those points with their survival floor."""
    arr, scalar = _as_x(x)
    dens = _k.parallel_pdf(cs.alphas, cs.betas, arr)
    surv = _k.parallel_sf(cs.alphas, cs.betas, arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = dens / surv
    return _ret(out, scalar)


def parallel_quantile(cs: ComponentSet, u, cdf_tol: float = 1e-10):
    """Root of parallel_cdf(.) = u by bracketed bisection.

    The bracket starts at the largest component quantile (a lower bound
    for the maximum's quantile) and doubles the upper end at most 128
    times; raises NumericError if no bracket is found.
    """
    arr, scalar = _as_u(u)
    return _ret(_k.parallel_quantile(cs.alphas, cs.betas, arr, cdf_tol), scalar)


# -- bundled distribution ---------------------------------------------------


@dataclass(frozen=True)
class SystemDist:
    """Evaluable lifetime distribution of a series or parallel system."""

    kind: SystemKind
    components: ComponentSet

    def __post_init__(self):
        object.__setattr__(self, "kind", SystemKind(self.kind))

    @property
    def n(self) -> int:
        return len(self.components)

    def cdf(self, x):
        f = series_cdf if self.kind is SystemKind.SERIES else parallel_cdf
        return f(self.components, x)

    def sf(self, x):
        f = series_sf if self.kind is SystemKind.SERIES else parallel_sf
        return f(self.components, x)

    def pdf(self, x):
        f = series_pdf if self.kind is SystemKind.SERIES else parallel_pdf
        return f(self.components, x)

    def hrf(self, x):
        f = series_hrf if self.kind is SystemKind.SERIES else parallel_hrf
        return f(self.components, x)

    def quantile(self, u):
        f = series_quantile if self.kind is SystemKind.SERIES else parallel_quantile
        return f(self.components, u)


def system_dist(kind: SystemKind | str, cs: ComponentSet) -> SystemDist:
    """Bundle the matching cdf/sf/pdf/hrf/quantile for downstream checkers."""
    return SystemDist(SystemKind(kind), cs)
