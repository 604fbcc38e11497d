"""NumPy reference kernels.

Every function here has a compiled twin in ``_ckern.pyx``; the package
selects one implementation at import time (see ``__init__``).  Inputs are
assumed pre-validated by the calling layer: ``x`` grids are finite and
nonnegative, probabilities live in [0, 1), parameter arrays are finite
and nonnegative float64.

Conventions
-----------
``a``/``b`` are the aggregated hazard coefficients of a system whose
cumulative hazard is ``a*x + b/2*x**2`` (a single component is the n=1
case).  ``alphas``/``betas`` are per-component arrays for parallel
systems, where no aggregation is possible.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError

# Below this value, factors of the parallel-CDF product are accumulated in
# the log domain to preserve tail accuracy.
_PRODUCT_LOG_SWITCH = 1e-15


def cum_hazard(a: float, b: float, x: np.ndarray) -> np.ndarray:
    return a * x + 0.5 * b * x * x


def sf_ab(a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Survival function, computed in the exponent domain (never 1-CDF)."""
    return np.exp(-cum_hazard(a, b, x))


def cdf_ab(a: float, b: float, x: np.ndarray) -> np.ndarray:
    return -np.expm1(-cum_hazard(a, b, x))


def pdf_ab(a: float, b: float, x: np.ndarray) -> np.ndarray:
    return (a + b * x) * np.exp(-cum_hazard(a, b, x))


def hrf_ab(a: float, b: float, x: np.ndarray) -> np.ndarray:
    return a + b * x


def quantile_ab(a: float, b: float, u: np.ndarray) -> np.ndarray:
    """Inverse CDF via the cancellation-free quadratic root.

    ``x = -2*log(1-u) / (a + sqrt(a^2 - 2*b*log(1-u)))`` is algebraically
    the positive root of ``b/2*x^2 + a*x + log(1-u) = 0`` but stays
    accurate when ``b*|log(1-u)| << a^2``, and reduces to ``-log(1-u)/a``
    for b = 0.
    """
    log_sf = np.log1p(-u)  # <= 0
    numer = -2.0 * log_sf
    if a == 0.0:
        # ratio before sqrt: b*log_sf could underflow where numer/b cannot
        return np.sqrt(numer / b)
    denom = a + np.sqrt(a * a - 2.0 * b * log_sf)
    with np.errstate(invalid="ignore"):
        out = np.where(numer == 0.0, 0.0, numer / denom)
    return out


def quantile_from_cum_hazard(a: float, b: float, ch: np.ndarray) -> np.ndarray:
    """Inverse CDF evaluated at u = 1 - exp(-ch), taking the cumulative
    hazard directly.

    Equivalent to ``quantile_ab(a, b, -expm1(-ch))`` but exact for large
    ch, where the probability would round to 1.  This is how one system's
    quantile is composed with another's CDF.
    """
    numer = 2.0 * ch
    denom = a + np.sqrt(a * a + 2.0 * b * ch)
    with np.errstate(invalid="ignore"):
        return np.where(numer == 0.0, 0.0, numer / denom)


def parallel_cdf(alphas: np.ndarray, betas: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Product of component CDFs, with a log-domain fallback for deep tails."""
    ch = alphas[:, None] * x + 0.5 * betas[:, None] * x * x
    factors = -np.expm1(-ch)
    out = np.prod(factors, axis=0)
    tiny = (factors < _PRODUCT_LOG_SWITCH).any(axis=0) & (factors > 0.0).all(axis=0)
    if tiny.any():
        out[tiny] = np.exp(np.sum(np.log(factors[:, tiny]), axis=0))
    return out


def parallel_sf(alphas: np.ndarray, betas: np.ndarray, x: np.ndarray) -> np.ndarray:
    """1 - prod(CDF_k), kept accurate when every component CDF is near 1.

    Per-component log CDFs are taken as ``log1p(-exp(-ch))`` before any
    rounding to probability, so a tail like 1 - 1e-130 survives; the
    ``log1p(-1) = -inf`` at ch = 0 propagates to the correct sf = 1.
    """
    ch = alphas[:, None] * x + 0.5 * betas[:, None] * x * x
    with np.errstate(divide="ignore"):
        log_factors = np.log1p(-np.exp(-ch))
    return -np.expm1(np.sum(log_factors, axis=0))


def parallel_pdf(alphas: np.ndarray, betas: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Derivative of the CDF product: sum_j f_j * prod_{k!=j} F_k.

    Leave-one-out products are formed from prefix/suffix cumulative
    products so no division by a (possibly zero) factor occurs.
    """
    n = alphas.shape[0]
    ch = alphas[:, None] * x + 0.5 * betas[:, None] * x * x
    factors = -np.expm1(-ch)
    dens = (alphas[:, None] + betas[:, None] * x) * np.exp(-ch)
    if n == 1:
        return dens[0]
    prefix = np.ones_like(factors)
    prefix[1:] = np.cumprod(factors[:-1], axis=0)
    suffix = np.ones_like(factors)
    suffix[:-1] = np.cumprod(factors[::-1], axis=0)[::-1][1:]
    return np.sum(dens * prefix * suffix, axis=0)


def parallel_quantile(
    alphas: np.ndarray,
    betas: np.ndarray,
    u: np.ndarray,
    cdf_tol: float = 1e-10,
    max_doublings: int = 128,
) -> np.ndarray:
    """Invert the parallel CDF by bracketed bisection, vectorized over u.

    The root exceeds every component quantile, so the largest component
    quantile is a valid lower bracket; the upper bracket is found by
    doubling.  Convergence target is on the CDF scale:
    ``|cdf(result) - u| <= cdf_tol``.
    """
    m = u.shape[0]
    out = np.zeros(m)
    active = u > 0.0
    if not active.any():
        return out

    ua = u[active]
    lo = np.zeros(ua.shape[0])
    for k in range(alphas.shape[0]):
        np.maximum(lo, quantile_ab(alphas[k], betas[k], ua), out=lo)

    hi = np.where(lo > 0.0, lo, 1.0)
    need = parallel_cdf(alphas, betas, hi) < ua
    doublings = 0
    while need.any():
        if doublings >= max_doublings:
            raise NumericError(
                "failed to bracket the parallel quantile after "
                f"{max_doublings} doublings"
            )
        hi[need] *= 2.0
        need[need] = parallel_cdf(alphas, betas, hi[need]) < ua[need]
        doublings += 1

    x = np.empty_like(ua)
    unresolved = np.ones(ua.shape[0], dtype=bool)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        c = parallel_cdf(alphas, betas, mid)
        done = np.abs(c - ua) <= cdf_tol
        newly = unresolved & done
        x[newly] = mid[newly]
        unresolved &= ~done
        if not unresolved.any():
            break
        below = c < ua
        lo = np.where(unresolved & below, mid, lo)
        hi = np.where(unresolved & ~below, mid, hi)
    if unresolved.any():
        raise NumericError("parallel quantile bisection did not converge")
    out[active] = x
    return out
