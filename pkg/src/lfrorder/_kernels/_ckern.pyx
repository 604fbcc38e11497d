# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics mirror ``_pykern`` function for function.

Kept allocation-light: one output array per call, single fused pass over
the grid.  Tail handling (log-domain products, expm1 complements) matches
the NumPy reference so the two backends agree to rounding error.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, expm1, fabs, log, log1p, sqrt

from ..errors import NumericError

cnp.import_array()

cdef double _PRODUCT_LOG_SWITCH = 1e-15


cdef inline double _ch(double a, double b, double x) nogil:
    return a * x + 0.5 * b * x * x


def cum_hazard(double a, double b, cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = _ch(a, b, x[i])
    return out


def sf_ab(double a, double b, cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = exp(-_ch(a, b, x[i]))
    return out


def cdf_ab(double a, double b, cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = -expm1(-_ch(a, b, x[i]))
    return out


def pdf_ab(double a, double b, cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = (a + b * x[i]) * exp(-_ch(a, b, x[i]))
    return out


def hrf_ab(double a, double b, cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = a + b * x[i]
    return out


cdef inline double _quantile1(double a, double b, double u) nogil:
    cdef double log_sf = log1p(-u)
    cdef double numer = -2.0 * log_sf
    if numer == 0.0:
        return 0.0
    if a == 0.0:
        # ratio before sqrt: b*log_sf could underflow where numer/b cannot
        return sqrt(numer / b)
    return numer / (a + sqrt(a * a - 2.0 * b * log_sf))


def quantile_ab(double a, double b, cnp.ndarray[double, ndim=1] u):
    cdef Py_ssize_t i, m = u.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    for i in range(m):
        out[i] = _quantile1(a, b, u[i])
    return out


def quantile_from_cum_hazard(double a, double b, cnp.ndarray[double, ndim=1] ch):
    # inverse CDF at u = 1 - exp(-ch); exact where u would round to 1
    cdef Py_ssize_t i, m = ch.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    cdef double numer
    for i in range(m):
        numer = 2.0 * ch[i]
        out[i] = 0.0 if numer == 0.0 else numer / (a + sqrt(a * a + 2.0 * b * ch[i]))
    return out


cdef double _parallel_cdf1(double[::1] alphas, double[::1] betas, double x) nogil:
    cdef Py_ssize_t k, n = alphas.shape[0]
    cdef double f, prod = 1.0, logsum = 0.0
    cdef bint tiny = False, haszero = False
    for k in range(n):
        f = -expm1(-_ch(alphas[k], betas[k], x))
        prod *= f
        if f == 0.0:
            haszero = True
        else:
            logsum += log(f)
            if f < _PRODUCT_LOG_SWITCH:
                tiny = True
    if tiny and not haszero:
        return exp(logsum)
    return prod


cdef double _parallel_sf1(double[::1] alphas, double[::1] betas, double x) nogil:
    # log CDFs taken as log1p(-exp(-ch)) before any rounding to
    # probability, so near-1 factors keep their tails
    cdef Py_ssize_t k, n = alphas.shape[0]
    cdef double s, logsum = 0.0
    for k in range(n):
        s = exp(-_ch(alphas[k], betas[k], x))
        if s == 1.0:
            return 1.0
        logsum += log1p(-s)
    return -expm1(logsum)


def parallel_cdf(cnp.ndarray[double, ndim=1] alphas,
                 cnp.ndarray[double, ndim=1] betas,
                 cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    cdef double[::1] al = alphas, be = betas
    for i in range(m):
        out[i] = _parallel_cdf1(al, be, x[i])
    return out


def parallel_sf(cnp.ndarray[double, ndim=1] alphas,
                cnp.ndarray[double, ndim=1] betas,
                cnp.ndarray[double, ndim=1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    cdef double[::1] al = alphas, be = betas
    for i in range(m):
        out[i] = _parallel_sf1(al, be, x[i])
    return out


def parallel_pdf(cnp.ndarray[double, ndim=1] alphas,
                 cnp.ndarray[double, ndim=1] betas,
                 cnp.ndarray[double, ndim=1] x):
    # sum_j f_j * prod_{k != j} F_k; leave-one-out products built from
    # prefix/suffix sweeps so zero factors never force a division
    cdef Py_ssize_t i, k, n = alphas.shape[0], m = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m)
    cdef cnp.ndarray[double, ndim=1] fbuf = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] dbuf = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] sbuf = np.empty(n)
    cdef double[::1] fv = fbuf, dv = dbuf, sv = sbuf
    cdef double ch, acc, prefix
    for i in range(m):
        for k in range(n):
            ch = _ch(alphas[k], betas[k], x[i])
            fv[k] = -expm1(-ch)
            dv[k] = (alphas[k] + betas[k] * x[i]) * exp(-ch)
        sv[n - 1] = 1.0
        for k in range(n - 2, -1, -1):
            sv[k] = sv[k + 1] * fv[k + 1]
        acc = 0.0
        prefix = 1.0
        for k in range(n):
            acc += dv[k] * prefix * sv[k]
            prefix *= fv[k]
        out[i] = acc
    return out


def parallel_quantile(cnp.ndarray[double, ndim=1] alphas,
                      cnp.ndarray[double, ndim=1] betas,
                      cnp.ndarray[double, ndim=1] u,
                      double cdf_tol=1e-10,
                      int max_doublings=128):
    cdef Py_ssize_t i, k, m = u.shape[0], n = alphas.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(m)
    cdef double[::1] al = alphas, be = betas
    cdef double ui, lo, hi, mid, c, q
    cdef int d, it
    cdef bint converged
    for i in range(m):
        ui = u[i]
        if ui == 0.0:
            out[i] = 0.0
            continue
        lo = 0.0
        for k in range(n):
            q = _quantile1(al[k], be[k], ui)
            if q > lo:
                lo = q
        hi = lo if lo > 0.0 else 1.0
        d = 0
        while _parallel_cdf1(al, be, hi) < ui:
            if d >= max_doublings:
                raise NumericError(
                    "failed to bracket the parallel quantile after "
                    f"{max_doublings} doublings")
            hi *= 2.0
            d += 1
        converged = False
        for it in range(200):
            mid = 0.5 * (lo + hi)
            c = _parallel_cdf1(al, be, mid)
            if fabs(c - ui) <= cdf_tol:
                out[i] = mid
                converged = True
                break
            if c < ui:
                lo = mid
            else:
                hi = mid
        if not converged:
            raise NumericError("parallel quantile bisection did not converge")
    return out
