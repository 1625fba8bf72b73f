# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Each routine mirrors a function of the same name in ``_kernels_py``; the
package picks one implementation at import time (see ``kernels.py``).
Sums run in ascending index order with Neumaier compensation, so results
do not depend on how callers batch their inputs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs, ceil, M_PI

cdef extern from "complex.h" nogil:
    double complex clog(double complex z)
    double complex cexp(double complex z)
    double creal(double complex z)
    double cimag(double complex z)

cnp.import_array()

# B_{2k} / (2k (2k-1)), k = 1..10
cdef double[10] STIRLING = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
]

cdef double HALF_LOG_2PI = 0.91893853320467274178032973640562


cdef struct csum:
    double re
    double im
    double cre
    double cim


cdef inline void csum_init(csum* acc) noexcept nogil:
    acc.re = 0.0
    acc.im = 0.0
    acc.cre = 0.0
    acc.cim = 0.0


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef inline void csum_add(csum* acc, double complex x) noexcept nogil:
    _neumaier(&acc.re, &acc.cre, creal(x))
    _neumaier(&acc.im, &acc.cim, cimag(x))


cdef inline double complex csum_value(csum* acc) noexcept nogil:
    return (acc.re + acc.cre) + 1j * (acc.im + acc.cim)


def power_sums(const double complex[:] z, int lmax, long n_terms):
    """Direct partial sums over n = 1..n_terms.

    Column 0 holds sum (1/(z+n) - 1/n); column l-1 (l >= 2) holds
    sum (z+n)^(-l).
    """
    cdef Py_ssize_t m = z.shape[0]
    out = np.zeros((m, lmax), dtype=np.complex128)
    cdef double complex[:, :] res = out
    cdef csum[64] acc
    cdef Py_ssize_t i, l
    cdef long n
    cdef double complex zi, inv, p
    if lmax > 64:
        raise ValueError("lmax too large")
    with nogil:
        for i in range(m):
            zi = z[i]
            for l in range(lmax):
                csum_init(&acc[l])
            for n in range(1, n_terms + 1):
                inv = 1.0 / (zi + n)
                # 1/(z+n) - 1/n = -z / (n (z+n)) avoids cancellation
                csum_add(&acc[0], -zi * inv / n)
                p = inv
                for l in range(1, lmax):
                    p = p * inv
                    csum_add(&acc[l], p)
            for l in range(lmax):
                res[i, l] = csum_value(&acc[l])
    return out


def dirichlet_sums(const double complex[:] a, double complex s, int kmax, weights=None):
    """T_k = sum_{n=1}^{N} a_n w_n (-log n)^k n^(-s), k = 0..kmax."""
    cdef Py_ssize_t N = a.shape[0]
    cdef const double complex[:] w
    cdef bint has_w = weights is not None
    if has_w:
        w = np.ascontiguousarray(weights, dtype=np.complex128)
        if w.shape[0] != N:
            raise ValueError("weights and coefficients differ in length")
    out = np.zeros(kmax + 1, dtype=np.complex128)
    cdef double complex[:] res = out
    cdef csum[32] acc
    cdef Py_ssize_t n, k
    cdef double ln, neg
    cdef double complex term
    if kmax > 31:
        raise ValueError("kmax too large")
    with nogil:
        for k in range(kmax + 1):
            csum_init(&acc[k])
        for n in range(N):
            ln = log(<double>(n + 1))
            term = a[n] * cexp(-s * ln)
            if has_w:
                term = term * w[n]
            neg = -ln
            csum_add(&acc[0], term)
            for k in range(1, kmax + 1):
                term = term * neg
                csum_add(&acc[k], term)
        for k in range(kmax + 1):
            res[k] = csum_value(&acc[k])
    return out


cdef inline double complex _loggamma_one(double complex z) noexcept nogil:
    cdef double x = creal(z)
    cdef double y = cimag(z)
    cdef long shift = 0
    cdef long k
    cdef double complex acc_shift = 0
    cdef csum acc
    cdef double complex zz, inv, inv2, series, lz
    if x < 10.0 and fabs(y) < 10.0:
        shift = <long>ceil(10.0 - x)
    elif x < 0.0:
        shift = <long>ceil(-x)
    csum_init(&acc)
    for k in range(shift):
        csum_add(&acc, clog(z + k))
    acc_shift = csum_value(&acc)
    zz = z + shift
    inv = 1.0 / zz
    inv2 = inv * inv
    series = STIRLING[9]
    for k in range(8, -1, -1):
        series = series * inv2 + STIRLING[k]
    series = series * inv
    lz = clog(zz)
    return (zz - 0.5) * (lz - 1.0) - 0.5 + HALF_LOG_2PI + series - acc_shift


def loggamma(const double complex[:] z):
    """Principal-branch log Gamma (cut along the negative real axis)."""
    cdef Py_ssize_t m = z.shape[0]
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[:] res = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            res[i] = _loggamma_one(z[i])
    return out
