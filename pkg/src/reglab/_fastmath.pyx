# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-precision dilogarithm kernels.

Scalar loops with early termination; interface mirrors ``_slowmath``.
"""

import numpy as np

cimport numpy as cnp

from libc.math cimport atan2, fabs, log, sqrt

from ._dilog_coeffs import BERN_COEF, BERN_TERMS, PI2_6, SERIES_TERMS

cnp.import_array()

BACKEND = "cython"

cdef int _BERN_N = BERN_TERMS
cdef double[64] _BC
for _i, _c in enumerate(BERN_COEF):
    _BC[_i] = _c
cdef double _PI2_6 = PI2_6


cdef inline double complex _clog(double complex z):
    return log(sqrt(z.real * z.real + z.imag * z.imag)) + 1j * atan2(z.imag, z.real)


cdef double complex _series(double complex z):
    cdef double complex total = 0
    cdef double complex term = 1
    cdef double complex inc
    cdef int k
    for k in range(1, 200):
        term = term * z
        inc = term / (k * k)
        total = total + inc
        if fabs(inc.real) + fabs(inc.imag) < 1e-18 and k > 3:
            break
    return total


cdef double complex _bernoulli_series(double complex z):
    cdef double complex u = -_clog(1.0 - z)
    cdef double complex upow = u
    cdef double complex total = 0
    cdef double complex inc
    cdef int k
    for k in range(_BERN_N):
        if _BC[k] != 0.0:
            inc = _BC[k] * upow
            total = total + inc
            if fabs(inc.real) + fabs(inc.imag) < 1e-18 and k > 4:
                break
        upow = upow * u
    return total


cdef double complex _li2_disk(double complex z):
    cdef double az = sqrt(z.real * z.real + z.imag * z.imag)
    cdef double complex w
    if az <= 0.6:
        return _series(z)
    w = 1.0 - z
    if sqrt(w.real * w.real + w.imag * w.imag) <= 0.5:
        return _PI2_6 - _clog(z) * _clog(w) - _series(w)
    return _bernoulli_series(z)


cdef double complex _li2_one(double complex z):
    cdef double az = sqrt(z.real * z.real + z.imag * z.imag)
    cdef double complex lz
    if z == 0:
        return 0
    if z == 1:
        return _PI2_6
    if az > 1.0:
        lz = _clog(-z)
        return -_li2_disk(1.0 / z) - _PI2_6 - 0.5 * lz * lz
    return _li2_disk(z)


cdef double _bw_one(double complex z):
    cdef double sign = 1.0
    cdef double az
    if z.imag == 0.0:
        return 0.0
    az = sqrt(z.real * z.real + z.imag * z.imag)
    if az > 1.0:
        z = 1.0 / z
        sign = -1.0
        az = 1.0 / az
    cdef double complex li = _li2_disk(z)
    cdef double complex w = 1.0 - z
    return sign * (li.imag + atan2(w.imag, w.real) * log(az))


def li2_flat(cnp.ndarray z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(
        z, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(zz)
    cdef Py_ssize_t i, n = zz.shape[0]
    for i in range(n):
        out[i] = _li2_one(zz[i])
    return out


def bw_flat(cnp.ndarray z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(
        z, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(zz.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, n = zz.shape[0]
    for i in range(n):
        out[i] = _bw_one(zz[i])
    return out
