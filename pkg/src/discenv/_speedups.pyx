# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for disc boundary/area evaluation.

Mirrors discenv._kernels_np; the hot loops here dominate the runtime of
quadrature-heavy functional evaluation and of the envelope optimizer.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log as clog

cnp.import_array()


def eval_poly(coeffs_in, t_in):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] coeffs = np.ascontiguousarray(coeffs_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] t = np.ascontiguousarray(t_in, dtype=np.complex128)
    cdef Py_ssize_t n = t.shape[0], m = coeffs.shape[1], dp1 = coeffs.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((n, m), dtype=np.complex128)
    cdef Py_ssize_t i, j, k
    cdef double complex acc, ti
    for i in range(n):
        ti = t[i]
        for j in range(m):
            acc = coeffs[dp1 - 1, j]
            for k in range(dp1 - 2, -1, -1):
                acc = acc * ti + coeffs[k, j]
            out[i, j] = acc
    return out


def lognorm(coeffs_in, t_in):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] coeffs = np.ascontiguousarray(coeffs_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] t = np.ascontiguousarray(t_in, dtype=np.complex128)
    cdef Py_ssize_t n = t.shape[0], m = coeffs.shape[1], dp1 = coeffs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double complex acc, ti
    cdef double s
    for i in range(n):
        ti = t[i]
        s = 0.0
        for j in range(m):
            acc = coeffs[dp1 - 1, j]
            for k in range(dp1 - 2, -1, -1):
                acc = acc * ti + coeffs[k, j]
            s += acc.real * acc.real + acc.imag * acc.imag
        out[i] = 0.5 * clog(s) if s > 0.0 else -np.inf
    return out


def fs_density(coeffs_in, t_in):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] coeffs = np.ascontiguousarray(coeffs_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] t = np.ascontiguousarray(t_in, dtype=np.complex128)
    cdef Py_ssize_t n = t.shape[0], m = coeffs.shape[1], dp1 = coeffs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dens = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sq = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double complex acc, dacc, ti, ip
    cdef double s, sp, val
    if dp1 == 1:
        s = 0.0
        for j in range(m):
            acc = coeffs[0, j]
            s += acc.real * acc.real + acc.imag * acc.imag
        dens[:] = 0.0
        sq[:] = s
        return dens, sq
    for i in range(n):
        ti = t[i]
        s = 0.0
        sp = 0.0
        ip = 0.0
        for j in range(m):
            # Horner for f and f' simultaneously
            acc = coeffs[dp1 - 1, j]
            dacc = 0.0
            for k in range(dp1 - 2, -1, -1):
                dacc = dacc * ti + acc
                acc = acc * ti + coeffs[k, j]
            s += acc.real * acc.real + acc.imag * acc.imag
            sp += dacc.real * dacc.real + dacc.imag * dacc.imag
            ip += dacc * acc.conjugate()
        val = 2.0 * (s * sp - (ip.real * ip.real + ip.imag * ip.imag)) / (s * s)
        dens[i] = val if val > 0.0 else 0.0
        sq[i] = s
    return dens, sq
