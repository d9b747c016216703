# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels; see _reference.py for the contract."""

from libc.math cimport floor

import numpy as np


def second_chaos_batch(double[:, ::1] xi, double[::1] lambdas):
    cdef Py_ssize_t m = xi.shape[0]
    cdef Py_ssize_t d = xi.shape[1]
    cdef Py_ssize_t i, j
    cdef double acc, v
    out = np.empty(m)
    cdef double[::1] ov = out
    for i in range(m):
        acc = 0.0
        for j in range(d):
            v = xi[i, j]
            acc += lambdas[j] * (v * v - 1.0)
        ov[i] = acc
    return out


cdef inline double _hermite_value(long long degree, double x) nogil:
    cdef double h_prev = 1.0
    cdef double h = x
    cdef double nxt
    cdef long long k
    if degree == 0:
        return 1.0
    for k in range(1, degree):
        nxt = x * h - k * h_prev
        h_prev = h
        h = nxt
    return h


def hermite_combo_batch(double[:, ::1] xi, double[::1] coefs,
                        long long[:, ::1] degrees):
    cdef Py_ssize_t m = xi.shape[0]
    cdef Py_ssize_t ncols = xi.shape[1]
    cdef Py_ssize_t nterms = coefs.shape[0]
    cdef Py_ssize_t i, t, c
    cdef double acc, term
    cdef long long deg
    out = np.empty(m)
    cdef double[::1] ov = out
    for i in range(m):
        acc = 0.0
        for t in range(nterms):
            term = coefs[t]
            for c in range(ncols):
                deg = degrees[t, c]
                if deg:
                    term *= _hermite_value(deg, xi[i, c])
            acc += term
        ov[i] = acc
    return out


def power_sums(double[::1] x, int max_power):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef int j
    cdef double p
    out = np.zeros(max_power)
    cdef double[::1] ov = out
    for i in range(n):
        p = 1.0
        for j in range(max_power):
            p *= x[i]
            ov[j] += p
    return out


def bin_counts(double[::1] x, double lo, double hi, int nbins):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef double width = (hi - lo) / nbins
    cdef long long idx
    out = np.zeros(nbins + 2, dtype=np.int64)
    cdef long long[::1] ov = out
    for i in range(n):
        idx = <long long> floor((x[i] - lo) / width)
        if idx < 0:
            ov[0] += 1
        elif idx >= nbins:
            ov[nbins + 1] += 1
        else:
            ov[idx + 1] += 1
    return out
