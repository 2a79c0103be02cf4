# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: mean path loss over point sets and candidate scans."""

from libc.math cimport asin, exp, pow, sqrt

import numpy as np

cdef double RAD2DEG = 57.29577951308232087680


cdef inline double _loss(double dx, double dy, double h2, double h,
                         double c, double d, double eta, double alpha) nogil:
    cdef double d2 = dx * dx + dy * dy + h2
    cdef double dist = sqrt(d2)
    cdef double theta = RAD2DEG * asin(h / dist)
    cdef double p = 1.0 / (1.0 + c * exp(-d * (theta - c)))
    cdef double amp
    if alpha == 2.0:
        amp = d2
    else:
        amp = pow(dist, alpha)
    return (p + eta * (1.0 - p)) * amp


def mean_loss_map(double[::1] px, double[::1] py, double ux, double uy,
                  double h, double c, double d, double eta, double alpha):
    cdef Py_ssize_t n = px.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double h2 = h * h
    with nogil:
        for i in range(n):
            o[i] = _loss(px[i] - ux, py[i] - uy, h2, h, c, d, eta, alpha)
    return out


def weighted_loss_sum(double[::1] px, double[::1] py, double[::1] w,
                      double ux, double uy, double h,
                      double c, double d, double eta, double alpha):
    cdef Py_ssize_t n = px.shape[0], i
    cdef double h2 = h * h
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += w[i] * _loss(px[i] - ux, py[i] - uy, h2, h, c, d, eta, alpha)
    return acc


def candidate_loss_sums(double[::1] px, double[::1] py, double[::1] w,
                        double[::1] cx, double[::1] cy, double h,
                        double c, double d, double eta, double alpha):
    cdef Py_ssize_t n = px.shape[0], m = cx.shape[0], i, k
    out = np.empty(m)
    cdef double[::1] o = out
    cdef double h2 = h * h
    cdef double acc, ux, uy
    with nogil:
        for k in range(m):
            ux = cx[k]
            uy = cy[k]
            acc = 0.0
            for i in range(n):
                acc += w[i] * _loss(px[i] - ux, py[i] - uy, h2, h, c, d, eta, alpha)
            o[k] = acc
    return out
