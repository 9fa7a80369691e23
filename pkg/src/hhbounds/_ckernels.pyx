# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``; same signatures and semantics."""

import numpy as np

from libc.math cimport fabs, floor, pow, sqrt


cdef inline double _dz(double x) nogil:
    return fabs(x - floor(x + 0.5))


cdef inline double _ipow(double d, double p, int mode) nogil:
    # mode picks a shortcut for the common exponents; libm pow is slow
    if mode == 1:
        return d
    if mode == 2:
        return d * d
    if mode == 3:
        return sqrt(d)
    if mode == 4:
        return 1.0
    return pow(d, p)


def dyadic_sum(tau, double p, int n_terms):
    cdef const double[::1] t = np.ascontiguousarray(tau, dtype=np.float64).ravel()
    shape = np.shape(tau)
    out_arr = np.zeros(t.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef int n
    cdef double x, scale, acc
    cdef int mode = 1 if p == 1.0 else 2 if p == 2.0 else 3 if p == 0.5 else 4 if p == 0.0 else 0
    with nogil:
        for i in range(t.shape[0]):
            x = t[i]
            scale = 1.0
            acc = 0.0
            for n in range(n_terms):
                acc += scale * _ipow(_dz(x), p, mode)
                x *= 2.0
                scale *= 0.5
            out[i] = acc
    return out_arr.reshape(shape)


def phi_blocks(sigma, int k_lo, int k_hi):
    cdef const double[::1] s = np.ascontiguousarray(sigma, dtype=np.float64).ravel()
    shape = np.shape(sigma)
    out_arr = np.zeros(s.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef long long m, m_lo, m_hi
    cdef int k
    cdef double n, sg, pos, acc, md
    with nogil:
        for i in range(s.shape[0]):
            sg = s[i]
            acc = 0.0
            for k in range(k_lo, k_hi):
                n = pow(2.0, k + 1)
                m_lo = (<long long>1) << k
                m_hi = (<long long>1) << (k + 1)
                for m in range(m_lo, m_hi):
                    md = <double>m
                    pos = 1.0 - (2.0 * md + 1.0) / n * sg
                    if pos <= 0.0:
                        continue
                    acc += pos * ((sg * (2.0 * md + 3.0) + n) / (n * (md + 1.0) * (md + 1.0))
                                  + (sg * (2.0 * md - 1.0) + n) / (n * md * md))
            out[i] = acc
    return out_arr.reshape(shape)


def clipped_pair_sum(a, o0v, o1v, fv, b, o0w, o1w, fw, double o0u, double o1u, double fu):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] p0 = np.ascontiguousarray(o0v, dtype=np.float64)
    cdef const double[::1] p1 = np.ascontiguousarray(o1v, dtype=np.float64)
    cdef const double[::1] pf = np.ascontiguousarray(fv, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double[::1] q0 = np.ascontiguousarray(o0w, dtype=np.float64)
    cdef const double[::1] q1 = np.ascontiguousarray(o1w, dtype=np.float64)
    cdef const double[::1] qf = np.ascontiguousarray(fw, dtype=np.float64)
    cdef Py_ssize_t i, j, nv = av.shape[0], nw = bv.shape[0]
    cdef double num = 0.0, den = 0.0, rnum, rden, dvw, duw, dvu, r
    with nogil:
        for i in range(nv):
            dvu = p0[i] * o1u - p1[i] * o0u
            rnum = 0.0
            rden = 0.0
            for j in range(nw):
                dvw = p0[i] * q1[j] - p1[i] * q0[j]
                duw = o0u * q1[j] - o1u * q0[j]
                r = dvw * fu - duw * pf[i] - dvu * qf[j]
                if r > 0.0:
                    rnum += bv[j] * r
                rden += bv[j] * dvw
            num += av[i] * rnum
            den += av[i] * rden
    return float(num), float(den)
