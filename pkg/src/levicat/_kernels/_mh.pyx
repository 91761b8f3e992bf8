# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Metropolis-Hastings chain stepper.

Mirror of ``_mh_py.py`` - identical expression trees and libm calls so that
both backends produce bit-identical chains from the same random arrays.
Compiled with -ffp-contract=off to forbid fused multiply-adds that would
perturb the roundings relative to the Python mirror.
"""

from libc.math cimport exp, pow

cdef double _NEG = -1.0e300


cdef inline double _logprior(double u, double d, double u_min, double u_max,
                             int d_kind, double d_center, double d_sigma,
                             double d_lo, double d_hi) nogil:
    cdef double z
    if u < u_min or u > u_max:
        return _NEG
    if d_kind == 0:
        if d < 0.0:
            return _NEG
        z = (d - d_center) / d_sigma
        return -0.5 * z * z
    if d < d_lo or d > d_hi:
        return _NEG
    return 0.0


cdef inline double _loglik(double u, double d, double[::1] env, double[::1] csl,
                           double[::1] gamma, double[::1] inv_sigma,
                           Py_ssize_t n_points) nogil:
    cdef double lam = pow(10.0, u)
    cdef double s = 0.0
    cdef double r
    cdef Py_ssize_t i
    for i in range(n_points):
        r = (gamma[i] - d * env[i] - lam * csl[i]) * inv_sigma[i]
        s -= 0.5 * r * r
    return s


def mh_chain(double u0, double d0,
             double[::1] env, double[::1] csl, double[::1] gamma,
             double[::1] inv_sigma,
             double u_min, double u_max, int d_kind, double d_center,
             double d_sigma, double d_lo, double d_hi,
             double[:, ::1] zs, double[::1] log_us,
             Py_ssize_t n_burn, Py_ssize_t adapt_every, double target_accept,
             double adapt_gain, double scale_u, double scale_d,
             double[::1] out_u, double[::1] out_d, double[::1] out_lp):
    cdef Py_ssize_t n_steps = log_us.shape[0]
    cdef Py_ssize_t n_points = gamma.shape[0]

    cdef double scale_u_lo = 1e-3 * scale_u
    cdef double scale_u_hi = 1e3 * scale_u
    cdef double scale_d_lo = 1e-3 * scale_d
    cdef double scale_d_hi = 1e3 * scale_d

    cdef double u = u0
    cdef double d = d0
    cdef double post = (_logprior(u, d, u_min, u_max, d_kind, d_center,
                                  d_sigma, d_lo, d_hi)
                        + _loglik(u, d, env, csl, gamma, inv_sigma, n_points))

    cdef Py_ssize_t win_acc = 0
    cdef Py_ssize_t kept = 0
    cdef Py_ssize_t acc_post = 0
    cdef Py_ssize_t t
    cdef int accepted
    cdef double u_prop, d_prop, lp, cand, rate, factor

    with nogil:
        for t in range(n_steps):
            u_prop = u + scale_u * zs[t, 0]
            d_prop = d + scale_d * zs[t, 1]
            accepted = 0
            lp = _logprior(u_prop, d_prop, u_min, u_max, d_kind, d_center,
                           d_sigma, d_lo, d_hi)
            if lp > 0.5 * _NEG:
                cand = lp + _loglik(u_prop, d_prop, env, csl, gamma,
                                    inv_sigma, n_points)
                if log_us[t] < cand - post:
                    u = u_prop
                    d = d_prop
                    post = cand
                    accepted = 1
            if t < n_burn:
                win_acc += accepted
                if (t + 1) % adapt_every == 0:
                    rate = win_acc / (<double> adapt_every)
                    factor = exp(adapt_gain * (rate - target_accept))
                    scale_u *= factor
                    scale_d *= factor
                    if scale_u < scale_u_lo:
                        scale_u = scale_u_lo
                    elif scale_u > scale_u_hi:
                        scale_u = scale_u_hi
                    if scale_d < scale_d_lo:
                        scale_d = scale_d_lo
                    elif scale_d > scale_d_hi:
                        scale_d = scale_d_hi
                    win_acc = 0
            else:
                out_u[kept] = u
                out_d[kept] = d
                out_lp[kept] = post
                kept += 1
                acc_post += accepted
    return acc_post, scale_u, scale_d


def backend_name():
    return "compiled"
