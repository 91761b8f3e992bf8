"""Pure-Python Metropolis-Hastings chain stepper.

Operation-for-operation mirror of the compiled kernel in ``_mh.pyx``: the
same expression trees, evaluation order, and libm calls, so that given the
same pre-drawn random arrays both backends emit bit-identical chains.  Keep
the two files in sync when changing either.
"""

from __future__ import annotations

import math

_NEG = -1.0e300


def mh_chain(u0, d0, env, csl, gamma, inv_sigma,
             u_min, u_max, d_kind, d_center, d_sigma, d_lo, d_hi,
             zs, log_us, n_burn, adapt_every, target_accept, adapt_gain,
             scale_u, scale_d, out_u, out_d, out_lp):
    n_steps = log_us.shape[0]
    n_points = gamma.shape[0]
    env_l = env.tolist()
    csl_l = csl.tolist()
    gamma_l = gamma.tolist()
    isig_l = inv_sigma.tolist()
    zs_l = zs.tolist()
    log_us_l = log_us.tolist()

    scale_u_lo = 1e-3 * scale_u
    scale_u_hi = 1e3 * scale_u
    scale_d_lo = 1e-3 * scale_d
    scale_d_hi = 1e3 * scale_d

    def logprior(u, d):
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

    def loglik(u, d):
        lam = 10.0 ** u
        s = 0.0
        for i in range(n_points):
            r = (gamma_l[i] - d * env_l[i] - lam * csl_l[i]) * isig_l[i]
            s -= 0.5 * r * r
        return s

    u = u0
    d = d0
    post = logprior(u, d) + loglik(u, d)

    win_acc = 0
    kept = 0
    acc_post = 0
    for t in range(n_steps):
        z_pair = zs_l[t]
        u_prop = u + scale_u * z_pair[0]
        d_prop = d + scale_d * z_pair[1]
        accepted = 0
        lp = logprior(u_prop, d_prop)
        if lp > 0.5 * _NEG:
            cand = lp + loglik(u_prop, d_prop)
            if log_us_l[t] < cand - post:
                u = u_prop
                d = d_prop
                post = cand
                accepted = 1
        if t < n_burn:
            win_acc += accepted
            if (t + 1) % adapt_every == 0:
                rate = win_acc / float(adapt_every)
                factor = math.exp(adapt_gain * (rate - target_accept))
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


def backend_name() -> str:
    return "python"
