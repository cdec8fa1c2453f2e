"""Shared high-precision oracles and random-instance helpers.

The mpmath references evaluate the same closed forms as the library but
through mp.gamma/mp.hyp2f1 at 40+ digits, so none of the library's
incremental-ratio code paths are exercised by the oracle itself.
"""

import mpmath as mp
import numpy as np


def rel_err(got, want):
    scale = max(abs(want), 5e-324)
    return abs(got - want) / scale


def _mp_s(n, tau, alpha, lam):
    # prefactor * g_n * 2F1(-n, a/2+1; a+1; tau/(tau/2-lam))
    w = tau / 2 - lam
    pre = mp.gamma(alpha / 2 + 1) * tau ** ((alpha + 1) / 2) * w ** -(alpha / 2 + 1)
    g = mp.sqrt(mp.gamma(n + alpha + 1) / mp.gamma(n + 1)) / mp.gamma(alpha + 1)
    return pre * g * mp.hyp2f1(-n, alpha / 2 + 1, alpha + 1, tau / w)


def mp_s_coeff(n, tau, alpha, lam, dps=40):
    """Reference s_{n,tau,alpha,lambda} as a double-precision complex."""
    with mp.workdps(dps):
        return complex(_mp_s(int(n), mp.mpf(tau), mp.mpf(alpha), mp.mpc(lam)))


def mp_zeta(n_trunc, tau, alpha, lam, dps=50):
    """Reference zeta via the Parseval complement 1/(-2 Re l) - sum |s_n|^2."""
    with mp.workdps(dps):
        tau, alpha, lam = mp.mpf(tau), mp.mpf(alpha), mp.mpc(lam)
        head = mp.fsum(
            abs(_mp_s(n, tau, alpha, lam)) ** 2 for n in range(n_trunc + 1)
        )
        return float(1 / (-2 * lam.real) - head)


def mp_laguerre_fn(n, tau, alpha, t, dps=40):
    """Reference basis function l_{n,tau}^alpha(t)."""
    with mp.workdps(dps):
        tau, alpha, t = mp.mpf(tau), mp.mpf(alpha), mp.mpf(t)
        g = mp.sqrt(mp.gamma(n + 1) / mp.gamma(n + alpha + 1))
        return float(
            g
            * tau ** ((alpha + 1) / 2)
            * t ** (alpha / 2)
            * mp.exp(-tau * t / 2)
            * mp.laguerre(n, alpha, tau * t)
        )


def rand_stable_spectrum(rng, m, re_lo=0.3, re_hi=4.0, im_sigma=1.5):
    return -rng.uniform(re_lo, re_hi, m) + 1j * rng.normal(0.0, im_sigma, m)


def rand_diagonalizable(rng, m):
    """Random stable matrix with moderately conditioned eigenvectors."""
    lam = rand_stable_spectrum(rng, m)
    t = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return t @ np.diag(lam) @ np.linalg.inv(t), lam
