"""Scalar core: Laguerre functions, expansion coefficients of e^{lambda t},
the squared-tail error zeta and its tau-derivative.

Everything here is a pure function. The heavy per-eigenvalue loops live in
lagexpm._kernels; this module owns validation, the scalar convenience API
and the exact closed forms.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AccuracyError, DomainError, ParameterError, StabilityError
from .params import N_MAX, BasisParams

# fallback tail summation gives up after this many extra terms
TAIL_CAP_BASE = 200


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ParameterError(f"n must be an integer, got {n!r}")
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    if n > N_MAX:
        raise ParameterError(f"n {n} exceeds N_MAX = {N_MAX}")
    return int(n)


def _check_stable_lambda(lam):
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ParameterError(f"lambda must be finite, got {lam}")
    if lam.real >= 0.0:
        raise StabilityError(
            f"Re lambda = {lam.real:g} >= 0; matrix/eigenvalue not stable",
            abscissa=lam.real,
        )
    return lam


def eval_laguerre_poly(n, alpha: float, t: float) -> float:
    """Generalized Laguerre polynomial L_n^alpha(t), three-term recurrence."""
    n = _check_n(n)
    alpha = float(alpha)
    if alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    if n == 0:
        return 1.0
    pm, p = 1.0, 1.0 + alpha - t
    for k in range(1, n):
        pm, p = p, ((2.0 * k + 1.0 + alpha - t) * p - (k + alpha) * pm) / (k + 1.0)
    return p


def eval_laguerre_fn(n, params: BasisParams, t: float) -> float:
    """Laguerre basis function l_{n,tau}^alpha(t).

    Orthonormal on L2[0, inf). At t = 0 the value is tau^((alpha+1)/2) g_n
    for alpha = 0, zero for alpha > 0, and singular for alpha < 0.
    """
    n = _check_n(n)
    t = float(t)
    if t < 0.0 or not math.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    tau, alpha = params.tau, params.alpha
    if t == 0.0:
        if alpha < 0.0:
            raise DomainError("l_n is singular at t = 0 for alpha < 0")
        if alpha > 0.0:
            return 0.0
        # p_n(0) = 1 at alpha = 0
        return math.sqrt(tau)
    table = _kernels.laguerre_fn_table(n, tau, alpha, np.asarray([t], dtype=float))
    return float(table[n, 0])


def hyp2f1_terminating(n, a: float, b: float, z) -> complex:
    """2F1(-n, a; b; z) as the exact (n+1)-term sum.

    Term ratios are updated incrementally; a zero Pochhammer denominator
    reached before the series terminates is a pole.
    """
    n = _check_n(n)
    a = float(a)
    b = float(b)
    z = complex(z)
    acc = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(n):
        den = (b + k) * (k + 1.0)
        if b + k == 0.0:
            raise DomainError(f"2F1 Pochhammer pole: b + {k} = 0 within {n} terms")
        term = term * ((k - n) * (a + k)) / den * z
        acc += term
    return acc


def _s_prefactor(tau, alpha, lam):
    # gamma(a/2+1) tau^((a+1)/2) (tau/2-lam)^-(a/2+1), principal branch
    w = 0.5 * tau - lam
    assert w.real > 0.0  # guaranteed by tau > 0, Re lam < 0
    p = 0.5 * alpha + 1.0
    pre = math.gamma(p) * tau ** (0.5 * (alpha + 1.0)) * cmath.exp(-p * cmath.log(w))
    return pre, tau / w


def _g_norm(n, alpha):
    # sqrt(gamma(n+alpha+1)/n!) / gamma(alpha+1) via log-gamma
    return math.exp(
        0.5 * (math.lgamma(n + alpha + 1.0) - math.lgamma(n + 1.0))
        - math.lgamma(alpha + 1.0)
    )


def s_coeff(n, params: BasisParams, lam) -> complex:
    """Laguerre coefficient s_{n,tau,alpha,lambda} of t -> e^{lambda t}."""
    n = _check_n(n)
    lam = _check_stable_lambda(lam)
    tau, alpha = params.tau, params.alpha
    pre, z = _s_prefactor(tau, alpha, lam)
    fre, fim = _kernels.hyp_s_scalar(n, alpha, z.real, z.imag, n >= 1)
    return pre * _g_norm(n, alpha) * complex(fre, fim)


@dataclass(frozen=True)
class ScalarCoeffSeq:
    params: BasisParams
    lam: complex
    values: np.ndarray  # s_0..s_N, complex


def s_coeff_seq_alpha0(params: BasisParams, lam) -> ScalarCoeffSeq:
    """s_0..s_N at alpha = 0 by the exact geometric recursion."""
    if params.alpha != 0.0:
        raise ParameterError("recursion requires alpha = 0")
    lam = _check_stable_lambda(lam)
    tau = params.tau
    n_trunc = params.n_trunc
    s0 = -2.0 * math.sqrt(tau) / (2.0 * lam - tau)
    r = (2.0 * lam + tau) / (2.0 * lam - tau)
    values = np.empty(n_trunc + 1, dtype=complex)
    s = s0
    values[0] = s
    for n in range(n_trunc):
        s = r * s
        values[n + 1] = s
    values.flags.writeable = False
    return ScalarCoeffSeq(params=params, lam=lam, values=values)


def q_coeff(n, j, params: BasisParams, lam) -> complex:
    """Integral of t^j e^{lambda t} l_{n,tau}^alpha(t) over [0, inf)."""
    n = _check_n(n)
    if not isinstance(j, (int, np.integer)) or isinstance(j, bool) or j < 0:
        raise ParameterError(f"j must be an integer >= 0, got {j!r}")
    if j > 10:
        raise ParameterError(f"j capped at 10, got {j}")
    if j == 0:
        return s_coeff(n, params, lam)
    lam = _check_stable_lambda(lam)
    tau, alpha = params.tau, params.alpha
    w = 0.5 * tau - lam
    aj = 0.5 * alpha + j + 1.0
    pre = math.gamma(aj) * tau ** (0.5 * (alpha + 1.0)) * cmath.exp(-aj * cmath.log(w))
    f = _hyp_bernstein_general(n, 0.5 * alpha - j, alpha + 1.0, tau / w)
    return pre * _g_norm(n, alpha) * f


def _hyp_bernstein_general(n, p, b, z):
    # 2F1(-n, b-p; b; z) = sum_k C(n,k) (p)_k/(b)_k z^k (1-z)^(n-k)
    if n == 0:
        return 1.0 + 0.0j
    u = 1.0 - z
    if u == 0.0:
        acc = 1.0 + 0.0j
        for k in range(n):
            acc *= (p + k) / (b + k)
        return acc
    kp = round(-p)
    if p <= 0.0 and p == -float(kp):
        # Pochhammer (p)_k vanishes past k = -p: short direct sum
        t = u**n
        acc = t
        for k in range(min(n, kp)):
            t = t * ((n - k) * (p + k)) / ((k + 1.0) * (b + k)) * (z / u)
            acc += t
        return acc
    if abs(u) >= abs(z):
        t = u**n
        acc = t
        for k in range(n):
            t = t * ((n - k) * (p + k)) / ((k + 1.0) * (b + k)) * (z / u)
            acc += t
        return acc
    r = 1.0
    for k in range(n):
        r *= (p + k) / (b + k)
    t = z**n * r
    acc = t
    for k in range(n, 0, -1):
        t = t * (k * (b + k - 1.0)) / ((n - k + 1.0) * (p + k - 1.0)) * (u / z)
        acc += t
    return acc


def d_coeff(n, params: BasisParams) -> float:
    """Recurrence weight d_n; d_0 = 0, d_n = sqrt(n(n+alpha))/(2 tau).

    n = N+1 is a legitimate argument (the derivative formula needs it), so
    unlike the other operations this one is not capped at N_MAX.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise ParameterError(f"n must be an integer >= 0, got {n!r}")
    if n == 0:
        return 0.0
    return math.sqrt(n * (n + params.alpha)) / (2.0 * params.tau)


def zeta(params: BasisParams, lam) -> float:
    """Squared L2 error of the N-truncated expansion of e^{lambda t}.

    alpha = 0 uses the exact closed form; general alpha the Parseval
    complement with compensated summation, falling back to direct tail
    summation when the complement loses more than half its digits. A
    complement below -1e-14 * |h|^2 cannot come from rounding and raises.
    """
    lam = _check_stable_lambda(lam)
    re = np.asarray([lam.real])
    im = np.asarray([lam.imag])
    if params.alpha == 0.0:
        return float(_kernels.zeta_alpha0(params.n_trunc, params.tau, re, im)[0])
    cap = 4 * params.n_trunc + TAIL_CAP_BASE
    val, status = _kernels.zeta_general(
        params.n_trunc, params.tau, params.alpha, re, im, cap
    )
    return float(_raise_zeta_status(val, status, [lam])[0])


def _raise_zeta_status(val, status, lams):
    if np.any(status == 2):
        k = int(np.nonzero(status == 2)[0][0])
        raise AccuracyError(
            f"Parseval complement {val[k]:.3e} below rounding guard at "
            f"eigenvalue index {k} ({lams[k]}): likely logic bug",
            partial=float(val[k]),
        )
    if np.any(status == 3):
        k = int(np.nonzero(status == 3)[0][0])
        raise AccuracyError(
            f"tail summation did not converge at eigenvalue index {k} "
            f"({lams[k]})",
            partial=float(val[k]),
        )
    return val


def dzeta_dtau(params: BasisParams, lam) -> float:
    """d zeta / d tau = -2 d_{N+1} Re(s_{N+1,lambda} conj(s_{N,lambda}))."""
    lam = _check_stable_lambda(lam)
    re = np.asarray([lam.real])
    im = np.asarray([lam.imag])
    n_trunc, tau, alpha = params.n_trunc, params.tau, params.alpha
    if alpha == 0.0:
        return float(_kernels.dzeta_alpha0(n_trunc, tau, re, im)[0])
    sre, sim = _kernels.s_table(n_trunc + 1, tau, alpha, re, im)
    d = math.sqrt((n_trunc + 1.0) * (n_trunc + 1.0 + alpha)) / (2.0 * tau)
    return -2.0 * d * float(
        sre[0, n_trunc + 1] * sre[0, n_trunc] + sim[0, n_trunc + 1] * sim[0, n_trunc]
    )
