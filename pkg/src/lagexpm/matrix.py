"""Matrix engine: eigendecomposition with conditioning data, matrix
Laguerre coefficients, series evaluation, error certificates, and the
independent quadrature oracle for the true L2 error.

The eigen solver is LAPACK's dense nonsymmetric pipeline (balancing,
Hessenberg reduction, shifted QR, back-substituted eigenvectors) reached
through numpy; everything layered on top of it lives here.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels, optimize
from .errors import (
    AccuracyWarning,
    DomainError,
    NumericalError,
    ParameterError,
    ShapeError,
    StabilityError,
)
from .params import BasisParams, Spectrum, as_spectrum

M_CAP = 1024
GL_M_CAP = 512
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: Spectrum
    t_matrix: np.ndarray
    t_inverse: np.ndarray
    kappa: float
    diagonalizable: bool
    residual: float
    # set when the power iteration did not converge and kappa is the
    # Frobenius-product upper bound instead of the 2-norm condition number
    kappa_is_bound: bool = False


@dataclass(frozen=True)
class LaguerreSeries:
    params: BasisParams
    coeffs: np.ndarray  # (N+1, M, M) complex

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ShapeError("coeffs must be a stack of square matrices")
        if c.shape[0] != self.params.n_trunc + 1:
            raise ParameterError("coefficient count must equal n_trunc + 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self):
        return self.coeffs.shape[1]


@dataclass(frozen=True)
class ErrorBounds:
    phi: float
    psi: float
    kappa: float
    lower: float
    upper_phi: float | None
    upper_psi: float | None


def _check_matrix(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {a.shape}")
    m = a.shape[0]
    if m < 1 or m > M_CAP:
        raise ParameterError(f"matrix dimension must be in [1, {M_CAP}], got {m}")
    if not np.all(np.isfinite(a.real)) or (
        np.iscomplexobj(a) and not np.all(np.isfinite(a.imag))
    ):
        raise ParameterError("matrix contains non-finite entries")
    return a


def _rcond_from_lu(lu, anorm, complex_dtype):
    gecon = scipy.linalg.lapack.zgecon if complex_dtype else scipy.linalg.lapack.dgecon
    rcond, info = gecon(lu, anorm)
    if info != 0:
        raise NumericalError(f"gecon failed with info = {info}")
    return float(rcond)


def _sigma_max(mat, tol=1e-10, max_iter=5000, seed=0):
    """Largest singular value by power iteration on the Gram product."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(mat.shape[1])
    if np.iscomplexobj(mat):
        v = v + 1j * rng.standard_normal(mat.shape[1])
    v = v / np.linalg.norm(v)
    s_old = -1.0
    for _ in range(max_iter):
        w = mat.conj().T @ (mat @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, True
        v = w / nw
        s = math.sqrt(nw)
        if abs(s - s_old) <= tol * s:
            return s, True
        s_old = s
    return s_old, False


def eigendecompose(a, diag_residual_tol=1e-8) -> EigenSystem:
    """Spectrum, unit-column eigenvector matrix T, its inverse and kappa.

    The diagonalizable flag is cleared when T is numerically singular
    (rcond below 1e3*eps*M), when the worst column residual ||Av - lam v||
    exceeds diag_residual_tol (scaled by max(1, ||A||_F)), or when
    ||T T^-1 - I||_F exceeds 1e-8 sqrt(M).
    """
    a = _check_matrix(a)
    m = a.shape[0]
    try:
        lam, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue QR iteration failed: {exc}") from exc
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v, axis=0, keepdims=True)
    residual = float(np.max(np.linalg.norm(a @ v - v * lam, axis=0)))
    scale = max(1.0, float(np.linalg.norm(a, "fro")))

    diagonalizable = True
    try:
        lu, piv = scipy.linalg.lu_factor(v)
        rcond = _rcond_from_lu(lu, np.linalg.norm(v, 1), True)
        vinv = scipy.linalg.lu_solve((lu, piv), np.eye(m, dtype=complex))
        # one Newton step tightens mid-conditioned inverses
        vinv = vinv @ (2.0 * np.eye(m) - v @ vinv)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError, ValueError):
        rcond = 0.0
        vinv = np.linalg.pinv(v)
        diagonalizable = False

    if rcond < 1e3 * _EPS * m:
        diagonalizable = False
    if residual > diag_residual_tol * scale:
        diagonalizable = False
    eye_err = float(np.linalg.norm(v @ vinv - np.eye(m), "fro"))
    if eye_err > 1e-8 * math.sqrt(m):
        diagonalizable = False

    s1, ok1 = _sigma_max(v)
    s2, ok2 = _sigma_max(vinv, seed=1)
    if ok1 and ok2:
        kappa = max(1.0, s1 * s2)
        kappa_is_bound = False
    else:
        kappa = float(np.linalg.norm(v, "fro") * np.linalg.norm(vinv, "fro"))
        kappa_is_bound = True

    return EigenSystem(
        eigenvalues=Spectrum(lam),
        t_matrix=v,
        t_inverse=vinv,
        kappa=kappa,
        diagonalizable=diagonalizable,
        residual=residual,
        kappa_is_bound=kappa_is_bound,
    )


def is_stable(eig) -> bool:
    """True iff every eigenvalue has Re < 0 (strict).

    The spectral abscissa itself is available as
    Spectrum.spectral_abscissa on the eigenvalues.
    """
    spec = eig.eigenvalues if isinstance(eig, EigenSystem) else as_spectrum(eig)
    return spec.is_stable


def series_coeffs_alpha0(a, tau, n_trunc, assume_stable=False) -> LaguerreSeries:
    """S_0..S_N at alpha = 0 by the matrix recursion.

    One LU factorization of (2A - tau I) is reused throughout; the ratio
    matrix is built as (2A - tau I)^-1 (2A + tau I), which equals the
    (2A + tau I)(2A - tau I)^-1 form because the two factors commute.
    """
    a = _check_matrix(a)
    params = BasisParams(tau=tau, alpha=0.0, n_trunc=n_trunc)
    if not assume_stable:
        try:
            lam = np.linalg.eigvals(a)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigenvalue check failed: {exc}") from exc
        Spectrum(lam).require_stable()
    m = a.shape[0]
    cplx = np.iscomplexobj(a)
    work = np.asarray(a, dtype=complex if cplx else float)
    tau = params.tau
    b = 2.0 * work - tau * np.eye(m, dtype=work.dtype)
    lu_piv = scipy.linalg.lu_factor(b)
    rcond = _rcond_from_lu(lu_piv[0], np.linalg.norm(b, 1), cplx)
    if rcond < 1e3 * _EPS * m:
        raise ParameterError(
            f"(2A - tau I) is numerically singular at tau = {tau:g} "
            f"(rcond = {rcond:.3e})"
        )
    s = -2.0 * math.sqrt(tau) * scipy.linalg.lu_solve(lu_piv, np.eye(m, dtype=work.dtype))
    ratio = scipy.linalg.lu_solve(lu_piv, 2.0 * work + tau * np.eye(m, dtype=work.dtype))
    coeffs = np.empty((n_trunc + 1, m, m), dtype=complex)
    coeffs[0] = s
    for n in range(n_trunc):
        s = ratio @ s
        coeffs[n + 1] = s
    return LaguerreSeries(params=params, coeffs=coeffs)


def series_coeffs_general(eig: EigenSystem, params: BasisParams) -> LaguerreSeries:
    """S_n = T diag(s_{n,lambda_k}) T^-1 via functional calculus."""
    eig.eigenvalues.require_stable()
    if not eig.diagonalizable:
        raise DomainError(
            "matrix is not numerically diagonalizable (Jordan structure); "
            "functional calculus unsupported, use the alpha=0 recursion"
        )
    lam = eig.eigenvalues.eigenvalues
    sre, sim = _kernels.s_table(
        params.n_trunc,
        params.tau,
        params.alpha,
        np.ascontiguousarray(lam.real),
        np.ascontiguousarray(lam.imag),
    )
    m = lam.size
    coeffs = np.empty((params.n_trunc + 1, m, m), dtype=complex)
    for n in range(params.n_trunc + 1):
        d = sre[:, n] + 1j * sim[:, n]
        coeffs[n] = (eig.t_matrix * d) @ eig.t_inverse
    return LaguerreSeries(params=params, coeffs=coeffs)


def eval_series(series: LaguerreSeries, t) -> np.ndarray:
    """Evaluate the truncated series H_N(t) = sum_n S_n l_n(t)."""
    t = float(t)
    if t < 0.0 or not math.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    p = series.params
    if t == 0.0:
        if p.alpha < 0.0:
            raise DomainError("series is singular at t = 0 for alpha < 0")
        if p.alpha > 0.0:
            return np.zeros((series.dim, series.dim), dtype=complex)
        return math.sqrt(p.tau) * series.coeffs.sum(axis=0)
    lvals = _kernels.laguerre_fn_table(
        p.n_trunc, p.tau, p.alpha, np.asarray([t], dtype=float)
    )[:, 0]
    return np.tensordot(lvals, series.coeffs, axes=(0, 0))


def error_report(eig: EigenSystem, params: BasisParams) -> ErrorBounds:
    """Certified L2 error bounds: sqrt(psi) <= error <= kappa sqrt(phi).

    The lower bound needs no diagonalizability; the upper bounds do, and
    come back None when the flag is cleared.
    """
    spec = eig.eigenvalues.require_stable()
    ph = optimize.phi(params.n_trunc, params.tau, params.alpha, spec)
    ps = optimize.psi(params.n_trunc, params.tau, params.alpha, spec)
    m = len(spec)
    lower = math.sqrt(ps)
    if eig.diagonalizable:
        upper_phi = eig.kappa * math.sqrt(ph)
        upper_psi = eig.kappa * math.sqrt(m * ps)
    else:
        upper_phi = None
        upper_psi = None
    return ErrorBounds(
        phi=ph, psi=ps, kappa=eig.kappa, lower=lower,
        upper_phi=upper_phi, upper_psi=upper_psi,
    )


def gauss_laguerre_rule(m, alpha=0.0):
    """Nodes and weights for weight t^alpha e^-t, Golub-Welsch style."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise ParameterError(f"node count must be a positive integer, got {m!r}")
    if m > GL_M_CAP:
        raise ParameterError(f"node count capped at {GL_M_CAP}, got {m}")
    alpha = float(alpha)
    if alpha <= -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    k = np.arange(m, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    try:
        x, vects = scipy.linalg.eigh_tridiagonal(diag, off)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
    w = math.exp(math.lgamma(alpha + 1.0)) * vects[0, :] ** 2
    return x, w


def _scaled_gauss_laguerre(m, alpha=0.0):
    # weights times e^x, assembled in log space so large-m rules keep
    # their far nodes instead of underflowing
    k = np.arange(m, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x, vects = scipy.linalg.eigh_tridiagonal(diag, off)
    v0 = np.abs(vects[0, :])
    w = np.zeros(m)
    pos = v0 > 0.0
    w[pos] = np.exp(math.lgamma(alpha + 1.0) + 2.0 * np.log(v0[pos]) + x[pos])
    return x, w


def direct_error_oracle(a, series: LaguerreSeries, nodes=256) -> float:
    """Independent quadrature of the true L2 error sqrt(int ||e^At - H_N||_F^2).

    Gauss-Laguerre in the substituted variable x = sigma t with
    sigma = min(tau, -max Re lambda); e^{At} at the nodes comes from the
    scaling-and-squaring oracle. The node count is doubled once and a
    relative change above 1e-6 raises an accuracy warning on the result.
    """
    a = _check_matrix(a)
    if a.shape[0] != series.dim:
        raise ShapeError("matrix and series dimensions differ")
    lam = np.linalg.eigvals(a)
    Spectrum(lam).require_stable()
    sigma = min(series.params.tau, -float(np.max(lam.real)))

    def quad(m):
        x, w = _scaled_gauss_laguerre(m)
        total = 0.0
        for xi, wi in zip(x, w):
            if wi == 0.0:
                continue
            t = xi / sigma
            e = scipy.linalg.expm(a * t) - eval_series(series, t)
            total += wi * float(np.sum(e.real**2 + e.imag**2))
        return total / sigma

    m1 = min(int(nodes), GL_M_CAP)
    if m1 < 1:
        raise ParameterError(f"nodes must be >= 1, got {nodes}")
    v1 = quad(m1)
    m2 = min(2 * m1, GL_M_CAP)
    v2 = quad(m2) if m2 > m1 else v1
    r1, r2 = math.sqrt(max(v1, 0.0)), math.sqrt(max(v2, 0.0))
    if abs(r2 - r1) > 1e-6 * max(r2, 5e-324):
        warnings.warn(
            f"quadrature not converged: {r1:.6e} -> {r2:.6e} "
            f"at {m1} -> {m2} nodes",
            AccuracyWarning,
            stacklevel=2,
        )
    return r2
