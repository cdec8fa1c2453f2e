"""Self-contained oracle and property battery behind `lagexpm validate`.

Everything here cross-checks one code path against an independent one
(quadrature identities, closed forms, round-trips); nothing needs
packages beyond the runtime dependencies, so the command works in a
bare install without the test extras.
"""

import math

import numpy as np

from . import io, optimize, scalar
from .generators import LadderConfig, SpectrumSampleConfig, build_ladder_matrix, sample_spectrum
from .matrix import (
    LaguerreSeries,
    _scaled_gauss_laguerre,
    direct_error_oracle,
    eigendecompose,
    error_report,
    gauss_laguerre_rule,
    series_coeffs_alpha0,
)
from .params import BasisParams


def _rel(got, want):
    scale = max(abs(want), 5e-324)
    return abs(got - want) / scale


def _check_orthonormality(alphas):
    worst = 0.0
    n_top = 8
    for alpha in alphas:
        for tau in (1.0, 2.5):
            x, ws = _scaled_gauss_laguerre(256, alpha)
            t = x / tau
            params = BasisParams(tau=tau, alpha=alpha, n_trunc=n_top)
            table = np.empty((n_top + 1, t.size))
            for i, ti in enumerate(t):
                for n in range(n_top + 1):
                    table[n, i] = scalar.eval_laguerre_fn(n, params, ti)
            # the e^x in ws cancels the weight carried by the functions
            wfree = ws * x ** (-alpha) / tau
            gram = (table * wfree) @ table.T
            worst = max(worst, float(np.max(np.abs(gram - np.eye(n_top + 1)))))
    ok = worst <= 1e-8
    return ok, f"max |Gram - I| = {worst:.3e}"


def _check_s_quadrature(alphas):
    # inner product by quadrature with the t^(alpha/2) origin behavior
    # folded into the rule's weight, so convergence stays spectral
    worst = 0.0
    lam = complex(-2.0, 1.5)
    tau = 3.0
    sigma = tau / 2.0 - lam.real
    for alpha in alphas:
        x, w = gauss_laguerre_rule(384, alpha / 2.0)
        t = x / sigma
        params = BasisParams(tau=tau, alpha=alpha, n_trunc=10)
        osc = np.exp(1j * lam.imag * t)
        scale = tau ** (0.5 * (alpha + 1.0)) * sigma ** -(0.5 * alpha + 1.0)
        for n in range(0, 11, 2):
            cn = math.exp(0.5 * (math.lgamma(n + 1.0) - math.lgamma(n + alpha + 1.0)))
            poly = np.array(
                [scalar.eval_laguerre_poly(n, alpha, ti) for ti in tau * t]
            )
            quad = scale * cn * np.sum(w * osc * poly)
            got = scalar.s_coeff(n, params, lam)
            worst = max(worst, _rel(got, quad))
    ok = worst <= 1e-9
    return ok, f"worst rel vs quadrature = {worst:.3e}"


def _check_alpha0_seq():
    worst = 0.0
    for lam in (complex(-1.0, 0.0), complex(-0.3, 4.0)):
        for tau in (0.7, 6.0):
            params = BasisParams(tau=tau, alpha=0.0, n_trunc=20)
            seq = scalar.s_coeff_seq_alpha0(params, lam)
            for n in range(21):
                got = scalar.s_coeff(n, params, lam)
                worst = max(worst, _rel(got, seq.values[n]))
    ok = worst <= 1e-11
    return ok, f"worst rel seq vs direct = {worst:.3e}"


def _check_zeta_consistency(cases):
    # route agreement: the alpha = 0 closed form against the general
    # complement path entered through an alpha too small to matter; N kept
    # low enough that zeta stays far above the complement's eps*h2 noise
    worst = 0.0
    for lam, tau, n in ((complex(-2.0, 1.0), 3.0, 4), (complex(-0.7, -3.0), 5.0, 25)):
        z0 = scalar.zeta(BasisParams(tau=tau, alpha=0.0, n_trunc=n), lam)
        z1 = scalar.zeta(BasisParams(tau=tau, alpha=1e-13, n_trunc=n), lam)
        worst = max(worst, _rel(z1, z0))
    # telescoping: zeta(N) - zeta(N+5) must equal the five dropped terms
    for lam, tau, alpha, n in cases:
        pa = BasisParams(tau=tau, alpha=alpha, n_trunc=n)
        pb = BasisParams(tau=tau, alpha=alpha, n_trunc=n + 5)
        drop = sum(
            abs(scalar.s_coeff(k, pa, lam)) ** 2 for k in range(n + 1, n + 6)
        )
        worst = max(worst, _rel(scalar.zeta(pa, lam) - scalar.zeta(pb, lam), drop))
    ok = worst <= 1e-9
    return ok, f"worst rel route/telescope defect = {worst:.3e}"


def _check_dzeta_fd(cases):
    worst = 0.0
    for lam, tau, alpha, n in cases:
        h = 1e-6 * tau
        fd = (
            scalar.zeta(BasisParams(tau=tau + h, alpha=alpha, n_trunc=n), lam)
            - scalar.zeta(BasisParams(tau=tau - h, alpha=alpha, n_trunc=n), lam)
        ) / (2.0 * h)
        got = scalar.dzeta_dtau(BasisParams(tau=tau, alpha=alpha, n_trunc=n), lam)
        worst = max(worst, _rel(got, fd))
    ok = worst <= 1e-4
    return ok, f"worst rel vs central difference = {worst:.3e}"


def _check_point_spectrum():
    res = optimize.find_tau0(5, np.array([-3.0 + 0.0j]))
    ok = res.tau_opt == 6.0 and res.phi_min == 0.0 and res.converged
    return ok, f"tau0 = {res.tau_opt!r}, phi = {res.phi_min!r}"


def _check_bounds_sandwich():
    rng = np.random.default_rng(42)
    a = rng.standard_normal((4, 4))
    a = a - (np.max(np.linalg.eigvals(a).real) + 1.0) * np.eye(4)
    eig = eigendecompose(a)
    res = optimize.find_tau0(12, eig.eigenvalues)
    params = BasisParams(tau=res.tau_opt, alpha=0.0, n_trunc=12)
    rep = error_report(eig, params)
    series = series_coeffs_alpha0(a, params.tau, 12, assume_stable=True)
    err = direct_error_oracle(a, series)
    ok = (
        rep.upper_phi is not None
        and rep.lower * (1.0 - 1e-9) <= err <= rep.upper_phi * (1.0 + 1e-9)
    )
    return ok, f"sqrt_psi = {rep.lower:.3e} <= {err:.3e} <= {rep.upper_phi:.3e}"


def _check_roundtrips():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    ok = True
    notes = []
    b = io.parse_matrix(io.dump_matrix_json(a))
    if not np.array_equal(a, b):
        ok = False
        notes.append("matrix JSON")
    b = io.parse_matrix(io.dump_matrix_csv(a))
    if not np.array_equal(a, b):
        ok = False
        notes.append("matrix CSV")
    lam = rng.standard_normal(5) - 1.0 + 1j * rng.standard_normal(5)
    if not np.array_equal(io.parse_spectrum(io.dump_spectrum(lam)), lam):
        ok = False
        notes.append("spectrum")
    series = LaguerreSeries(
        params=BasisParams(tau=2.0, alpha=0.5, n_trunc=2),
        coeffs=rng.standard_normal((3, 2, 2)) + 1j * rng.standard_normal((3, 2, 2)),
    )
    back = io.parse_series(io.dump_series(series))
    if not (
        np.array_equal(back.coeffs, series.coeffs)
        and back.params == series.params
    ):
        ok = False
        notes.append("series")
    text = io.dump_series(series)
    if io.dump_series(io.parse_series(text)) != text:
        ok = False
        notes.append("series bytes")
    return ok, "bit-exact" if ok else "lossy: " + ", ".join(notes)


def _check_ladder_and_sampler():
    lam = np.linalg.eigvals(build_ladder_matrix(LadderConfig(sections=10)))
    ok = bool(np.all(lam.real < 0.0))
    cfg = SpectrumSampleConfig(count=50, seed=7)
    s1 = sample_spectrum(cfg)
    s2 = sample_spectrum(cfg)
    ok = ok and np.array_equal(s1, s2) and bool(np.all(s1.real < 0.0))
    return ok, f"ladder abscissa = {np.max(lam.real):.3e}, sampler deterministic = {np.array_equal(s1, s2)}"


def run_validation(quick=False):
    """Returns a list of (name, passed, detail) rows."""
    alphas_full = (0.0, 0.5, 2.5)
    alphas_quick = (0.0, 0.5)
    lam_a = complex(-3.0, 2.0)
    # low N keeps the dropped terms a big fraction of zeta, so the
    # telescoped difference is not itself a cancellation victim
    zeta_cases = [
        (lam_a, 4.0, 0.7, 2),
        (lam_a, 7.0, 3.0, 3),
        (complex(-0.4, 5.0), 2.0, 1.5, 16),
    ]
    fd_cases = [
        (lam_a, 4.0, 0.0, 5),
        (lam_a, 7.0, 0.6, 12),
        (complex(-1.0, -2.5), 3.0, 1.2, 8),
    ]
    if quick:
        zeta_cases = zeta_cases[:2]
        fd_cases = fd_cases[:1]

    checks = [
        ("basis-orthonormality", _check_orthonormality, (alphas_quick if quick else alphas_full,)),
        ("s-coeff-quadrature", _check_s_quadrature, ((0.0,) if quick else (0.0, 1.3),)),
        ("alpha0-sequence", _check_alpha0_seq, ()),
        ("zeta-consistency", _check_zeta_consistency, (zeta_cases,)),
        ("dzeta-central-diff", _check_dzeta_fd, (fd_cases,)),
        ("point-spectrum-tau0", _check_point_spectrum, ()),
        ("bounds-sandwich", _check_bounds_sandwich, ()),
        ("file-roundtrips", _check_roundtrips, ()),
        ("generators", _check_ladder_and_sampler, ()),
    ]
    rows = []
    for name, fn, args in checks:
        try:
            ok, detail = fn(*args)
        except Exception as exc:  # noqa: BLE001 - a crashed check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append((name, bool(ok), detail))
    return rows
