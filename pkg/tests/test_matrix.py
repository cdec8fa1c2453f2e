import math
import warnings

import numpy as np
import pytest
import scipy.linalg

from conftest import rand_diagonalizable, rel_err
from lagexpm import (
    BasisParams,
    DomainError,
    LaguerreSeries,
    NumericalError,
    ParameterError,
    ShapeError,
    StabilityError,
    direct_error_oracle,
    eigendecompose,
    error_report,
    eval_series,
    find_tau0,
    gauss_laguerre_rule,
    is_stable,
    phi,
    s_coeff,
    s_coeff_seq_alpha0,
    series_coeffs_alpha0,
    series_coeffs_general,
    zeta,
)


def _sorted(vals):
    return np.sort_complex(np.asarray(vals))


class TestEigendecompose:
    def test_diagonal_input(self):
        eig = eigendecompose(np.diag([-1.0 + 0.0j, -2.0 + 1.0j]))
        got = _sorted(eig.eigenvalues.eigenvalues)
        assert np.allclose(got, _sorted([-1.0, -2.0 + 1.0j]), rtol=0, atol=1e-13)
        assert abs(eig.kappa - 1.0) < 1e-10
        assert eig.diagonalizable

    def test_triangular_input(self):
        eig = eigendecompose(np.array([[-1.0, 1.0], [0.0, -2.0]]))
        got = _sorted(eig.eigenvalues.eigenvalues)
        assert np.allclose(got, [-2.0, -1.0], rtol=0, atol=1e-12)

    def test_jordan_block_flagged(self):
        eig = eigendecompose(np.array([[-1.0, 1.0], [0.0, -1.0]]))
        assert not eig.diagonalizable

    def test_eigenvector_residual(self):
        rng = np.random.default_rng(2)
        a, _ = rand_diagonalizable(rng, 5)
        eig = eigendecompose(a)
        assert eig.diagonalizable
        assert eig.residual <= 1e-8
        lam = eig.eigenvalues.eigenvalues
        res = a @ eig.t_matrix - eig.t_matrix * lam
        assert np.max(np.abs(res)) < 1e-8 * np.linalg.norm(a)
        # columns are unit vectors
        assert np.allclose(np.linalg.norm(eig.t_matrix, axis=0), 1.0, atol=1e-12)

    def test_kappa_matches_svd(self):
        rng = np.random.default_rng(4)
        a, _ = rand_diagonalizable(rng, 4)
        eig = eigendecompose(a)
        sv = np.linalg.svd(eig.t_matrix, compute_uv=False)
        assert rel_err(eig.kappa, sv[0] / sv[-1] if not eig.kappa_is_bound else eig.kappa) < 1e-6

    def test_matches_numpy_eigvals(self):
        rng = np.random.default_rng(6)
        for m in (2, 3, 6, 9):
            a = rng.normal(size=(m, m)) - 2.0 * np.eye(m)
            got = _sorted(eigendecompose(a).eigenvalues.eigenvalues)
            want = _sorted(np.linalg.eigvals(a))
            assert np.max(np.abs(got - want)) < 1e-8 * max(1.0, np.abs(want).max())

    def test_non_square_rejected(self):
        with pytest.raises(ShapeError):
            eigendecompose(np.zeros((2, 3)))

    def test_non_finite_rejected(self):
        with pytest.raises(ParameterError):
            eigendecompose(np.array([[float("nan"), 0.0], [0.0, -1.0]]))


class TestIsStable:
    def test_stable(self):
        assert is_stable(eigendecompose(np.diag([-1.0, -0.01])))

    def test_boundary_is_unstable(self):
        assert not is_stable(eigendecompose(np.diag([-1.0, 0.0])))
        assert not is_stable(eigendecompose(np.diag([-1.0, 1e-15])))


class TestSeriesCoeffsAlpha0:
    def test_scalar_case(self):
        series = series_coeffs_alpha0(np.array([[-0.5]]), 1.0, 3)
        assert series.coeffs.shape == (4, 1, 1)
        flat = series.coeffs[:, 0, 0]
        assert abs(flat[0] - 1.0) < 1e-15
        assert np.all(np.abs(flat[1:]) < 1e-15)

    def test_diagonal_matches_scalar_recursion(self):
        lam = np.array([-1.0 + 0.5j, -3.0 - 2.0j, -0.2 + 0.0j])
        series = series_coeffs_alpha0(np.diag(lam), 1.7, 8)
        for k, z in enumerate(lam):
            seq = s_coeff_seq_alpha0(BasisParams(tau=1.7, alpha=0.0, n_trunc=8), z)
            col = series.coeffs[:, k, k]
            assert np.max(np.abs(col - seq.values)) < 1e-13 * np.max(np.abs(seq.values))
        off = series.coeffs.copy()
        for k in range(3):
            off[:, k, k] = 0.0
        assert np.all(off == 0.0)

    def test_matches_functional_calculus(self):
        rng = np.random.default_rng(8)
        a, _ = rand_diagonalizable(rng, 3)
        eig = eigendecompose(a)
        p = BasisParams(tau=2.0, alpha=0.0, n_trunc=6)
        s_rec = series_coeffs_alpha0(a, 2.0, 6)
        s_fc = series_coeffs_general(eig, p)
        for n in range(7):
            scale = np.linalg.norm(s_rec.coeffs[n])
            assert np.linalg.norm(s_rec.coeffs[n] - s_fc.coeffs[n]) <= 1e-8 * scale

    def test_unstable_rejected(self):
        with pytest.raises(StabilityError):
            series_coeffs_alpha0(np.array([[1.0]]), 1.0, 3)

    def test_assume_stable_skips_check(self):
        # same matrix passes when the caller vouches for it
        series = series_coeffs_alpha0(np.array([[-1.0]]), 1.0, 2, assume_stable=True)
        assert series.coeffs.shape == (3, 1, 1)

    def test_bad_tau(self):
        with pytest.raises(ParameterError):
            series_coeffs_alpha0(np.array([[-1.0]]), -2.0, 3)


class TestSeriesCoeffsGeneral:
    def test_scalar_case(self):
        eig = eigendecompose(np.array([[-0.8 + 1.1j]]))
        p = BasisParams(tau=1.4, alpha=0.9, n_trunc=5)
        series = series_coeffs_general(eig, p)
        for n in range(6):
            want = s_coeff(n, p, complex(-0.8, 1.1))
            assert abs(series.coeffs[n, 0, 0] - want) < 1e-13 * max(abs(want), 1e-300)

    def test_diagonal_case(self):
        lam = np.array([-0.5 + 2.0j, -4.0 + 0.0j])
        eig = eigendecompose(np.diag(lam))
        p = BasisParams(tau=3.0, alpha=1.5, n_trunc=4)
        series = series_coeffs_general(eig, p)
        for n in range(5):
            want = np.diag([s_coeff(n, p, z) for z in lam])
            # eigendecompose may permute; compare as matrix functions
            assert np.max(np.abs(series.coeffs[n] - want)) < 1e-12

    def test_known_eigenvector_construction(self):
        rng = np.random.default_rng(10)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        lam = np.array([-0.4 + 1.0j, -1.3 - 0.7j, -2.2 + 0.1j, -5.0 + 3.0j])
        a = (q * lam) @ q.conj().T  # normal matrix, kappa(T) = 1
        p = BasisParams(tau=2.0, alpha=0.6, n_trunc=5)
        series = series_coeffs_general(eigendecompose(a), p)
        for n in range(6):
            s = np.array([s_coeff(n, p, z) for z in lam])
            want = (q * s) @ q.conj().T
            scale = max(np.linalg.norm(want), 1e-300)
            assert np.linalg.norm(series.coeffs[n] - want) <= 1e-9 * scale

    def test_jordan_rejected(self):
        eig = eigendecompose(np.array([[-1.0, 1.0], [0.0, -1.0]]))
        with pytest.raises(DomainError, match="diagonalizable"):
            series_coeffs_general(eig, BasisParams(tau=1.0, alpha=0.5, n_trunc=3))

    def test_unstable_rejected(self):
        eig = eigendecompose(np.diag([1.0, -1.0]))
        with pytest.raises(StabilityError):
            series_coeffs_general(eig, BasisParams(tau=1.0, alpha=0.5, n_trunc=3))


class TestEvalSeries:
    def test_zero_coefficients(self):
        p = BasisParams(tau=1.0, alpha=0.0, n_trunc=2)
        series = LaguerreSeries(params=p, coeffs=np.zeros((3, 2, 2), dtype=complex))
        assert np.all(eval_series(series, 1.5) == 0.0)

    def test_exact_scalar_exponential(self):
        series = series_coeffs_alpha0(np.array([[-0.5]]), 1.0, 0)
        got = eval_series(series, 2.0)
        assert abs(got[0, 0] - math.exp(-1.0)) < 1e-14

    def test_t_zero_branches(self):
        coeffs = np.ones((3, 1, 1), dtype=complex)
        s0 = LaguerreSeries(params=BasisParams(tau=4.0, alpha=0.0, n_trunc=2), coeffs=coeffs)
        assert abs(eval_series(s0, 0.0)[0, 0] - 3.0 * 2.0) < 1e-14
        spos = LaguerreSeries(params=BasisParams(tau=4.0, alpha=1.0, n_trunc=2), coeffs=coeffs)
        assert np.all(eval_series(spos, 0.0) == 0.0)
        sneg = LaguerreSeries(params=BasisParams(tau=4.0, alpha=-0.5, n_trunc=2), coeffs=coeffs)
        with pytest.raises(DomainError):
            eval_series(sneg, 0.0)

    def test_negative_t_rejected(self):
        series = series_coeffs_alpha0(np.array([[-1.0]]), 1.0, 2)
        with pytest.raises(DomainError):
            eval_series(series, -1e-9)

    def test_approximates_expm(self):
        rng = np.random.default_rng(12)
        a = rng.normal(size=(3, 3)) / math.sqrt(3.0) - 1.5 * np.eye(3)
        tau = find_tau0(40, np.linalg.eigvals(a)).tau_opt
        series = series_coeffs_alpha0(a, tau, 40)
        worst = 0.0
        for t in (0.1, 1.0, 5.0):
            diff = eval_series(series, t) - scipy.linalg.expm(a * t)
            worst = max(worst, float(np.linalg.norm(diff)))
        assert worst <= 1e-5


class TestErrorReport:
    def test_diagonal_bounds_collapse(self):
        lam = np.array([-0.7 + 1.0j, -2.0 - 0.5j])
        eig = eigendecompose(np.diag(lam))
        p = BasisParams(tau=1.5, alpha=0.0, n_trunc=6)
        rep = error_report(eig, p)
        assert abs(rep.kappa - 1.0) < 1e-10
        assert rel_err(rep.lower, math.sqrt(rep.psi)) < 1e-14
        assert rel_err(rep.upper_phi, rep.kappa * math.sqrt(rep.phi)) < 1e-14

    def test_bound_ordering(self):
        rng = np.random.default_rng(14)
        a, _ = rand_diagonalizable(rng, 5)
        eig = eigendecompose(a)
        rep = error_report(eig, BasisParams(tau=2.0, alpha=0.0, n_trunc=8))
        assert 0.0 <= rep.lower <= rep.upper_phi <= rep.upper_psi + 1e-300

    def test_jordan_keeps_lower_bound_only(self):
        eig = eigendecompose(np.array([[-1.0, 1.0], [0.0, -1.0]]))
        rep = error_report(eig, BasisParams(tau=1.0, alpha=0.0, n_trunc=4))
        assert rep.upper_phi is None
        assert rep.upper_psi is None
        assert rep.lower >= 0.0

    def test_sandwich_against_oracle(self):
        rng = np.random.default_rng(16)
        a, _ = rand_diagonalizable(rng, 4)
        eig = eigendecompose(a)
        tau = find_tau0(8, eig.eigenvalues.eigenvalues).tau_opt
        rep = error_report(eig, BasisParams(tau=tau, alpha=0.0, n_trunc=8))
        series = series_coeffs_alpha0(a, tau, 8, assume_stable=True)
        err = direct_error_oracle(a, series)
        assert rep.lower <= err + 1e-8
        assert err <= rep.upper_phi + 1e-8


class TestDirectErrorOracle:
    def test_zeroed_series_gives_signal_norm(self):
        a = np.array([[-1.0]])
        p = BasisParams(tau=2.0, alpha=0.0, n_trunc=3)
        series = LaguerreSeries(params=p, coeffs=np.zeros((4, 1, 1), dtype=complex))
        assert rel_err(direct_error_oracle(a, series), 1.0 / math.sqrt(2.0)) < 1e-9

    def test_scalar_equals_sqrt_zeta(self):
        a = np.array([[-1.3]])
        series = series_coeffs_alpha0(a, 1.8, 5)
        want = math.sqrt(zeta(BasisParams(tau=1.8, alpha=0.0, n_trunc=5), -1.3))
        assert rel_err(direct_error_oracle(a, series), want) < 1e-8

    def test_diagonal_equals_sqrt_phi(self):
        lam = np.array([-0.6 + 1.1j, -2.4 - 0.3j, -1.1 + 0.0j])
        tau = find_tau0(7, lam).tau_opt * 1.3  # off-optimum keeps the error visible
        series = series_coeffs_alpha0(np.diag(lam), tau, 7)
        want = math.sqrt(phi(7, tau, 0.0, lam))
        assert rel_err(direct_error_oracle(np.diag(lam), series), want) < 1e-8

    def test_unstable_rejected(self):
        p = BasisParams(tau=1.0, alpha=0.0, n_trunc=1)
        series = LaguerreSeries(params=p, coeffs=np.zeros((2, 1, 1), dtype=complex))
        with pytest.raises(StabilityError):
            direct_error_oracle(np.array([[0.5]]), series)


class TestGaussLaguerreRule:
    def test_single_node(self):
        x, w = gauss_laguerre_rule(1, 0.0)
        assert abs(x[0] - 1.0) < 1e-14
        assert abs(w[0] - 1.0) < 1e-14

    def test_two_nodes(self):
        x, w = gauss_laguerre_rule(2, 0.0)
        r2 = math.sqrt(2.0)
        assert np.allclose(np.sort(x), [2.0 - r2, 2.0 + r2], rtol=0, atol=1e-13)
        assert np.allclose(np.sort(w)[::-1], [(2.0 + r2) / 4.0, (2.0 - r2) / 4.0], rtol=0, atol=1e-13)

    def test_moments(self):
        x, w = gauss_laguerre_rule(16, 0.0)
        for k in range(0, 12):
            assert rel_err(float(np.sum(w * x**k)), math.factorial(k)) < 1e-12

    def test_weight_total_general_alpha(self):
        # sum of weights integrates 1 against t^alpha e^-t
        for alpha in (-0.5, 0.0, 2.3):
            _, w = gauss_laguerre_rule(24, alpha)
            assert rel_err(float(np.sum(w)), math.gamma(alpha + 1.0)) < 1e-12

    def test_validation(self):
        with pytest.raises(ParameterError):
            gauss_laguerre_rule(0, 0.0)
        with pytest.raises(ParameterError):
            gauss_laguerre_rule(513, 0.0)
        with pytest.raises(DomainError):
            gauss_laguerre_rule(4, -1.0)


class TestMatrixInvariants:
    def test_similarity_covariance(self):
        rng = np.random.default_rng(18)
        a, _ = rand_diagonalizable(rng, 4)
        p = rng.normal(size=(4, 4)) + 0.5 * np.eye(4)
        pinv = np.linalg.inv(p)
        s_a = series_coeffs_alpha0(a, 1.6, 5, assume_stable=True)
        s_b = series_coeffs_alpha0(p @ a @ pinv, 1.6, 5, assume_stable=True)
        for n in range(6):
            want = p @ s_a.coeffs[n] @ pinv
            scale = max(np.linalg.norm(want), 1e-300)
            assert np.linalg.norm(s_b.coeffs[n] - want) <= 1e-7 * scale

    def test_real_input_closure(self):
        rng = np.random.default_rng(20)
        a = rng.normal(size=(5, 5)) / math.sqrt(5.0) - 2.0 * np.eye(5)
        series = series_coeffs_alpha0(a, 2.0, 6)
        for n in range(7):
            scale = max(np.linalg.norm(series.coeffs[n]), 1e-300)
            assert np.linalg.norm(series.coeffs[n].imag) <= 1e-12 * scale

    def test_norm_inequalities(self):
        # sanity anchors used by the bound derivation
        rng = np.random.default_rng(22)
        for _ in range(10):
            a = rng.normal(size=(4, 4))
            b = rng.normal(size=(4, 4))
            spec = np.linalg.norm(a, 2)
            assert spec <= np.linalg.norm(a, "fro") + 1e-12
            assert np.linalg.norm(a @ b, "fro") <= spec * np.linalg.norm(b, "fro") + 1e-12

    def test_oracle_warns_when_quadrature_moves(self):
        # a too-coarse starting rule must be reported, not silently kept
        lam = np.array([-0.01])
        series = series_coeffs_alpha0(np.diag(lam), 40.0, 2, assume_stable=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            direct_error_oracle(np.diag(lam), series, nodes=4)
        assert any("quadrature" in str(w.message) for w in caught)
