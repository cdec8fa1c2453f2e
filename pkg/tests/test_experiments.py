import math
import os

import numpy as np
import pytest

from conftest import rand_diagonalizable
from lagexpm import ParameterError, StabilityError, find_tau0
from lagexpm.experiments import ORACLE_DIM_CAP, run_experiment
from lagexpm.generators import SpectrumSampleConfig, sample_spectrum
from lagexpm.io import dump_matrix_json, dump_report, dump_spectrum, load_spectrum

FIXTURE = os.path.join(os.path.dirname(__file__), "fixtures", "example2_spectrum.json")


class TestPipeline:
    def test_single_pole_alpha0(self):
        rep = run_experiment([-3.0], 5)
        assert abs(rep.tau0 - 6.0) < 1e-8
        assert rep.sqrt_phi0 < 1e-7
        assert rep.kappa == 1.0
        assert rep.diagonalizable
        assert rep.tau1 is None and rep.alpha1 is None
        assert any("spectrum-only" in f for f in rep.flags)
        for key in ("build", "tau0", "bounds"):
            assert key in rep.wall_times
        assert rep.mode == "alpha0"
        assert rep.config["kind"] == "spectrum"

    def test_no_drift_against_direct_call(self):
        lam = [-1.0, -2.5, -0.7]
        rep = run_experiment(lam, 8)
        direct = find_tau0(8, lam)
        assert rep.tau0 == direct.tau_opt
        assert rep.sqrt_phi0 == math.sqrt(direct.phi_min)

    def test_full_mode_refines(self):
        lam = [-1.0, -4.0, -2.0 + 1.0j, -2.0 - 1.0j]
        rep = run_experiment(lam, 8, mode="full")
        assert rep.tau1 is not None and rep.alpha1 is not None
        assert "refine" in rep.wall_times
        # 2-D refinement never loses to the alpha = 0 line search
        assert rep.sqrt_phi1 <= rep.sqrt_phi0 * (1.0 + 1e-9)
        assert rep.lower == math.sqrt(rep.sqrt_psi1**2)

    def test_bound_fields_diagonal_case(self):
        rep = run_experiment([-2.0, -5.0], 6)
        m = 2
        assert rep.lower == pytest.approx(rep.sqrt_psi0)
        assert rep.upper_phi == pytest.approx(rep.kappa * rep.sqrt_phi0)
        assert rep.upper_psi == pytest.approx(rep.kappa * math.sqrt(m) * rep.sqrt_psi0)
        assert 0.0 <= rep.lower <= rep.upper_phi <= rep.upper_psi

    def test_matrix_source_with_oracle(self):
        a, _ = rand_diagonalizable(np.random.default_rng(7), 4)
        rep = run_experiment(a, 10, with_oracle=True)
        assert rep.config["kind"] == "matrix"
        assert rep.config["dim"] == 4
        assert "eigen" in rep.wall_times and "oracle" in rep.wall_times
        assert rep.oracle_error is not None
        assert rep.lower - 1e-8 <= rep.oracle_error <= rep.upper_phi + 1e-8

    def test_matrix_text_source(self):
        a = np.array([[-1.0, 0.5], [0.0, -2.0]], dtype=complex)
        rep = run_experiment(dump_matrix_json(a), 6)
        assert rep.config == {"kind": "matrix-text", "dim": 2}
        assert rep.kappa >= 1.0

    def test_spectrum_text_source(self):
        text = dump_spectrum(np.array([-1.0 + 0j, -2.0 + 0j]))
        rep = run_experiment(text, 6)
        assert rep.config == {"kind": "spectrum-text"}
        assert rep.kappa == 1.0

    def test_unstable_spectrum_rejected(self):
        with pytest.raises(StabilityError):
            run_experiment([-1.0, 0.5], 5)

    def test_bad_mode_rejected(self):
        with pytest.raises(ParameterError):
            run_experiment([-1.0], 5, mode="fast")

    def test_bad_source_rejected(self):
        with pytest.raises(ParameterError):
            run_experiment(np.zeros((2, 2, 2)), 5)


class TestDegradedPaths:
    def test_jordan_block_omits_upper_bounds(self):
        a = np.array([[-1.0, 1.0], [0.0, -1.0], ])
        rep = run_experiment(a, 6, mode="full")
        assert not rep.diagonalizable
        assert rep.upper_phi is None and rep.upper_psi is None
        assert rep.lower >= 0.0
        assert any("not numerically diagonalizable" in f for f in rep.flags)

    @pytest.mark.filterwarnings("ignore::lagexpm.AccuracyWarning")
    def test_defective_exact_match_still_gets_alpha0_oracle(self):
        # the double eigenvalue is an exact-match spectrum, so refinement
        # lands on alpha = 0 and the recursion path serves the oracle even
        # without an eigenbasis
        a = np.array([[-1.0, 1.0], [0.0, -1.0]])
        rep = run_experiment(a, 6, mode="full", with_oracle=True)
        assert rep.alpha1 == 0.0
        assert rep.oracle_error is not None
        assert rep.oracle_error < 1e-10

    def test_defective_nonzero_alpha_skips_oracle(self):
        a = np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -3.0]])
        rep = run_experiment(a, 6, mode="full", with_oracle=True)
        assert not rep.diagonalizable
        assert rep.alpha1 != 0.0
        assert rep.oracle_error is None
        assert any("oracle skipped" in f for f in rep.flags)

    def test_oracle_skipped_for_spectrum_source(self):
        rep = run_experiment([-1.0, -2.0], 5, with_oracle=True)
        assert rep.oracle_error is None
        assert any("no matrix" in f for f in rep.flags)

    def test_oracle_skipped_above_dim_cap(self):
        m = ORACLE_DIM_CAP + 6
        a = np.diag(-1.0 - np.arange(m, dtype=float))
        rep = run_experiment(a, 4, with_oracle=True)
        assert rep.oracle_error is None
        assert any("exceeds cap" in f for f in rep.flags)

    def test_full_mode_warns_above_recommended_n(self):
        with pytest.warns(UserWarning, match="slow"):
            run_experiment([-1.0, -2.0], 13, mode="full")


class TestReportShape:
    def test_to_dict_serializes(self):
        rep = run_experiment([-1.5], 4, mode="full")
        doc = rep.to_dict()
        assert doc["n_trunc"] == 4
        assert doc["backend"] in ("numba", "numpy")
        assert doc["spectrum"] == [[-1.5, 0.0]]
        text = dump_report(doc)
        assert text.endswith("\n")
        assert '"tau0"' in text


class TestExample2Regression:
    """Anchor values frozen from the first validated run of this pipeline
    on the committed seed-0 spectrum fixture (regression detection, not an
    external reference)."""

    def test_fixture_matches_sampler(self):
        lam = load_spectrum(FIXTURE)
        drawn = sample_spectrum(SpectrumSampleConfig(seed=0))
        assert lam.tobytes() == drawn.tobytes()

    def test_frozen_report_values(self):
        lam = load_spectrum(FIXTURE)
        rep = run_experiment(lam, 10, mode="full")
        assert rep.tau0 == pytest.approx(6.7512164832047645, rel=1e-7)
        assert rep.sqrt_phi0 == pytest.approx(0.002351776260325068, rel=1e-7)
        assert rep.sqrt_psi0 == pytest.approx(0.002026032993391942, rel=1e-7)
        assert rep.tau1 == pytest.approx(6.740727448542374, rel=1e-7)
        assert rep.alpha1 == pytest.approx(-0.00020013604205404434, abs=1e-6)
        assert rep.sqrt_phi1 == pytest.approx(0.0023455492505467996, rel=1e-7)
        assert rep.sqrt_psi1 == pytest.approx(0.002020550238661343, rel=1e-7)
