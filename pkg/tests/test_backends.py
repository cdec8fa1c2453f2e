"""Parity between the compiled and pure-numpy kernel backends, plus
spot accuracy of each against high-precision oracles."""

import os
import subprocess
import sys

import numpy as np
import pytest
from mpmath import mp

from conftest import mp_s_coeff, rel_err
from lagexpm._kernels import numpy_impl

numba_impl = pytest.importorskip(
    "lagexpm._kernels.numba_impl", reason="numba backend unavailable"
)

LAM_RE = np.array([-3.0, -3.0, -1.0, -0.2, -12.5])
LAM_IM = np.array([0.1, -0.1, 2.0, 0.0, 7.0])
GRID = [(6.001, 0.3), (1.0, 0.0), (24.0, -0.45), (2.5, 3.2), (6.0, 1e-6)]


def _close(a, b, rtol):
    np.testing.assert_allclose(a, b, rtol=rtol, atol=1e-250)


class TestParity:
    @pytest.mark.parametrize("tau,alpha", GRID)
    def test_s_table(self, tau, alpha):
        n = 20
        re_a, im_a = numpy_impl.s_table(n, tau, alpha, LAM_RE, LAM_IM)
        re_b, im_b = numba_impl.s_table(n, tau, alpha, LAM_RE, LAM_IM)
        # compare as complex so a zero component is judged at the
        # coefficient's own magnitude, not its own rounding dust
        _close(re_b + 1j * im_b, re_a + 1j * im_a, 1e-8)

    @pytest.mark.parametrize("tau,alpha", GRID)
    def test_zeta_general(self, tau, alpha):
        za, sa = numpy_impl.zeta_general(10, tau, alpha, LAM_RE, LAM_IM, 240)
        zb, sb = numba_impl.zeta_general(10, tau, alpha, LAM_RE, LAM_IM, 240)
        assert np.array_equal(np.asarray(sa), np.asarray(sb))
        _close(zb, za, 1e-8)

    def test_zeta_alpha0(self):
        for tau in (0.5, 6.0, 30.0):
            _close(
                numba_impl.zeta_alpha0(12, tau, LAM_RE, LAM_IM),
                numpy_impl.zeta_alpha0(12, tau, LAM_RE, LAM_IM),
                1e-13,
            )

    def test_dzeta_alpha0(self):
        for tau in (0.5, 6.0, 30.0):
            _close(
                numba_impl.dzeta_alpha0(12, tau, LAM_RE, LAM_IM),
                numpy_impl.dzeta_alpha0(12, tau, LAM_RE, LAM_IM),
                1e-13,
            )

    def test_laguerre_fn_table(self):
        t = np.array([1e-6, 0.3, 1.0, 4.7, 40.0])
        for tau, alpha in GRID:
            _close(
                np.asarray(numba_impl.laguerre_fn_table(20, tau, alpha, t)),
                np.asarray(numpy_impl.laguerre_fn_table(20, tau, alpha, t)),
                1e-8,
            )

    def test_hyp_scalar(self):
        for n in (0, 5, 14, 30):
            for alpha, z in ((0.3, 0.8 + 0.1j), (2.0, 1.6 - 0.2j), (-0.4, 0.05 + 0j)):
                a = numpy_impl.hyp_s_scalar(n, alpha, z.real, z.imag, n >= 1)
                b = numba_impl.hyp_s_scalar(n, alpha, z.real, z.imag, n >= 1)
                assert rel_err(complex(b[0], b[1]), complex(a[0], a[1])) < 1e-10


class TestAccuracyVsOracle:
    """Each backend independently against the 50-digit coefficient."""

    @pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
    def test_s_spots(self, impl):
        mp.dps = 50
        spots = [
            (0, 1.0, 0.0, -1.0 + 0.0j),
            (7, 6.001, 0.3, -3.0 + 0.1j),
            (19, 2.0, 1.5, -0.4 - 2.0j),
        ]
        for n, tau, alpha, lam in spots:
            re, im = impl.s_table(
                n, tau, alpha, np.array([lam.real]), np.array([lam.imag])
            )
            got = complex(re[0, n], im[0, n])
            want = complex(mp_s_coeff(n, tau, alpha, lam))
            assert rel_err(got, want) < 1e-12


class TestEnvSelection:
    def _probe(self, value):
        env = dict(os.environ)
        env["LAGEXPM_BACKEND"] = value
        return subprocess.run(
            [sys.executable, "-c", "import lagexpm; print(lagexpm.backend_name())"],
            capture_output=True, text=True, env=env, timeout=300,
        )

    def test_numpy_forced(self):
        proc = self._probe("numpy")
        assert proc.returncode == 0 and proc.stdout.strip() == "numpy"

    def test_numba_forced(self):
        proc = self._probe("numba")
        assert proc.returncode == 0 and proc.stdout.strip() == "numba"

    def test_bogus_rejected(self):
        proc = self._probe("bogus")
        assert proc.returncode != 0
        assert "LAGEXPM_BACKEND" in proc.stderr
