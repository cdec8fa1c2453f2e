"""Experiment pipeline: source -> spectrum (-> conditioning data) ->
scale search -> optional 2-D refinement -> certified bounds -> optional
direct quadrature check, all captured in a serializable report.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, optimize
from .errors import ParameterError
from .generators import (
    LadderConfig,
    SpectrumSampleConfig,
    build_ladder_matrix,
    sample_spectrum,
)
from .io import parse_matrix, parse_spectrum
from .matrix import (
    direct_error_oracle,
    eigendecompose,
    series_coeffs_alpha0,
    series_coeffs_general,
)
from .params import BasisParams, as_spectrum

ORACLE_DIM_CAP = 64
MODES = ("alpha0", "full")


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    n_trunc: int
    mode: str
    tau0: float
    sqrt_phi0: float
    sqrt_psi0: float
    tau1: float | None
    alpha1: float | None
    sqrt_phi1: float | None
    sqrt_psi1: float | None
    kappa: float
    diagonalizable: bool
    lower: float
    upper_phi: float | None
    upper_psi: float | None
    oracle_error: float | None
    wall_times: dict
    flags: list
    spectrum: list
    backend: str = field(default_factory=_kernels.backend_name)

    def to_dict(self):
        return {
            "config": self.config,
            "n_trunc": self.n_trunc,
            "mode": self.mode,
            "tau0": self.tau0,
            "sqrt_phi0": self.sqrt_phi0,
            "sqrt_psi0": self.sqrt_psi0,
            "tau1": self.tau1,
            "alpha1": self.alpha1,
            "sqrt_phi1": self.sqrt_phi1,
            "sqrt_psi1": self.sqrt_psi1,
            "kappa": self.kappa,
            "diagonalizable": self.diagonalizable,
            "lower": self.lower,
            "upper_phi": self.upper_phi,
            "upper_psi": self.upper_psi,
            "oracle_error": self.oracle_error,
            "wall_times": self.wall_times,
            "flags": self.flags,
            "spectrum": self.spectrum,
            "backend": self.backend,
        }


def _resolve_source(source):
    """Returns (matrix_or_none, eigenvalue_array, config_echo)."""
    if isinstance(source, LadderConfig):
        a = build_ladder_matrix(source)
        echo = {
            "kind": "ladder",
            "sections": source.sections,
            "c0": source.c0,
            "l0": source.l0,
            "r0": source.r0,
            "g0": source.g0,
        }
        return a, None, echo
    if isinstance(source, SpectrumSampleConfig):
        lam = sample_spectrum(source)
        echo = {
            "kind": "random-spectrum",
            "count": source.count,
            "sigma_maxwell": source.sigma_maxwell,
            "mu_normal": source.mu_normal,
            "sigma_normal": source.sigma_normal,
            "seed": source.seed,
        }
        return None, lam, echo
    if isinstance(source, str):
        stripped = source.lstrip()
        if stripped.startswith("["):
            return None, parse_spectrum(source), {"kind": "spectrum-text"}
        a = parse_matrix(source)
        return a, None, {"kind": "matrix-text", "dim": int(a.shape[0])}
    arr = np.asarray(source)
    if arr.ndim == 2:
        return arr, None, {"kind": "matrix", "dim": int(arr.shape[0])}
    if arr.ndim == 1:
        lam = np.asarray(arr, dtype=complex)
        return None, lam, {"kind": "spectrum", "count": int(lam.size)}
    raise ParameterError(f"unsupported experiment source of type {type(source).__name__}")


def run_experiment(source, n_trunc, mode="alpha0", with_oracle=False) -> ExperimentReport:
    """Full pipeline on a matrix or spectrum source.

    Matrix sources get an eigendecomposition and a real kappa; a bare
    spectrum is treated as a diagonal realization (kappa = 1). Bounds
    use the refined (tau_1, alpha_1) in full mode, (tau_0, 0) otherwise.
    Stages report wall-clock seconds individually.
    """
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    BasisParams(tau=1.0, alpha=0.0, n_trunc=n_trunc)  # validates n_trunc
    walls = {}
    flags = []

    t = time.perf_counter()
    a, lam, echo = _resolve_source(source)
    walls["build"] = time.perf_counter() - t

    eig = None
    if a is not None:
        t = time.perf_counter()
        eig = eigendecompose(a)
        walls["eigen"] = time.perf_counter() - t
        lam = eig.eigenvalues.eigenvalues
        kappa = eig.kappa
        diagonalizable = eig.diagonalizable
        if eig.kappa_is_bound:
            flags.append(
                "kappa power iteration did not converge; value is the "
                "Frobenius-product upper bound"
            )
        if not diagonalizable:
            flags.append(
                "matrix is not numerically diagonalizable; "
                "upper bounds omitted, lower bound remains valid"
            )
    else:
        kappa = 1.0
        diagonalizable = True
        flags.append("spectrum-only source treated as a diagonal realization (kappa = 1)")

    spec = as_spectrum(lam)
    spec.require_stable()

    t = time.perf_counter()
    stage1 = optimize.find_tau0(n_trunc, spec)
    walls["tau0"] = time.perf_counter() - t
    tau0 = stage1.tau_opt
    sqrt_phi0 = math.sqrt(stage1.phi_min)
    sqrt_psi0 = math.sqrt(stage1.psi_at_opt)

    tau1 = alpha1 = sqrt_phi1 = sqrt_psi1 = None
    if mode == "full":
        t = time.perf_counter()
        refined = optimize.minimize_phi(n_trunc, spec)
        walls["refine"] = time.perf_counter() - t
        tau1 = refined.tau_opt
        alpha1 = refined.alpha_opt
        sqrt_phi1 = math.sqrt(refined.phi_min)
        sqrt_psi1 = math.sqrt(refined.psi_at_opt)
        tau_f, alpha_f = tau1, alpha1
        phi_f, psi_f = refined.phi_min, refined.psi_at_opt
    else:
        tau_f, alpha_f = tau0, 0.0
        phi_f, psi_f = stage1.phi_min, stage1.psi_at_opt

    t = time.perf_counter()
    m = len(spec)
    lower = math.sqrt(psi_f)
    if diagonalizable:
        upper_phi = kappa * math.sqrt(phi_f)
        upper_psi = kappa * math.sqrt(m * psi_f)
    else:
        upper_phi = None
        upper_psi = None
    walls["bounds"] = time.perf_counter() - t

    oracle_error = None
    if with_oracle:
        if a is None:
            flags.append("oracle skipped: source provides no matrix")
        elif a.shape[0] > ORACLE_DIM_CAP:
            flags.append(
                f"oracle skipped: dimension {a.shape[0]} exceeds cap {ORACLE_DIM_CAP}"
            )
        elif alpha_f != 0.0 and not diagonalizable:
            flags.append(
                "oracle skipped: alpha != 0 needs the diagonalizable coefficient path"
            )
        else:
            t = time.perf_counter()
            if alpha_f == 0.0:
                series = series_coeffs_alpha0(a, tau_f, n_trunc, assume_stable=True)
            else:
                series = series_coeffs_general(
                    eig, BasisParams(tau=tau_f, alpha=alpha_f, n_trunc=n_trunc)
                )
            oracle_error = direct_error_oracle(a, series)
            walls["oracle"] = time.perf_counter() - t

    return ExperimentReport(
        config=echo,
        n_trunc=int(n_trunc),
        mode=mode,
        tau0=tau0,
        sqrt_phi0=sqrt_phi0,
        sqrt_psi0=sqrt_psi0,
        tau1=tau1,
        alpha1=alpha1,
        sqrt_phi1=sqrt_phi1,
        sqrt_psi1=sqrt_psi1,
        kappa=kappa,
        diagonalizable=diagonalizable,
        lower=lower,
        upper_phi=upper_phi,
        upper_psi=upper_psi,
        oracle_error=oracle_error,
        wall_times=walls,
        flags=flags,
        spectrum=[[float(z.real), float(z.imag)] for z in spec.eigenvalues],
        backend=_kernels.backend_name(),
    )
