"""Test-problem generators: the RLCG transmission-line ladder and the
random stable spectrum sampler.

The sampler's normals come from the Marsaglia polar transform over
PCG64 rather than Generator.normal, so the draw sequence is pinned by
this module and not by numpy's internal choice of ziggurat tables.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def _check_positive_int(name, value):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class LadderConfig:
    sections: int = 150
    c0: float = 10.0
    l0: float = 50.0
    r0: float = 170.0
    g0: float = 160.0

    def __post_init__(self):
        object.__setattr__(
            self, "sections", _check_positive_int("sections", self.sections)
        )
        for name in ("c0", "l0", "r0", "g0"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or not v > 0.0:
                raise ParameterError(f"{name} must be finite and > 0, got {v}")
            object.__setattr__(self, name, v)


def build_ladder_matrix(config: LadderConfig) -> np.ndarray:
    """State matrix of the n-section RLCG ladder.

    State vector (U_0..U_{n-1}, I_0..I_{n-1}) with per-section values
    C0/n, L0/n, R0/n, G0/n. Node voltages: C U_k' = I_k - I_{k+1} - G U_k
    (open termination, so the last node has no outgoing branch); branch
    currents: L I_k' = U_{k-1} - U_k - R I_k with the source end shorted
    so U_{-1} = 0 drops out. Currents are oriented source-to-load; the
    opposite orientation flips both off-diagonal blocks and leaves the
    spectrum unchanged.
    """
    n = config.sections
    c = config.c0 / n
    lind = config.l0 / n
    r = config.r0 / n
    g = config.g0 / n
    a = np.zeros((2 * n, 2 * n))
    for k in range(n):
        a[k, k] = -g / c
        a[k, n + k] = 1.0 / c
        if k + 1 < n:
            a[k, n + k + 1] = -1.0 / c
        a[n + k, n + k] = -r / lind
        a[n + k, k] = -1.0 / lind
        if k > 0:
            a[n + k, k - 1] = 1.0 / lind
    return a


@dataclass(frozen=True)
class SpectrumSampleConfig:
    count: int = 200
    sigma_maxwell: float = 4.0
    mu_normal: float = 0.0
    sigma_normal: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "count", _check_positive_int("count", self.count))
        for name, positive in (
            ("sigma_maxwell", True),
            ("mu_normal", False),
            ("sigma_normal", True),
        ):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v}")
            if positive and not v > 0.0:
                raise ParameterError(f"{name} must be > 0, got {v}")
            object.__setattr__(self, name, v)
        s = self.seed
        if not isinstance(s, (int, np.integer)) or isinstance(s, bool):
            raise ParameterError(f"seed must be an integer, got {s!r}")
        s = int(s)
        if not 0 <= s < 2**64:
            raise ParameterError(f"seed must fit in an unsigned 64-bit int, got {s}")
        object.__setattr__(self, "seed", s)


def _polar_normals(gen, k):
    """k standard normals, Marsaglia polar, spare kept within a call only."""
    out = np.empty(k)
    i = 0
    spare = None
    while i < k:
        if spare is not None:
            out[i] = spare
            spare = None
            i += 1
            continue
        u = 2.0 * gen.random() - 1.0
        v = 2.0 * gen.random() - 1.0
        s = u * u + v * v
        if s >= 1.0 or s == 0.0:
            continue
        f = math.sqrt(-2.0 * math.log(s) / s)
        out[i] = u * f
        spare = v * f
        i += 1
    return out


def sample_spectrum(config: SpectrumSampleConfig) -> np.ndarray:
    """count stable eigenvalues: Re = -Maxwell(sigma), Im ~ N(mu, std^2).

    Two independent child streams of the seed drive the real and
    imaginary parts, so changing count extends a spectrum without
    reshuffling it. Exact zero Maxwell draws (probability ~0) are
    redrawn to keep every Re strictly negative.
    """
    seq = np.random.SeedSequence(config.seed)
    child_re, child_im = seq.spawn(2)
    gen_re = np.random.Generator(np.random.PCG64(child_re))
    gen_im = np.random.Generator(np.random.PCG64(child_im))
    lam = np.empty(config.count, dtype=complex)
    for j in range(config.count):
        m = 0.0
        while m == 0.0:
            x = _polar_normals(gen_re, 3) * config.sigma_maxwell
            m = math.sqrt(x[0] ** 2 + x[1] ** 2 + x[2] ** 2)
        im = config.mu_normal + config.sigma_normal * _polar_normals(gen_im, 1)[0]
        lam[j] = complex(-m, im)
    return lam
