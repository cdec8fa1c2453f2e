"""Core value types: basis parameters and spectra."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, StabilityError

# Truncation orders above this are dominated by rounding error in double
# precision, so they are rejected everywhere.
N_MAX = 50


@dataclass(frozen=True)
class BasisParams:
    """Parameters of the scaled Laguerre basis l_{n,tau}^alpha.

    tau is the time scale (inverse time units), alpha the order of the
    generalized Laguerre family, n_trunc the truncation index N of the
    series (coefficients 0..N are kept).
    """

    tau: float
    alpha: float = 0.0
    n_trunc: int = 10

    def __post_init__(self):
        tau = float(self.tau)
        alpha = float(self.alpha)
        if not math.isfinite(tau) or tau <= 0.0:
            raise ParameterError(f"tau must be finite and > 0, got {self.tau}")
        if not math.isfinite(alpha):
            raise ParameterError(f"alpha must be finite, got {self.alpha}")
        if alpha <= -1.0:
            raise DomainError(f"alpha must be > -1, got {self.alpha}")
        n = self.n_trunc
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ParameterError(f"n_trunc must be an integer, got {n!r}")
        if n < 0:
            raise ParameterError(f"n_trunc must be >= 0, got {n}")
        if n > N_MAX:
            raise ParameterError(f"n_trunc {n} exceeds N_MAX = {N_MAX}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "n_trunc", int(n))


@dataclass(frozen=True)
class Spectrum:
    """A multiset of eigenvalues, stored as a complex vector.

    Stability (all real parts < 0) is NOT enforced at construction so that
    eigendecomposition results of arbitrary matrices can be represented;
    operations that need stability call require_stable().
    """

    eigenvalues: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.eigenvalues, dtype=complex))
        if lam.ndim != 1 or lam.size < 1:
            raise ParameterError("spectrum must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(lam.real)) or not np.all(np.isfinite(lam.imag)):
            raise ParameterError("spectrum contains non-finite eigenvalues")
        lam = lam.copy()
        lam.flags.writeable = False
        object.__setattr__(self, "eigenvalues", lam)

    def __len__(self):
        return self.eigenvalues.size

    @property
    def spectral_abscissa(self) -> float:
        return float(np.max(self.eigenvalues.real))

    @property
    def is_stable(self) -> bool:
        return self.spectral_abscissa < 0.0

    def require_stable(self):
        k = int(np.argmax(self.eigenvalues.real))
        a = float(self.eigenvalues.real[k])
        if a >= 0.0:
            raise StabilityError(
                f"eigenvalue {k} has Re = {a:g} >= 0; matrix/eigenvalue not stable",
                abscissa=a,
                index=k,
            )
        return self


def as_spectrum(obj) -> Spectrum:
    if isinstance(obj, Spectrum):
        return obj
    return Spectrum(np.asarray(obj, dtype=complex))
