"""Kernel backend selection.

Set LAGEXPM_BACKEND to choose at import time:
  auto   - numba when importable, numpy otherwise (default)
  numba  - require the compiled backend, fail if numba is missing
  numpy  - force the pure-numpy backend
"""

import os

from ..errors import ParameterError

_choice = os.environ.get("LAGEXPM_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ParameterError(
        f"LAGEXPM_BACKEND must be auto, numba or numpy, got {_choice!r}"
    )

if _choice == "numpy":
    from . import numpy_impl as _impl
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import numpy_impl as _impl
        BACKEND = "numpy"

DD_MIN_N = _impl.DD_MIN_N
hyp_s_scalar = _impl.hyp_s_scalar
s_table = _impl.s_table
zeta_alpha0 = _impl.zeta_alpha0
dzeta_alpha0 = _impl.dzeta_alpha0
zeta_general = _impl.zeta_general
laguerre_fn_table = _impl.laguerre_fn_table


def backend_name() -> str:
    return BACKEND
