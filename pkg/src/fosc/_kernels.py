"""Backend dispatch for the hot grid kernels.

The numba backend is used when importable; set FOSC_DISABLE_NUMBA=1 (or
"true"/"yes") to force the pure-numpy fallback. Both backends share one
summation order, so a backend switch changes timings, not science.
"""

from __future__ import annotations

import os

from . import _kernels_numpy as numpy_backend

_FLAG = os.environ.get("FOSC_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG in {"1", "true", "yes"}

numba_backend = None
if not _DISABLED:
    try:
        from . import _kernels_numba as numba_backend  # noqa: F811
    except ImportError:
        numba_backend = None

_active = numba_backend if numba_backend is not None else numpy_backend

BACKEND = "numba" if _active is numba_backend and numba_backend is not None else "numpy"

wigner_sym = _active.wigner_sym
wigner_naive = _active.wigner_naive
husimi_abs2 = _active.husimi_abs2
wavefunction = _active.wavefunction
rk4_q_bracket = _active.rk4_q_bracket


def backend_name() -> str:
    return BACKEND
