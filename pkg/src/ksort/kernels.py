"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise, or when the
environment variable ``KSORT_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the pure-Python twin is used.  ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("KSORT_PURE_PYTHON", "") not in ("", "0")

if _forced:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined,no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

std_pdf = _impl.std_pdf
std_cdf = _impl.std_cdf
v_fn = _impl.v_fn
w_fn = _impl.w_fn
vw = _impl.vw
kwise_apply = _impl.kwise_apply
tiebreak_key = _impl.tiebreak_key
ucb_values = _impl.ucb_values
ucb_greedy = _impl.ucb_greedy
argmin_keyed = _impl.argmin_keyed
rank_positions = _impl.rank_positions
rank_mse = _impl.rank_mse


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
