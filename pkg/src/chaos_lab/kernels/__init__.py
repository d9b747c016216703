"""Hot sampling kernels: compiled core with a numpy fallback.

The compiled extension (`_fast`, Cython) and the numpy reference
(`_reference`) implement the same four functions.  Selection happens once
at import: the extension is preferred when present, and the environment
variable CHAOS_LAB_KERNELS forces a side ("c"/"cython" or "py"/"numpy").

Both backends are deterministic on their own; floating-point results may
differ between backends in the last bits because summation order differs.
Reports therefore name the active backend.
"""

from __future__ import annotations

import os

from . import _reference

_FORCED = os.environ.get("CHAOS_LAB_KERNELS", "").strip().lower()

_impl = None
_backend_name = "numpy"

if _FORCED in ("py", "numpy", "python"):
    _impl = _reference
elif _FORCED in ("c", "cython", "fast"):
    from . import _fast as _impl  # raises if the extension was not built

    _backend_name = "cython"
elif _FORCED:
    raise RuntimeError(f"CHAOS_LAB_KERNELS={_FORCED!r} not recognized")
else:
    try:
        from . import _fast as _impl

        _backend_name = "cython"
    except ImportError:
        _impl = _reference

second_chaos_batch = _impl.second_chaos_batch
hermite_combo_batch = _impl.hermite_combo_batch
power_sums = _impl.power_sums
bin_counts = _impl.bin_counts


def backend() -> str:
    """Name of the kernel backend selected at import ('cython' or 'numpy')."""
    return _backend_name
