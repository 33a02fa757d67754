"""Kernel backend selection.

The compiled extension (forestvol._kernel) and the pure-Python twin
(forestvol._kernel_py) expose the same functions and must agree exactly.
FORESTVOL_KERNEL=c forces the extension, =py forces pure Python, anything
else (or unset) prefers the extension when importable.
"""

from __future__ import annotations

import os

from . import _kernel_py

_choice = os.environ.get("FORESTVOL_KERNEL", "auto").lower()

if _choice == "py":
    _impl = _kernel_py
elif _choice == "c":
    from . import _kernel as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

BACKEND: str = _impl.BACKEND
canon_key = _impl.canon_key
poset_integral_packed = _impl.poset_integral_packed
