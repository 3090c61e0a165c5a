"""Select the geometry kernel backend at import time.

The compiled extension is preferred when importable; otherwise the
pure-Python twin takes over transparently.  ``FACEARTIFACTS_KERNELS``
forces the choice: ``c`` (fail hard if the extension is missing) or
``python``.
"""

import os

from faceartifacts.geometry import _pykernels

_FORCED = os.environ.get("FACEARTIFACTS_KERNELS", "").strip().lower() or None

if _FORCED not in (None, "c", "python"):
    raise ImportError(
        f"FACEARTIFACTS_KERNELS must be 'c' or 'python', got {_FORCED!r}"
    )

if _FORCED == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from faceartifacts.geometry import _ckernels as kernels

        BACKEND = "c"
    except ImportError:
        if _FORCED == "c":
            raise
        kernels = _pykernels
        BACKEND = "python"


def active_backend():
    """Name of the kernel backend in use: 'c' or 'python'."""
    return BACKEND
