"""Backend selection for the hot kernel evaluations.

The compiled Cython extension is preferred when importable; otherwise the
numpy fallback is used. GKDE_BACKEND=python|compiled forces a choice
(forcing `compiled` raises if the extension is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("GKDE_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from . import _corex as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_np as _impl
elif _requested in ("compiled", "c", "cython"):
    from . import _corex as _impl  # type: ignore[attr-defined]
elif _requested in ("python", "numpy", "py"):
    from . import _core_np as _impl
else:
    raise ImportError(
        f"unknown GKDE_BACKEND={_requested!r}; use 'auto', 'compiled' or 'python'"
    )

BACKEND_NAME: str = _impl.BACKEND_NAME
kernel_sum = _impl.kernel_sum
kernel_pdf_values = _impl.kernel_pdf_values


def active_backend() -> str:
    """Name of the backend selected at import time."""
    return BACKEND_NAME
