"""Hot-loop kernels with a compiled backend and a numpy fallback.

The Cython extension ``_ckernels`` is used when it imports; otherwise the
numpy versions in ``_pykernels`` are.  Setting ``HHBOUNDS_PURE_PYTHON=1``
forces the fallback.  Both backends expose the same three functions.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("HHBOUNDS_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels, "python"
    try:
        from . import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


_impl, BACKEND = _load()

dyadic_sum = _impl.dyadic_sum
phi_blocks = _impl.phi_blocks
clipped_pair_sum = _impl.clipped_pair_sum


def backend(name: str) -> ModuleType:
    """Return a specific backend module (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("cython")
    return names
