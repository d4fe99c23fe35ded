"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback.  Set ``LAYERFORGE_BACKEND=python`` (or ``c``) to force one, or
pass ``backend=`` to the public solver entry points.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_ALIASES = {
    "c": "c", "compiled": "c", "cython": "c",
    "python": "python", "py": "python", "pure": "python",
}


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels_c  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _kernels_c


def get_backend(name: str | None = None) -> ModuleType:
    """Resolve a kernel module by name; None means the process default."""
    if name is None:
        return DEFAULT
    key = _ALIASES.get(name.strip().lower())
    if key == "python":
        return _kernels_py
    if key == "c":
        compiled = _load_compiled()
        if compiled is None:
            raise ImportError("compiled kernel backend requested but not built")
        return compiled
    raise ValueError(f"unknown backend {name!r} (use 'c' or 'python')")


def available_backends() -> tuple[str, ...]:
    return ("c", "python") if _load_compiled() is not None else ("python",)


_env = os.environ.get("LAYERFORGE_BACKEND")
if _env:
    DEFAULT = get_backend(_env)
else:
    DEFAULT = _load_compiled() or _kernels_py

ACTIVE_NAME: str = DEFAULT.BACKEND_NAME
