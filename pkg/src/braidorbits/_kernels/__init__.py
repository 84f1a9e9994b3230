"""Kernel backend selection.

The numba backend is used when numba imports cleanly, unless the environment
variable ``BRAIDORBITS_NO_NUMBA`` is set to a non-empty value other than
``0``; then the vectorised numpy fallback is used.  Both backends expose the
same functions and must return identical results.
"""
from __future__ import annotations

import importlib
import logging
import os
from types import ModuleType

log = logging.getLogger(__name__)

KERNELS = ("lookup", "mul", "conj", "centralizer_mask", "class_bfs",
           "class_mult_counts", "canon_rows")


def _numba_disabled() -> bool:
    flag = os.environ.get("BRAIDORBITS_NO_NUMBA", "")
    return flag not in ("", "0")


def get_backend(name: str) -> ModuleType:
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    return importlib.import_module(f"{__name__}._{name}")


def _select() -> tuple[str, ModuleType]:
    if _numba_disabled():
        return "numpy", get_backend("numpy")
    try:
        return "numba", get_backend("numba")
    except ImportError as exc:  # pragma: no cover - numba is a hard dependency
        log.warning("numba unavailable (%s); using numpy kernels", exc)
        return "numpy", get_backend("numpy")


BACKEND, _impl = _select()

lookup = _impl.lookup
mul = _impl.mul
conj = _impl.conj
centralizer_mask = _impl.centralizer_mask
class_bfs = _impl.class_bfs
class_mult_counts = _impl.class_mult_counts
canon_rows = _impl.canon_rows
