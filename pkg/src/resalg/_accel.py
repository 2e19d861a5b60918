"""Optional numba acceleration.

Kernels in :mod:`resalg._kernels` are written in a loop style that numba can
compile.  Setting ``RESALG_DISABLE_NUMBA=1`` (or running without numba
installed) selects the pure numpy/python path instead.  The choice is made
once, at import time.
"""
from __future__ import annotations

import logging
import os

log = logging.getLogger(__name__)


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


DISABLED = _flag("RESALG_DISABLE_NUMBA")

numba = None
if not DISABLED:
    try:
        import numba  # noqa: F811
    except ImportError:  # pragma: no cover - depends on environment
        log.info("numba not importable; using the pure numpy path")

USE_NUMBA = numba is not None


def njit(func):
    """Compile ``func`` with numba when acceleration is enabled."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def worker_count() -> int:
    """Worker cap from ``RESALG_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("RESALG_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        log.warning("ignoring malformed RESALG_THREADS=%r", raw)
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n
