"""Span kernel selection: compiled extension when importable, else Python.

Set ``NPUKR_KERNEL=python`` or ``NPUKR_KERNEL=compiled`` to force a backend;
forcing ``compiled`` raises when the extension is missing.
"""

from __future__ import annotations

import logging
import os

from . import _kernel_py

logger = logging.getLogger(__name__)


def _select():
    forced = os.environ.get("NPUKR_KERNEL", "").strip().lower()
    if forced == "python":
        return _kernel_py, "python"
    try:
        from . import _kernel  # type: ignore[attr-defined]

        return _kernel, "compiled"
    except ImportError:
        if forced == "compiled":
            raise
        logger.debug("compiled kernel unavailable, using the Python fallback")
        return _kernel_py, "python"


_impl, _name = _select()

extract_spans = _impl.extract_spans


def backend_name() -> str:
    return _name
