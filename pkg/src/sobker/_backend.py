"""Select the compiled core when available, else the numpy fallback.

Set ``SOBKER_PURE=1`` to force the fallback. ``SOBKER_THREADS`` caps the
worker count of the compiled core (0 means the OpenMP default).
"""
import os

if os.environ.get("SOBKER_PURE", "0") == "1":
    from sobker import _pycore as core
else:
    try:
        from sobker import _core as core
    except ImportError:  # extension not built
        from sobker import _pycore as core

core.set_num_threads(int(os.environ.get("SOBKER_THREADS", "0") or 0))

BACKEND = core.NAME

__all__ = ["core", "BACKEND"]
