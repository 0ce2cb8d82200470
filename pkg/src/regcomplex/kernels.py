"""Kernel backend selection.

The compiled extension is used when it was built; set ``REGCOMPLEX_PURE=1``
to force the numpy fallback.
"""

import os

from . import _fallback

if os.environ.get("REGCOMPLEX_PURE"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = _impl.BACKEND
aggregate = _impl.aggregate
fitness_iterate = _impl.fitness_iterate


def backends():
    """All importable backends, by name."""
    found = {"python": _fallback}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
