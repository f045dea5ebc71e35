"""Selects the compiled kernels when available, else the pure-Python ones.

Set ``KLEINROUTE_BACKEND=python`` to force the fallback.
"""

import os

from . import _fallback

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = {"python": _fallback}
if _kernels is not None:
    BACKENDS["cython"] = _kernels

DEFAULT = os.environ.get("KLEINROUTE_BACKEND") or ("cython" if _kernels is not None else "python")
if DEFAULT not in BACKENDS:
    raise ImportError(f"kleinroute backend {DEFAULT!r} is not available")


def get(name=None):
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None
