"""Integration kernel selection.

The compiled extension is preferred when it imported cleanly; the
pure-numpy fallback is bit-compatible in contract (not in rounding) and is
forced by setting QNET_PURE_PY=1 in the environment.
"""
import os

from . import _rk4_py

try:
    from . import _rk4 as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("QNET_PURE_PY"):
    _impl = _compiled
    BACKEND = "compiled"
else:
    _impl = _rk4_py
    BACKEND = "python"

HAVE_COMPILED = _compiled is not None
rk4_fixed_point = _impl.rk4_fixed_point


def available_backends():
    """Mapping of backend name to its rk4_fixed_point implementation."""
    out = {"python": _rk4_py.rk4_fixed_point}
    if _compiled is not None:
        out["compiled"] = _compiled.rk4_fixed_point
    return out
