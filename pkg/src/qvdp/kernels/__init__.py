"""RK4 Lindblad propagation kernels.

The compiled Cython extension is used when it imported successfully; the
pure-NumPy implementation is the fallback.  Selection happens once, at
import time.  Set ``QVDP_KERNEL=python`` to force the fallback (e.g. for
benchmarking) or ``QVDP_KERNEL=cython`` to fail loudly if the extension is
missing.
"""

import os

from . import _pure

_compiled = None
_requested = os.environ.get("QVDP_KERNEL", "").lower()
if _requested != "python":
    try:
        from . import _cy as _compiled
    except ImportError:
        _compiled = None
if _requested == "cython" and _compiled is None:
    raise ImportError("QVDP_KERNEL=cython set but the compiled kernel is not importable")

_impl = _compiled if _compiled is not None else _pure
BACKEND = "cython" if _compiled is not None else "python"

rk4_lindblad = _impl.rk4_lindblad


def available_backends():
    out = {"python": _pure}
    if _compiled is not None:
        out["cython"] = _compiled
    return out
