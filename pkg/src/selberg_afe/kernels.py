"""Backend selection for the numerical inner loops.

The compiled extension ``_kernels`` is used when importable; otherwise the
numpy fallback in ``_kernels_py`` is used.  Setting the environment
variable ``SELBERG_AFE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("SELBERG_AFE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def backends() -> dict:
    """All importable kernel modules keyed by backend name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled
    except ImportError:
        return out
    out["cython"] = _compiled
    return out


power_sums = _impl.power_sums
dirichlet_sums = _impl.dirichlet_sums
loggamma = _impl.loggamma
