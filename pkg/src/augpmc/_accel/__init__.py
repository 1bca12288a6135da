"""Backend selection for the numerical hot kernels.

The compiled Cython extension is used when present; otherwise the numpy
fallback takes over with identical contracts.  Set ``AUGPMC_PURE_PYTHON=1``
to force the fallback (used by the benchmark and the backend-parity
tests).  ``kernels`` is a module-level binding so callers resolve the
backend once per attribute access, which also lets the benchmark swap
backends in-process.
"""

import os

from . import _kernels_py

if os.environ.get("AUGPMC_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def available_backends():
    """Return the importable kernel modules, compiled one first."""
    backends = []
    try:
        from . import _kernels

        backends.append(_kernels)
    except ImportError:
        pass
    backends.append(_kernels_py)
    return backends
