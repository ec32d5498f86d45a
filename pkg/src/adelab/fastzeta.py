"""Backend selection for the double-precision scan kernel.

The compiled ``_zeta_fast`` extension is used when it was built; otherwise the
pure-Python module with the same interface.  Setting ``ADELAB_PURE_PYTHON=1``
forces the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("ADELAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._zeta_fast import zeta_double, zeta_line_jets
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._zeta_fast_py import zeta_double, zeta_line_jets

__all__ = ["BACKEND", "zeta_double", "zeta_line_jets"]
