"""Selects the compiled kernels when built, else the pure-Python fallback.

Set DIST_PURE_PYTHON=1 to force the fallback.
"""
import os

if os.environ.get("DIST_PURE_PYTHON"):
    from ._kernels_py import (COMPILED, find_separating_pair, orbit_count,  # noqa: F401
                              orbit_labels, perm_orders)
else:
    try:
        from ._kernels import (COMPILED, find_separating_pair, orbit_count,  # noqa: F401
                               orbit_labels, perm_orders)
    except ImportError:
        from ._kernels_py import (COMPILED, find_separating_pair, orbit_count,  # noqa: F401
                                  orbit_labels, perm_orders)
