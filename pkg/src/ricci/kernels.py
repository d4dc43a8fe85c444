"""Kernel selection.

The compiled extension is preferred; the pure-Python module is used when the
extension is missing or ``RICCI_PURE_PYTHON`` is set to a non-empty value.
``BACKEND`` names the active implementation.
"""

import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("RICCI_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

if compiled_kernels is not None:
    _impl = compiled_kernels
    BACKEND = "cython"
else:
    _impl = python_kernels
    BACKEND = "python"

min_cost_transport = _impl.min_cost_transport
local_weight_matrix = _impl.local_weight_matrix
