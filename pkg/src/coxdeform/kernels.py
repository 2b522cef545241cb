"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``COXDEFORM_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("COXDEFORM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

filter_dual_graphs = _impl.filter_dual_graphs
greedy_order = _impl.greedy_order
count_orderable = _impl.count_orderable
is_three_connected = _impl.is_three_connected

__all__ = ["BACKEND", "filter_dual_graphs", "greedy_order", "count_orderable", "is_three_connected"]
