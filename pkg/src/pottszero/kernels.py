"""Select the compiled kernels when available, else the pure-Python ones.

Set ``POTTS_PURE_PYTHON=1`` to force the fallback (used by the cross-backend
tests and the benchmark).
"""

import os

from . import _pykernels

pure = _pykernels

if os.environ.get("POTTS_PURE_PYTHON", "") not in ("", "0"):
    active = _pykernels
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None
        active = _pykernels
    else:
        active = compiled

BACKEND = active.KERNEL_BACKEND

colouring_buckets = active.colouring_buckets
colouring_hist = active.colouring_hist
cluster_buckets = active.cluster_buckets
cluster_hist = active.cluster_hist
connected_clusters = active.connected_clusters
canonical_code = active.canonical_code
