"""Backend selection for the hot loops.

The compiled extension is used when it imports; ``ABELCOVER_PURE=1`` forces
the pure-Python implementation. Both expose ``dim_sg_raw``, ``scan_shard``
and ``hw_terms`` with identical results.
"""

import os

from . import _kernels_py as pure

compiled = None
if os.environ.get("ABELCOVER_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

dim_sg_raw = _impl.dim_sg_raw
scan_shard = _impl.scan_shard
hw_terms = _impl.hw_terms
decode = pure.decode
encode = pure.encode
