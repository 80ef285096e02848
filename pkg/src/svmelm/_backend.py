"""Pick the compiled inner loops when available, else the numpy fallback.

Set ``SVMELM_PURE=1`` to force the fallback.
"""

import os

from svmelm import _kernels_py

if os.environ.get("SVMELM_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    NAME = "python"
else:
    try:
        from svmelm import _ext as _impl
        NAME = "compiled"
    except ImportError:
        _impl = _kernels_py
        NAME = "python"

sq_dists = _impl.sq_dists
smo = _impl.smo
