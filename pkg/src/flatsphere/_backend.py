"""Select the compiled kernels when available, else the NumPy fallback.

Set ``FLATSPHERE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

_impl = _pykernels
BACKEND = "python"

if not os.environ.get("FLATSPHERE_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

zonal_series = _impl.zonal_series
flat_contract = _impl.flat_contract
