"""Backend selection for the hot arithmetic loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module takes over.  ``AFFQ_PURE_PYTHON=1`` forces the
fallback even when the extension is importable.
"""

import os

from . import _pykernels

if os.environ.get("AFFQ_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
mono_mul = _impl.mono_mul
mono_pow = _impl.mono_pow
is_dominant_key = _impl.is_dominant_key
poly_mul = _impl.poly_mul
dominant_product_terms = _impl.dominant_product_terms
tuple_sum = _impl.tuple_sum


def backends():
    """Every importable backend module, pure Python first."""
    out = [_pykernels]
    try:
        from . import _ckernels
        out.append(_ckernels)
    except ImportError:
        pass
    return out
