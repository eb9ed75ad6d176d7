"""Backend selection for the inner loops.

The compiled ``_native`` extension is used when it imports; otherwise the
numpy fallback. Set ``DISTQC_PURE=1`` to force the fallback.
"""
import os

from . import _fallback

if os.environ.get("DISTQC_PURE", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "native" if _impl is not _fallback else "python"

apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
prob_one = _impl.prob_one
diag_prob_one = _impl.diag_prob_one
zero_branch = _impl.zero_branch
dephase = _impl.dephase
scan_rows = _impl.scan_rows
