"""Training-kernel selection.

The compiled extension is preferred; the pure-Python kernel is the
fallback.  Set PHILOTOPE_PURE=1 to force the fallback (used by the
benchmark and the kernel-equivalence tests).
"""

from __future__ import annotations

import os

if os.environ.get("PHILOTOPE_PURE"):
    from . import _sgns_py as _impl
else:
    try:
        from . import _sgns_c as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _sgns_py as _impl  # type: ignore[no-redef]

train_epoch = _impl.train_epoch
KERNEL_NAME: str = _impl.KERNEL_NAME
