"""Pick the compiled kernels when available, else the numpy fallback."""

from __future__ import annotations

import os

from . import _pycore

BACKEND = "python"
core = _pycore

if os.environ.get("SYMCALC_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ccore as core  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        core = _pycore

poly_eval_grad = core.poly_eval_grad
symm_table = core.symm_table
