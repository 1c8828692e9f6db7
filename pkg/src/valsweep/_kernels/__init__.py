"""Kernel backend selection.

The compiled Cython extension is preferred; the numpy fallback is used
when it is missing or when ``VALSWEEP_PURE_PYTHON=1`` is set.  Both
backends are bit-identical, so the choice never changes results.
"""

import os

from . import _pykernels

if os.environ.get("VALSWEEP_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _cykernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

gini_split_scan = _impl.gini_split_scan
svm_dual_cd = _impl.svm_dual_cd
hist_build = _impl.hist_build
hist_best_split = _impl.hist_best_split

__all__ = ["BACKEND", "gini_split_scan", "hist_build", "hist_best_split",
           "svm_dual_cd", "_pykernels"]
