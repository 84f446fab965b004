"""Pick the tree-building kernel at import time.

Set ``DISCOMPLEX_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _tree_py

if os.environ.get("DISCOMPLEX_PURE_PYTHON", "") not in ("", "0"):
    _impl = _tree_py
else:
    try:
        from . import _tree_ext as _impl
    except ImportError:
        _impl = _tree_py

BACKEND = "cython" if _impl is not _tree_py else "python"
build_tree = _impl.build_tree
