"""Selects the compiled reduction kernel, falling back to pure Python.

Set ``QUADTOPE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _reduce_py

BACKEND = "python"
reduce_columns = _reduce_py.reduce_columns

if os.environ.get("QUADTOPE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._reduce import reduce_columns  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

python_reduce_columns = _reduce_py.reduce_columns
