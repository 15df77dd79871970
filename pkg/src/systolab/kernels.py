"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise.

Set ``SYSTOLAB_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

BACKEND = "python"

if not os.environ.get("SYSTOLAB_PURE_PYTHON"):
    try:
        from ._kernels import line_roots, sieve_line  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from ._kernels_py import line_roots, sieve_line

__all__ = ["BACKEND", "line_roots", "sieve_line"]
