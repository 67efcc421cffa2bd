"""Hermitian eigensolver kernel selection.

The cyclic Jacobi diagonalizer is the hot loop of the package: every
decomposition (eigh, SVD, polar, square root, pseudoinverse, operator
spectra) funnels through it. The compiled extension is preferred when it
has been built; otherwise the pure Python sweep takes over transparently.
Set MODFRAME_PURE_PYTHON=1 to force the fallback, e.g. for benchmarking.
"""

import os

from . import jacobi_py

if os.environ.get("MODFRAME_PURE_PYTHON"):
    _impl = jacobi_py
    BACKEND = "python"
else:
    try:
        from . import _jacobi as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = jacobi_py
        BACKEND = "python"

diagonalize_hermitian = _impl.diagonalize_hermitian

__all__ = ["BACKEND", "diagonalize_hermitian", "jacobi_py"]
