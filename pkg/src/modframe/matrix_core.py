"""Dense complex-matrix kernel: eigh, SVD, polar, sqrt, pinv, norms.

Everything here works on plain complex128 ndarrays and carries no frame
semantics. The Hermitian eigensolver is the cyclic Jacobi sweep from
``modframe._kernels`` (compiled when built, pure Python otherwise); the
SVD is derived from it by diagonalizing ``m* m`` and correcting the left
factor, and the remaining decompositions are thin compositions on top.

Conventions
-----------
* matrices are 2-D ``complex128`` arrays, row-major;
* ``op_norm`` is the largest singular value, ``hs_norm`` the Frobenius norm;
* eigenvalues in ``[-tol, 0)`` are treated as zero by the positive-part
  routines, anything below ``-tol`` raises ``NotPositive``.
"""

from __future__ import annotations

import numpy as np

from ._kernels import diagonalize_hermitian
from .errors import NoConvergence, NotHermitian, NotPositive

MAX_SWEEPS = 60

__all__ = [
    "as_matrix",
    "eig_hermitian",
    "svd",
    "polar",
    "sqrt_psd",
    "pinv",
    "support_projection",
    "op_norm",
    "hs_norm",
    "hermitian_tol",
]


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


def hermitian_tol(m: np.ndarray) -> float:
    """Default symmetry tolerance, two orders above double noise at desk scale.

    Scaled by the Frobenius norm, which brackets the operator norm at these
    sizes and avoids a decomposition just to pick a tolerance.
    """
    return 1e-10 * (1.0 + float(np.linalg.norm(m)))


def eig_hermitian(m, tol: float | None = None):
    """Diagonalize a Hermitian matrix.

    Returns ``(w, u)`` with ``w`` ascending real eigenvalues and ``u`` unitary,
    ``m = u @ diag(w) @ u*``. Raises NotHermitian when the symmetry defect
    exceeds ``tol`` and NoConvergence if the sweep budget runs out.
    """
    a = as_matrix(m)
    n, nc = a.shape
    if n != nc:
        raise ValueError("eig_hermitian needs a square matrix")
    if tol is None:
        tol = hermitian_tol(a)
    defect = np.abs(a - a.conj().T).max() if n else 0.0
    if defect > tol:
        raise NotHermitian(f"symmetry defect {defect:.3e} exceeds tol {tol:.3e}")
    h = (a + a.conj().T) / 2.0

    scale = float(np.linalg.norm(h))
    off_target = 1e-15 * max(scale, 1.0)
    w, u, off, sweeps = diagonalize_hermitian(h, off_target, MAX_SWEEPS)
    if off > off_target and sweeps >= MAX_SWEEPS:
        raise NoConvergence(f"off-diagonal norm {off:.3e} after {sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(u[:, order])


def svd(m):
    """Singular value decomposition built on the Hermitian eigensolver.

    Returns ``(u, s, v)`` with ``s`` descending of length min(rows, cols),
    ``u``/``v`` with orthonormal columns, and ``m = u @ diag(s) @ v*``.
    The right factor comes from diagonalizing ``m* m``; singular values are
    then re-measured as ``||m v_i||`` and the left factor re-orthonormalized,
    which keeps the reconstruction error at eigensolver level.
    """
    a = as_matrix(m)
    r, c = a.shape
    k = min(r, c)
    w, vfull = eig_hermitian(a.conj().T @ a, tol=None)
    order = np.argsort(-w, kind="stable")[:k]
    v = np.ascontiguousarray(vfull[:, order])

    img = a @ v
    s = np.linalg.norm(img, axis=0)
    smax = s.max(initial=0.0)
    cutoff = 1e-13 * max(r, c) * smax
    u = np.zeros((r, k), dtype=np.complex128)
    filled = 0
    for i in range(k):
        if s[i] > cutoff:
            col = img[:, i]
            # modified Gram-Schmidt against the columns already placed
            for j in range(filled):
                col = col - (u[:, j].conj() @ col) * u[:, j]
            nrm = np.linalg.norm(col)
            u[:, i] = col / nrm
            filled += 1
        else:
            s[i] = 0.0
    if filled < k:
        u = _complete_columns(u, s > 0)

    order2 = np.argsort(-s, kind="stable")
    return u[:, order2], s[order2], v[:, order2]


def _complete_columns(u, mask):
    """Fill the zero columns of u with an orthonormal completion."""
    r, k = u.shape
    basis = [u[:, i] for i in range(k) if mask[i]]
    empty = [i for i in range(k) if not mask[i]]
    cand = 0
    for i in empty:
        while True:
            if cand >= r:
                raise NoConvergence("failed to complete an orthonormal system")
            e = np.zeros(r, dtype=np.complex128)
            e[cand] = 1.0
            cand += 1
            for b in basis:
                e = e - (b.conj() @ e) * b
            nrm = np.linalg.norm(e)
            if nrm > 0.5 / np.sqrt(r):
                e = e / nrm
                u[:, i] = e
                basis.append(e)
                break
    return u


def polar(m, rank_tol: float | None = None):
    """Polar factorization ``m = w @ p`` of a square matrix.

    ``p = (m* m)^{1/2}`` is positive semidefinite and ``w`` is the partial
    isometry supported on the range of ``p`` (``w* w`` equals the support
    projection of ``p``); for invertible ``m`` the factor ``w`` is unitary.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("polar expects a square matrix")
    u, s, v = svd(a)
    if rank_tol is None:
        cutoff = 1e-12 * s.max(initial=0.0)
    else:
        cutoff = rank_tol * s.max(initial=0.0)
    keep = s > cutoff
    w = u[:, keep] @ v[:, keep].conj().T
    p = (v * s) @ v.conj().T
    p = (p + p.conj().T) / 2.0
    return w, p


def sqrt_psd(m, tol: float | None = None):
    """Positive square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; below ``-tol`` raises
    NotPositive.
    """
    a = as_matrix(m)
    w, u = eig_hermitian(a)
    if tol is None:
        tol = 1e-9 * (1.0 + (abs(w[0]) if len(w) else 0.0) + (abs(w[-1]) if len(w) else 0.0))
    if len(w) and w[0] < -tol:
        raise NotPositive(f"eigenvalue {w[0]:.3e} below -tol ({-tol:.3e})")
    w = np.clip(w, 0.0, None)
    root = (u * np.sqrt(w)) @ u.conj().T
    return (root + root.conj().T) / 2.0


def pinv(m, rank_tol: float | None = None):
    """Moore-Penrose inverse via the SVD; rank cut at ``rank_tol * s_max``."""
    a = as_matrix(m)
    u, s, v = svd(a)
    if rank_tol is None:
        rank_tol = 1e-9
    cutoff = rank_tol * s.max(initial=0.0)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (v * inv) @ u.conj().T


def support_projection(m, rank_tol: float | None = None):
    """Orthogonal projection onto the range of a Hermitian PSD matrix."""
    a = as_matrix(m)
    w, u = eig_hermitian(a)
    if rank_tol is None:
        rank_tol = 1e-9
    cutoff = rank_tol * max(abs(w[-1]) if len(w) else 0.0, 0.0)
    keep = w > max(cutoff, 0.0)
    ur = u[:, keep]
    p = ur @ ur.conj().T
    return (p + p.conj().T) / 2.0


def op_norm(m) -> float:
    """Largest singular value."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return 0.0
    b = a / scale
    # sigma_max^2 is the top eigenvalue of the smaller Gram matrix
    if b.shape[0] <= b.shape[1]:
        g = b @ b.conj().T
    else:
        g = b.conj().T @ b
    g = (g + g.conj().T) / 2.0
    w, _ = eig_hermitian(g, tol=hermitian_tol(g))
    top = max(w[-1], 0.0) if len(w) else 0.0
    return scale * float(np.sqrt(top))


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm, equal to sqrt(sum of squared singular values)."""
    return float(np.linalg.norm(as_matrix(m)))
