"""Pure Python cyclic Jacobi diagonalizer for Hermitian matrices.

Same sweep as the compiled extension, written with numpy row/column
updates so the fallback stays usable at desk scale.
"""

import numpy as np


def diagonalize_hermitian(a, off_target, max_sweeps):
    """Run cyclic Jacobi sweeps on a Hermitian matrix.

    Parameters
    ----------
    a : (n, n) complex128 ndarray, Hermitian. Not modified.
    off_target : absolute Frobenius norm of the off-diagonal part at which
        the iteration stops.
    max_sweeps : sweep budget.

    Returns ``(w, v, off, sweeps)`` with ``a ~ v @ diag(w) @ v.conj().T``;
    ``w`` is unsorted, ``off`` is the achieved off-diagonal norm. Convergence
    is the caller's check: ``off <= off_target``.
    """
    n = a.shape[0]
    w = np.empty(n, dtype=np.float64)
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        w[0] = a[0, 0].real
        return w, v, 0.0, 0

    m = np.array(a, dtype=np.complex128)
    off = _offdiag_norm(m)
    sweeps = 0
    while off > off_target and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = m[p, q]
                ab = abs(b)
                if ab <= 1e-2 * off_target / n:
                    continue
                u = b / ab
                app = m[p, p].real
                aqq = m[q, q].real
                tau = (app - aqq) / (2.0 * ab)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = (t * c) * np.conj(u)

                # columns: m <- m @ J, J = [[c, -conj(s)], [s, c]] on (p, q)
                colp = m[:, p].copy()
                colq = m[:, q]
                m[:, p] = c * colp + s * colq
                m[:, q] = -np.conj(s) * colp + c * colq
                # rows: m <- J^H @ m
                rowp = m[p, :].copy()
                rowq = m[q, :]
                m[p, :] = c * rowp + np.conj(s) * rowq
                m[q, :] = -s * rowp + c * rowq

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp + s * vq
                v[:, q] = -np.conj(s) * vp + c * vq

                m[p, q] = 0.0
                m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
        sweeps += 1
        off = _offdiag_norm(m)

    w[:] = np.diag(m).real
    return w, v, off, sweeps


def _offdiag_norm(m):
    d = m - np.diag(np.diag(m))
    return float(np.linalg.norm(d))
