# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cyclic Jacobi diagonalizer for Hermitian matrices.

Mirrors jacobi_py.diagonalize_hermitian rotation for rotation; the two
backends must stay interchangeable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def diagonalize_hermitian(a, double off_target, int max_sweeps):
    """Compiled twin of jacobi_py.diagonalize_hermitian."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] m = np.array(a, dtype=np.complex128)
    cdef int n = m.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v = np.eye(n, dtype=np.complex128)
    if n == 1:
        w[0] = m[0, 0].real
        return w, v, 0.0, 0

    cdef double off = _offdiag_norm(m, n)
    cdef int sweeps = 0
    cdef int p, q, i
    cdef double ab, app, aqq, tau, t, c, skip
    cdef double complex b, u, s, xp, xq
    skip = 1e-2 * off_target / n
    while off > off_target and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = m[p, q]
                ab = abs(b)
                if ab <= skip:
                    continue
                u = b / ab
                app = m[p, p].real
                aqq = m[q, q].real
                tau = (app - aqq) / (2.0 * ab)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = (t * c) * u.conjugate()

                for i in range(n):
                    xp = m[i, p]
                    xq = m[i, q]
                    m[i, p] = c * xp + s * xq
                    m[i, q] = -s.conjugate() * xp + c * xq
                for i in range(n):
                    xp = m[p, i]
                    xq = m[q, i]
                    m[p, i] = c * xp + s.conjugate() * xq
                    m[q, i] = -s * xp + c * xq
                for i in range(n):
                    xp = v[i, p]
                    xq = v[i, q]
                    v[i, p] = c * xp + s * xq
                    v[i, q] = -s.conjugate() * xp + c * xq

                m[p, q] = 0.0
                m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
        sweeps += 1
        off = _offdiag_norm(m, n)

    for i in range(n):
        w[i] = m[i, i].real
    return w, v, off, sweeps


cdef double _offdiag_norm(cnp.complex128_t[:, :] m, int n):
    cdef double acc = 0.0
    cdef int i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = m[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)
