"""Seeded random generators for matrices, algebra elements and frames.

Everything takes a ``numpy.random.Generator`` so that verification runs are
reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from . import matrix_core as mc
from . import module_space as ms
from .cstar import AlgebraElement, AlgebraShape
from .frames import Frame
from .module_space import ModuleOperator, ModuleVector, SubmoduleDescriptor

__all__ = [
    "complex_matrix",
    "hermitian",
    "psd",
    "unitary",
    "partial_isometry_matrix",
    "algebra_element",
    "module_vector",
    "module_operator",
    "module_unitary",
    "module_partial_isometry",
    "module_frame",
    "normalized_tight_frame",
    "riesz_basis",
    "resolution_blocks",
    "hilbert_frame_vectors",
]


def complex_matrix(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def hermitian(rng, n):
    a = complex_matrix(rng, n, n)
    return (a + a.conj().T) / 2.0


def psd(rng, n, rank=None):
    r = n if rank is None else rank
    a = complex_matrix(rng, n, r)
    return a @ a.conj().T


def unitary(rng, n):
    q, r = np.linalg.qr(complex_matrix(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def partial_isometry_matrix(rng, rows, cols, rank):
    """rows x cols matrix w with w w* w = w and the given rank."""
    u = unitary(rng, rows)[:, :rank]
    v = unitary(rng, cols)[:, :rank]
    return u @ v.conj().T


def algebra_element(rng, shape) -> AlgebraElement:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    return AlgebraElement(shape, [complex_matrix(rng, k, k) for k in shape.blocks])


def module_vector(rng, shape, n) -> ModuleVector:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    return ModuleVector(shape, [algebra_element(rng, shape) for _ in range(n)])


def module_operator(rng, shape, n, m=None) -> ModuleOperator:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    m = n if m is None else m
    flats = [complex_matrix(rng, n * k, m * k) for k in shape.blocks]
    return ms.operator_from_flats(flats, shape, n, m)


def module_unitary(rng, shape, n) -> ModuleOperator:
    """Unitary operator on A^n (blockwise Haar unitary flats)."""
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    flats = [unitary(rng, n * k) for k in shape.blocks]
    return ms.operator_from_flats(flats, shape, n, n)


def module_partial_isometry(rng, shape, n, ranks=None) -> ModuleOperator:
    """Partial isometry on A^n; ``ranks`` fixes the flat rank per block."""
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    flats = []
    for bi, k in enumerate(shape.blocks):
        full = n * k
        r = ranks[bi] if ranks is not None else int(rng.integers(1, full + 1))
        flats.append(partial_isometry_matrix(rng, full, full, r))
    return ms.operator_from_flats(flats, shape, n, n)


def module_frame(rng, shape, n, k, max_condition=1e6) -> Frame:
    """Random frame of the full module A^n with k >= n elements.

    Draws are rejected until the Gram spectrum is safely away from zero so
    that 1e-9 reconstruction checks stay meaningful.
    """
    if k < n:
        raise ValueError("a frame of A^n needs at least n elements")
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    module = SubmoduleDescriptor(shape, n)
    while True:
        elements = [module_vector(rng, shape, n) for _ in range(k)]
        frame = Frame(module, elements)
        spectra = []
        ok = True
        for g in frame.gram_flats():
            w, _ = mc.eig_hermitian(g)
            spectra.extend(w.tolist())
            if w[0] <= w[-1] / max_condition:
                ok = False
                break
        if ok and min(spectra) > 0:
            return frame


def normalized_tight_frame(rng, shape, n, k, nonzero=True) -> Frame:
    """Normalized tight frame of the full module A^n with k >= n elements.

    Rows of a co-isometry V: A^k -> A^n (flat blocks with orthonormal
    columns), so G = V* V = identity.
    """
    if k < n:
        raise ValueError("need k >= n elements to generate A^n")
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    module = SubmoduleDescriptor(shape, n)
    while True:
        elements = []
        flats_per_block = []
        for bi, kb in enumerate(shape.blocks):
            v = unitary(rng, k * kb)[:, : n * kb]
            flats_per_block.append(v)
        for j in range(k):
            coords_flats = [f[j * kb:(j + 1) * kb, :] for f, kb in zip(flats_per_block, shape.blocks)]
            elements.append(ms.vector_from_flats(coords_flats, shape, n))
        if nonzero and any(ms.vector_norm(x) < 1e-6 for x in elements):
            continue
        return Frame(module, elements)


def riesz_basis(rng, shape, n, max_condition=100.0) -> Frame:
    """Riesz basis of A^n: image of the standard basis under a controlled-
    condition invertible operator."""
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    flats = []
    for k in shape.blocks:
        m = n * k
        u = unitary(rng, m)
        v = unitary(rng, m)
        smin = 1.0 / np.sqrt(max_condition)
        smax = np.sqrt(max_condition)
        s = np.exp(rng.uniform(np.log(smin), np.log(smax), size=m))
        flats.append((u * s) @ v.conj().T)
    op = ms.operator_from_flats(flats, shape, n, n)
    module = SubmoduleDescriptor(shape, n)
    elements = [ms.apply(op, ms.basis_vector(shape, n, j)) for j in range(n)]
    return Frame(module, elements)


def resolution_blocks(rng, d, k):
    """k matrices b_i of size d x d with sum b_i* b_i = identity."""
    q = unitary(rng, k * d)[:, :d]
    return [np.ascontiguousarray(q[i * d:(i + 1) * d, :]) for i in range(k)]


def hilbert_frame_vectors(rng, n, k, max_condition=1e4):
    """k x n complex array whose rows form a frame of C^n with a bounded
    condition number of the frame operator."""
    if k < n:
        raise ValueError("need k >= n vectors to span C^n")
    while True:
        x = complex_matrix(rng, k, n)
        g = x.conj().T @ x
        w = np.linalg.eigvalsh((g + g.conj().T) / 2.0)
        if w[0] > 0 and w[-1] / w[0] <= max_condition:
            return x
