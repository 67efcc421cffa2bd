"""Finite-dimensional C*-algebras: direct sums of full matrix blocks.

An algebra is described by its shape, the tuple of block sizes
``(k_1, ..., k_m)``; its elements are tuples of ``k_i x k_i`` complex
blocks. Shape ``(1,)`` recovers the scalars, so everything downstream that
works over an arbitrary shape also covers ordinary Hilbert spaces.

Positivity, order, carrier projections and Moore-Penrose inverses are all
computed blockwise through :mod:`modframe.matrix_core`. Elements are
immutable; the block arrays are made read-only at construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .errors import NotHermitian, NotPositive, ShapeMismatch

__all__ = [
    "AlgebraShape",
    "AlgebraElement",
    "unit",
    "zero",
    "mul",
    "adjoint",
    "norm",
    "is_positive",
    "leq",
    "carrier_projection",
    "mp_inverse_matrix",
    "block_matrix_to_flats",
    "flats_to_block_matrix",
]


@dataclass(frozen=True)
class AlgebraShape:
    """Block sizes (k_1, ..., k_m) of a direct sum of matrix algebras."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(k) for k in self.blocks)
        if not blocks or any(k <= 0 for k in blocks):
            raise ValueError("shape needs a non-empty tuple of positive block sizes")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        """Complex dimension sum(k_i^2)."""
        return sum(k * k for k in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


class AlgebraElement:
    """One element of the algebra: a read-only block per summand."""

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: AlgebraShape, blocks):
        if not isinstance(shape, AlgebraShape):
            shape = AlgebraShape(tuple(shape))
        mats = []
        if len(blocks) != len(shape.blocks):
            raise ShapeMismatch(f"expected {len(shape.blocks)} blocks, got {len(blocks)}")
        for k, b in zip(shape.blocks, blocks):
            a = np.asarray(b, dtype=np.complex128)
            if a.shape != (k, k):
                raise ShapeMismatch(f"block of size {a.shape} does not match k={k}")
            a = np.array(a)
            a.setflags(write=False)
            mats.append(a)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "blocks", tuple(mats))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.shape, [b.conj().T for b in self.blocks])

    def norm(self) -> float:
        return max(mc.op_norm(b) for b in self.blocks)

    def hs_norm(self) -> float:
        return float(np.sqrt(sum(mc.hs_norm(b) ** 2 for b in self.blocks)))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.abs(b).max(initial=0.0) <= tol for b in self.blocks)

    def __add__(self, other):
        _check_same_shape(self, other)
        return AlgebraElement(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        _check_same_shape(self, other)
        return AlgebraElement(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.shape, [-b for b in self.blocks])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return AlgebraElement(self.shape, [b * complex(other) for b in self.blocks])

    def __rmul__(self, scalar):
        return AlgebraElement(self.shape, [complex(scalar) * b for b in self.blocks])

    def __repr__(self):
        return f"AlgebraElement(shape={tuple(self.shape.blocks)})"


def _check_same_shape(a: AlgebraElement, b: AlgebraElement):
    if a.shape.blocks != b.shape.blocks:
        raise ShapeMismatch(f"shapes {a.shape.blocks} and {b.shape.blocks} differ")


def unit(shape) -> AlgebraElement:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    return AlgebraElement(shape, [np.eye(k, dtype=np.complex128) for k in shape.blocks])


def zero(shape) -> AlgebraElement:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    return AlgebraElement(shape, [np.zeros((k, k), dtype=np.complex128) for k in shape.blocks])


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Blockwise product ab."""
    _check_same_shape(a, b)
    return AlgebraElement(a.shape, [x @ y for x, y in zip(a.blocks, b.blocks)])


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint()


def norm(a: AlgebraElement) -> float:
    """C*-norm: the largest blockwise operator norm."""
    return a.norm()


def positivity_tol(a: AlgebraElement) -> float:
    """Default negativity tolerance, sized for frame-operator round-off."""
    return 1e-9 * (1.0 + a.norm())


def is_positive(a: AlgebraElement, tol: float | None = None) -> bool:
    """True when every blockwise eigenvalue is >= -tol.

    Raises NotHermitian if the element is not self-adjoint within tol.
    """
    if tol is None:
        tol = positivity_tol(a)
    defect = max(np.abs(b - b.conj().T).max(initial=0.0) for b in a.blocks)
    if defect > tol:
        raise NotHermitian(f"element is not self-adjoint (defect {defect:.3e})")
    for b in a.blocks:
        w, _ = mc.eig_hermitian((b + b.conj().T) / 2.0, tol=None)
        if len(w) and w[0] < -tol:
            return False
    return True


def leq(a: AlgebraElement, b: AlgebraElement, tol: float | None = None) -> bool:
    """Order relation a <= b, i.e. b - a positive."""
    _check_same_shape(a, b)
    return is_positive(b - a, tol=tol)


def carrier_projection(a: AlgebraElement, rank_tol: float = 1e-9) -> AlgebraElement:
    """Smallest projection p with pa = ap = a, for positive a.

    Computed by blockwise eigenvalue thresholding at ``rank_tol`` relative to
    the largest eigenvalue across blocks. The carrier of 0 is 0.
    """
    if not is_positive(a):
        raise NotPositive("carrier projection needs a positive element")
    tops = []
    eigs = []
    for b in a.blocks:
        w, u = mc.eig_hermitian((b + b.conj().T) / 2.0)
        eigs.append((w, u))
        tops.append(w[-1] if len(w) else 0.0)
    top = max(max(tops), 0.0)
    cut = rank_tol * top
    blocks = []
    for (w, u), k in zip(eigs, a.shape.blocks):
        keep = w > cut
        ur = u[:, keep]
        p = ur @ ur.conj().T
        blocks.append((p + p.conj().T) / 2.0)
    return AlgebraElement(a.shape, blocks)


# -- matrices over the algebra -------------------------------------------

def block_matrix_to_flats(entries, shape: AlgebraShape):
    """Flatten an r x c array of AlgebraElements to one matrix per block.

    Entry (i, j) lands in the (i, j) block slice of the flat matrix, so
    products, adjoints and Moore-Penrose inverses of matrices over the
    algebra become the same operations on the flats.
    """
    rows = len(entries)
    cols = len(entries[0]) if rows else 0
    flats = []
    for bi, k in enumerate(shape.blocks):
        f = np.zeros((rows * k, cols * k), dtype=np.complex128)
        for i in range(rows):
            for j in range(cols):
                e = entries[i][j]
                if e.shape.blocks != shape.blocks:
                    raise ShapeMismatch("mixed algebra shapes inside one matrix")
                f[i * k:(i + 1) * k, j * k:(j + 1) * k] = e.blocks[bi]
        flats.append(f)
    return flats


def flats_to_block_matrix(flats, shape: AlgebraShape, rows: int, cols: int):
    """Inverse of :func:`block_matrix_to_flats`."""
    entries = []
    for i in range(rows):
        row = []
        for j in range(cols):
            blocks = []
            for bi, k in enumerate(shape.blocks):
                blocks.append(flats[bi][i * k:(i + 1) * k, j * k:(j + 1) * k])
            row.append(AlgebraElement(shape, blocks))
        entries.append(row)
    return entries


def mp_inverse_matrix(entries, rank_tol: float = 1e-9):
    """Moore-Penrose inverse of a rectangular matrix over the algebra.

    The l x k input is flattened blockwise, pseudo-inverted per block and
    reassembled as a k x l matrix over the algebra; the four Penrose
    identities then hold entrywise over the algebra.
    """
    rows = len(entries)
    if rows == 0 or len(entries[0]) == 0:
        raise ShapeMismatch("empty matrix")
    cols = len(entries[0])
    shape = entries[0][0].shape
    flats = block_matrix_to_flats(entries, shape)
    inv_flats = [mc.pinv(f, rank_tol=rank_tol) for f in flats]
    return flats_to_block_matrix(inv_flats, shape, cols, rows)
