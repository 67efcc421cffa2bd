"""The free Hilbert module A^n over a block matrix algebra A.

Elements are rows ``x = (x_1, ..., x_n)`` of algebra elements with the
A-valued inner product ``<x, y> = sum_q x_q (y_q)*``, which is A-linear in
the first slot for the left action ``a . x = (a x_q)_q``. Operators act by
right multiplication,

    (x T)_p = sum_q x_q T[q][p],

so the left action and operator application commute. "Apply T, then U"
therefore corresponds to the matrix product ``T U`` over the algebra.

Everything numeric happens on per-block flattenings: a vector becomes the
``k_b x (n k_b)`` matrix of its block coordinates laid side by side, an
operator the ``(n k_b) x (m k_b)`` block matrix; inner products are
``X Y*`` and applications ``X T``. Adjoints of operators are blockwise
conjugate transposes, so every operator here is adjointable by
construction.

Finitely generated submodules are carried around as ranges of orthogonal
projections in the ambient A^n (every such module embeds this way;
non-complemented submodules are out of scope). For finitely many frame
elements the analysis map lands in A^k, the finite stand-in for the
standard countably generated module; nothing in the finite theory depends
on the distinction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cstar
from . import matrix_core as mc
from .cstar import AlgebraElement, AlgebraShape
from .errors import NotHermitian, ShapeMismatch

__all__ = [
    "ModuleVector",
    "ModuleOperator",
    "SubmoduleDescriptor",
    "inner",
    "vector_norm",
    "apply",
    "op_adjoint",
    "op_spectrum",
    "identity_operator",
    "zero_vector",
    "basis_vector",
    "embed_hilbert_frame",
]


class ModuleVector:
    """Element of A^n: a tuple of n algebra coordinates."""

    __slots__ = ("shape", "coords", "_flats")

    def __init__(self, shape, coords):
        shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
        coords = tuple(coords)
        for c in coords:
            if not isinstance(c, AlgebraElement) or c.shape.blocks != shape.blocks:
                raise ShapeMismatch("coordinates must share the module's algebra shape")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coords", coords)
        flats = []
        for bi, k in enumerate(shape.blocks):
            if coords:
                flats.append(np.hstack([c.blocks[bi] for c in coords]))
            else:
                flats.append(np.zeros((k, 0), dtype=np.complex128))
        for f in flats:
            f.setflags(write=False)
        object.__setattr__(self, "_flats", tuple(flats))

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    @property
    def rank(self) -> int:
        return len(self.coords)

    def flats(self):
        """Per-block k_b x (rank * k_b) coordinate matrices."""
        return self._flats

    def left_mul(self, a: AlgebraElement) -> "ModuleVector":
        """Left action a . x."""
        return ModuleVector(self.shape, [cstar.mul(a, c) for c in self.coords])

    def __add__(self, other):
        _same_module(self, other)
        return ModuleVector(self.shape, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        _same_module(self, other)
        return ModuleVector(self.shape, [a - b for a, b in zip(self.coords, other.coords)])

    def __rmul__(self, scalar):
        return ModuleVector(self.shape, [complex(scalar) * c for c in self.coords])

    def norm(self) -> float:
        return vector_norm(self)

    def __repr__(self):
        return f"ModuleVector(rank={self.rank}, shape={tuple(self.shape.blocks)})"


def _same_module(x: ModuleVector, y: ModuleVector):
    if x.shape.blocks != y.shape.blocks or x.rank != y.rank:
        raise ShapeMismatch("vectors live in different modules")


def vector_from_flats(flats, shape: AlgebraShape, rank: int) -> ModuleVector:
    coords = []
    for q in range(rank):
        blocks = []
        for bi, k in enumerate(shape.blocks):
            blocks.append(flats[bi][:, q * k:(q + 1) * k])
        coords.append(AlgebraElement(shape, blocks))
    return ModuleVector(shape, coords)


def inner(x: ModuleVector, y: ModuleVector) -> AlgebraElement:
    """A-valued inner product sum_q x_q (y_q)*."""
    _same_module(x, y)
    blocks = [xf @ yf.conj().T for xf, yf in zip(x.flats(), y.flats())]
    return AlgebraElement(x.shape, blocks)


def vector_norm(x: ModuleVector) -> float:
    """Module norm ||<x, x>||^(1/2)."""
    return float(np.sqrt(cstar.norm(inner(x, x))))


class ModuleOperator:
    """A-linear map A^in_rank -> A^out_rank as a matrix over the algebra.

    ``entries[q][p]`` multiplies the q-th input coordinate into the p-th
    output coordinate; see the module docstring for the action convention.
    """

    __slots__ = ("shape", "entries", "in_rank", "out_rank", "_flats")

    def __init__(self, shape, entries):
        shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
        rows = tuple(tuple(row) for row in entries)
        in_rank = len(rows)
        out_rank = len(rows[0]) if in_rank else 0
        for row in rows:
            if len(row) != out_rank:
                raise ShapeMismatch("ragged operator matrix")
            for e in row:
                if e.shape.blocks != shape.blocks:
                    raise ShapeMismatch("entry shape differs from operator shape")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "in_rank", in_rank)
        object.__setattr__(self, "out_rank", out_rank)
        flats = cstar.block_matrix_to_flats(rows, shape) if in_rank and out_rank else [
            np.zeros((in_rank * k, out_rank * k), dtype=np.complex128) for k in shape.blocks
        ]
        for f in flats:
            f.setflags(write=False)
        object.__setattr__(self, "_flats", tuple(flats))

    def __setattr__(self, name, value):
        raise AttributeError("ModuleOperator is immutable")

    def flats(self):
        """Per-block (in_rank k_b) x (out_rank k_b) matrices."""
        return self._flats

    @property
    def is_square(self) -> bool:
        return self.in_rank == self.out_rank

    def adjoint(self) -> "ModuleOperator":
        return op_adjoint(self)

    def __matmul__(self, other: "ModuleOperator") -> "ModuleOperator":
        """Composition "apply self, then other"."""
        if self.shape.blocks != other.shape.blocks or self.out_rank != other.in_rank:
            raise ShapeMismatch("operators do not compose")
        flats = [a @ b for a, b in zip(self.flats(), other.flats())]
        return operator_from_flats(flats, self.shape, self.in_rank, other.out_rank)

    def __add__(self, other):
        if self.shape.blocks != other.shape.blocks or (self.in_rank, self.out_rank) != (
            other.in_rank,
            other.out_rank,
        ):
            raise ShapeMismatch("operator shapes differ")
        flats = [a + b for a, b in zip(self.flats(), other.flats())]
        return operator_from_flats(flats, self.shape, self.in_rank, self.out_rank)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        flats = [complex(scalar) * f for f in self.flats()]
        return operator_from_flats(flats, self.shape, self.in_rank, self.out_rank)

    def norm(self) -> float:
        """Operator norm: the largest blockwise flat norm."""
        return max(mc.op_norm(f) for f in self.flats())

    def __repr__(self):
        return (
            f"ModuleOperator({self.in_rank}->{self.out_rank}, "
            f"shape={tuple(self.shape.blocks)})"
        )


def operator_from_flats(flats, shape: AlgebraShape, in_rank: int, out_rank: int) -> ModuleOperator:
    entries = cstar.flats_to_block_matrix(flats, shape, in_rank, out_rank)
    return ModuleOperator(shape, entries)


def identity_operator(shape, rank: int) -> ModuleOperator:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    flats = [np.eye(rank * k, dtype=np.complex128) for k in shape.blocks]
    return operator_from_flats(flats, shape, rank, rank)


def zero_vector(shape, rank: int) -> ModuleVector:
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    return ModuleVector(shape, [cstar.zero(shape) for _ in range(rank)])


def basis_vector(shape, rank: int, j: int) -> ModuleVector:
    """Standard basis element e_j of A^rank (unit in slot j)."""
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    coords = [cstar.zero(shape) for _ in range(rank)]
    coords[j] = cstar.unit(shape)
    return ModuleVector(shape, coords)


def apply(t: ModuleOperator, x: ModuleVector) -> ModuleVector:
    """Apply the operator: (x T)_p = sum_q x_q T[q][p]."""
    if t.shape.blocks != x.shape.blocks or t.in_rank != x.rank:
        raise ShapeMismatch("operator and vector do not match")
    flats = [xf @ tf for xf, tf in zip(x.flats(), t.flats())]
    return vector_from_flats(flats, x.shape, t.out_rank)


def op_adjoint(t: ModuleOperator) -> ModuleOperator:
    """Unique adjoint: <xT, y> = <x, yT*> for all x, y."""
    flats = [f.conj().T for f in t.flats()]
    return operator_from_flats(flats, t.shape, t.out_rank, t.in_rank)


def op_spectrum(t: ModuleOperator, tol: float | None = None):
    """Sorted eigenvalues (all blocks pooled) of a Hermitian square operator."""
    if not t.is_square:
        raise ShapeMismatch("spectrum needs a square operator")
    vals = []
    for f in t.flats():
        defect = np.abs(f - f.conj().T).max(initial=0.0)
        limit = tol if tol is not None else mc.hermitian_tol(f)
        if defect > limit:
            raise NotHermitian(f"operator block defect {defect:.3e}")
        w, _ = mc.eig_hermitian((f + f.conj().T) / 2.0, tol=limit)
        vals.extend(w.tolist())
    return sorted(vals)


@dataclass(frozen=True)
class SubmoduleDescriptor:
    """A finitely generated submodule of A^rank: the range of a projection.

    ``projection is None`` denotes the full module A^rank.
    """

    shape: AlgebraShape
    rank: int
    projection: ModuleOperator | None = None

    def __post_init__(self):
        shape = self.shape if isinstance(self.shape, AlgebraShape) else AlgebraShape(tuple(self.shape))
        object.__setattr__(self, "shape", shape)
        p = self.projection
        if p is not None:
            if p.shape.blocks != shape.blocks or p.in_rank != self.rank or not p.is_square:
                raise ShapeMismatch("projection does not act on A^rank")
            defect = 0.0
            for f in p.flats():
                defect = max(defect, np.abs(f @ f - f).max(initial=0.0))
                defect = max(defect, np.abs(f - f.conj().T).max(initial=0.0))
            if defect > 1e-9:
                raise ValueError(f"projection defect {defect:.3e} exceeds 1e-9")

    def projection_flats(self):
        """Flat projection matrices (identity when the module is all of A^rank)."""
        if self.projection is not None:
            return self.projection.flats()
        return tuple(np.eye(self.rank * k, dtype=np.complex128) for k in self.shape.blocks)

    def contains(self, x: ModuleVector, tol: float = 1e-9) -> bool:
        scale = 1.0 + vector_norm(x)
        for xf, pf in zip(x.flats(), self.projection_flats()):
            if np.abs(xf @ pf - xf).max(initial=0.0) > tol * scale:
                return False
        return True


def embed_hilbert_frame(vectors, shape) -> list[ModuleVector]:
    """Lift complex vectors x_i in C^n to module vectors over any shape.

    Coordinate q of the lift is ``(x_i)_q`` times the algebra unit; frame
    bounds are preserved by the lift (the flattened Gram is the scalar Gram
    tensored with identities).
    """
    shape = shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape))
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=np.complex128).ravel()
        coords = [complex(c) * cstar.unit(shape) for c in v]
        out.append(ModuleVector(shape, coords))
    return out
