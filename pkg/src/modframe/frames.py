"""Modular frames in A^n: verification, bounds, transforms, duals.

A frame here is a finite sequence of module vectors together with the
submodule it is supposed to generate. The two-sided cone inequality

    C <x, x>  <=  sum_j <x, x_j> <x_j, x>  <=  D <x, x>

for all x in the submodule is decided through the Gram-type operator
``G = theta* theta`` (entries ``G[q][p] = sum_j (x_j)_q^* (x_j)_p``): for an
adjointable positive G, the inequality for every module element is
equivalent to the operator inequality ``C P <= G <= D P`` on the support,
so the optimal bounds are the extreme nonzero eigenvalues of the flattened
blocks of G, and the sequence generates the submodule exactly when the
support projection of G equals the module projection.

The analysis map ``theta(x) = (<x, x_j>)_j`` lands in A^k; its flats are
assembled once per frame and drive everything else: range projections,
canonical duals ``S(x_j)`` with ``S = pinv(G)``, reconstruction, similarity
tests and the Riesz kernel computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cstar
from . import matrix_core as mc
from . import module_space as ms
from .cstar import AlgebraShape
from .errors import (
    CountMismatch,
    EmptyFrame,
    NotAFrame,
    NotPartialIsometry,
    ShapeMismatch,
    VectorOutsideModule,
)
from .module_space import ModuleOperator, ModuleVector, SubmoduleDescriptor

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "Frame",
    "FrameReport",
    "FrameTransform",
    "SimilarityResult",
    "RieszReport",
    "analyze",
    "frame_transform",
    "reconstruct",
    "canonical_dual",
    "frame_operator",
    "from_partial_isometry",
    "test_similarity",
    "riesz_check",
    "direct_sum",
    "standard_basis_frame",
]


class Frame:
    """Indexed finite sequence of module vectors with its ambient submodule.

    The Gram operator is computed eagerly; frames are immutable after
    construction and safe to share.
    """

    __slots__ = ("module", "elements", "gram", "_theta_flats", "_gram_flats")

    def __init__(self, module: SubmoduleDescriptor, elements, tol: float = DEFAULT_TOL):
        elements = tuple(elements)
        for x in elements:
            if not isinstance(x, ModuleVector):
                raise ShapeMismatch("frame elements must be module vectors")
            if x.shape.blocks != module.shape.blocks or x.rank != module.rank:
                raise ShapeMismatch("element does not live in the ambient module")
            if module.projection is not None and not module.contains(x, tol=tol):
                raise VectorOutsideModule("frame element sticks out of the submodule")
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "elements", elements)

        shape = module.shape
        n, k = module.rank, len(elements)
        theta_flats = []
        gram_flats = []
        for bi, kb in enumerate(shape.blocks):
            if k:
                th = np.hstack([x.flats()[bi].conj().T for x in elements])
            else:
                th = np.zeros((n * kb, 0), dtype=np.complex128)
            g = th @ th.conj().T
            g = (g + g.conj().T) / 2.0
            th.setflags(write=False)
            g.setflags(write=False)
            theta_flats.append(th)
            gram_flats.append(g)
        object.__setattr__(self, "_theta_flats", tuple(theta_flats))
        object.__setattr__(self, "_gram_flats", tuple(gram_flats))
        object.__setattr__(
            self, "gram", ms.operator_from_flats(gram_flats, shape, n, n) if n else None
        )

    def __setattr__(self, name, value):
        raise AttributeError("Frame is immutable")

    @property
    def shape(self) -> AlgebraShape:
        return self.module.shape

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def count(self) -> int:
        return len(self.elements)

    def theta_flats(self):
        """Analysis-map flats, one (rank k_b) x (count k_b) matrix per block."""
        return self._theta_flats

    def gram_flats(self):
        return self._gram_flats

    def __repr__(self):
        return (
            f"Frame(k={self.count}, rank={self.rank}, shape={tuple(self.shape.blocks)})"
        )


@dataclass(frozen=True)
class FrameReport:
    """Outcome of a frame analysis."""

    lower: float
    upper: float
    is_frame: bool
    is_tight: bool
    is_normalized_tight: bool
    support: ModuleOperator
    spectrum: tuple[float, ...]
    tol: float

    def to_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "is_frame": self.is_frame,
            "is_tight": self.is_tight,
            "is_normalized_tight": self.is_normalized_tight,
            "spectrum": list(self.spectrum),
            "tol": self.tol,
        }


def _support_flats(frame: Frame, tol: float):
    """Eigen-thresholded support projection of G, plus pooled nonzero spectrum."""
    eigs = []
    top = 0.0
    for g in frame.gram_flats():
        w, u = mc.eig_hermitian(g)
        eigs.append((w, u))
        if len(w):
            top = max(top, w[-1])
    cut = tol * top
    support = []
    nonzero = []
    for (w, u) in eigs:
        keep = w > cut
        ur = u[:, keep]
        p = ur @ ur.conj().T
        support.append((p + p.conj().T) / 2.0)
        nonzero.extend(w[keep].tolist())
    return support, sorted(nonzero)


def analyze(frame: Frame, tol: float = DEFAULT_TOL) -> FrameReport:
    """Frame verification and optimal bounds.

    The sequence is a frame of its submodule iff the support projection of G
    coincides with the module projection; the optimal bounds are then the
    extreme eigenvalues of G on that support.
    """
    if frame.count == 0:
        raise EmptyFrame("cannot analyze an empty sequence")
    support, spectrum = _support_flats(frame, tol)
    gap = 0.0
    for s, p in zip(support, frame.module.projection_flats()):
        gap = max(gap, float(np.abs(s - p).max(initial=0.0)))
    is_frame = gap < 0.5

    if spectrum:
        lower, upper = float(spectrum[0]), float(spectrum[-1])
    else:
        # zero sequence generating the zero module: the inequality is vacuous
        lower = upper = 1.0
    is_tight = bool(is_frame and abs(lower - upper) <= tol * upper)
    is_nt = bool(is_tight and abs(lower - 1.0) <= tol)
    sup_op = ms.operator_from_flats(support, frame.shape, frame.rank, frame.rank)
    return FrameReport(
        lower=lower,
        upper=upper,
        is_frame=is_frame,
        is_tight=is_tight,
        is_normalized_tight=is_nt,
        support=sup_op,
        spectrum=tuple(spectrum),
        tol=tol,
    )


@dataclass(frozen=True)
class FrameTransform:
    """Analysis map of a frame together with its synthesis and range data."""

    theta: ModuleOperator
    synthesis: ModuleOperator
    range_projection: ModuleOperator
    report: FrameReport = field(repr=False)


def frame_transform(frame: Frame, tol: float = DEFAULT_TOL) -> FrameTransform:
    """Analysis map theta(x) = (<x, x_j>)_j into A^k.

    The synthesis map is its adjoint and sends e_j to x_j; the range of
    theta is an orthogonal summand of A^k, with projection
    ``Q = theta pinv(G) theta*`` computed on the flats.
    """
    report = analyze(frame, tol=tol)
    if not report.is_frame:
        raise NotAFrame("sequence does not generate its submodule")
    shape, n, k = frame.shape, frame.rank, frame.count
    theta = ms.operator_from_flats(list(frame.theta_flats()), shape, n, k)
    synthesis = ms.op_adjoint(theta)
    q_flats = []
    for th, g in zip(frame.theta_flats(), frame.gram_flats()):
        s = mc.pinv(g, rank_tol=tol)
        q = th.conj().T @ s @ th
        q_flats.append((q + q.conj().T) / 2.0)
    q_op = ms.operator_from_flats(q_flats, shape, k, k)
    return FrameTransform(theta=theta, synthesis=synthesis, range_projection=q_op, report=report)


def frame_operator(frame: Frame, tol: float = DEFAULT_TOL) -> ModuleOperator:
    """The positive operator S = pinv(G), inverse of G on the support."""
    flats = [mc.pinv(g, rank_tol=tol) for g in frame.gram_flats()]
    return ms.operator_from_flats(flats, frame.shape, frame.rank, frame.rank)


def canonical_dual(frame: Frame, tol: float = DEFAULT_TOL) -> Frame:
    """The dual frame {S(x_j)} used by the reconstruction formula."""
    report = analyze(frame, tol=tol)
    if not report.is_frame:
        raise NotAFrame("sequence does not generate its submodule")
    s = frame_operator(frame, tol=tol)
    duals = [ms.apply(s, x) for x in frame.elements]
    return Frame(frame.module, duals, tol=max(tol, 1e-6))


def reconstruct(frame: Frame, x: ModuleVector, tol: float = DEFAULT_TOL) -> ModuleVector:
    """Evaluate sum_j <x, S(x_j)> x_j, which recovers x on the submodule.

    For normalized tight frames S is the identity on the support and the sum
    degenerates to sum_j <x, x_j> x_j.
    """
    report = analyze(frame, tol=tol)
    if not report.is_frame:
        raise NotAFrame("sequence does not generate its submodule")
    if x.shape.blocks != frame.shape.blocks or x.rank != frame.rank:
        raise ShapeMismatch("vector does not live in the frame's module")
    if not frame.module.contains(x, tol=max(tol, 1e-7)):
        raise VectorOutsideModule("vector is not in the submodule")
    out = []
    for xf, th, g in zip(x.flats(), frame.theta_flats(), frame.gram_flats()):
        s = mc.pinv(g, rank_tol=tol)
        coeff = xf @ s @ th          # (<x, S(x_j)>)_j laid out as one flat row
        out.append(coeff @ th.conj().T)
    return ms.vector_from_flats(out, frame.shape, frame.rank)


def standard_basis_frame(shape, n: int) -> Frame:
    """The standard orthonormal basis of A^n as a frame."""
    module = SubmoduleDescriptor(
        shape if isinstance(shape, AlgebraShape) else AlgebraShape(tuple(shape)), n
    )
    return Frame(module, [ms.basis_vector(module.shape, n, j) for j in range(n)])


def from_partial_isometry(v: ModuleOperator, tol: float = DEFAULT_TOL) -> Frame:
    """Frame {V(e_j)} of the image of a partial isometry V on A^n.

    The image sequence of the standard basis under an A-linear partial
    isometry is a normalized tight frame of the range submodule.
    """
    if not v.is_square:
        raise ShapeMismatch("partial isometry must act on a single A^n")
    scale = 1.0 + v.norm()
    for f in v.flats():
        vv = f @ f.conj().T
        defect = np.abs(vv @ vv - vv).max(initial=0.0)
        if defect > tol * scale:
            raise NotPartialIsometry(f"V V* fails idempotency by {defect:.3e}")
    shape, n = v.shape, v.in_rank
    # range projection of x -> x V; eigenvalue rounding scrubs construction noise
    proj_flats = []
    for f in v.flats():
        p = f.conj().T @ f
        w, u = mc.eig_hermitian((p + p.conj().T) / 2.0)
        keep = w > 0.5
        ur = u[:, keep]
        q = ur @ ur.conj().T
        proj_flats.append((q + q.conj().T) / 2.0)
    proj = ms.operator_from_flats(proj_flats, shape, n, n)
    module = SubmoduleDescriptor(shape, n, proj)
    elements = [ms.apply(v, ms.basis_vector(shape, n, j)) for j in range(n)]
    return Frame(module, elements, tol=max(tol, 1e-7))


@dataclass(frozen=True)
class SimilarityResult:
    relation: str                    # "unitarily_equivalent" | "similar" | "neither"
    witness: ModuleOperator | None
    projection_gap: float
    element_residual: float


def test_similarity(f: Frame, g: Frame, tol: float = DEFAULT_TOL) -> SimilarityResult:
    """Classify two frames by the ranges of their analysis maps.

    Frames are similar exactly when those ranges agree as submodules of A^k;
    the witness T with T(x_j) = y_j is the g-synthesis applied to the
    canonical-dual coefficients of f, and it is unitary iff it preserves the
    inner product on the module of f.
    """
    if f.count != g.count:
        raise CountMismatch(f"element counts differ: {f.count} vs {g.count}")
    if f.shape.blocks != g.shape.blocks:
        raise ShapeMismatch("frames live over different algebras")
    tf = frame_transform(f, tol=tol)
    tg = frame_transform(g, tol=tol)
    gap = 0.0
    for a, b in zip(tf.range_projection.flats(), tg.range_projection.flats()):
        gap = max(gap, mc.op_norm(a - b))
    if gap > tol:
        return SimilarityResult("neither", None, gap, float("inf"))

    # T = synthesis of g after canonical-dual analysis of f
    w_flats = []
    for gf, th_f, th_g in zip(f.gram_flats(), f.theta_flats(), g.theta_flats()):
        s = mc.pinv(gf, rank_tol=tol)
        w_flats.append(s @ th_f @ th_g.conj().T)
    witness = ms.operator_from_flats(w_flats, f.shape, f.rank, g.rank)

    residual = 0.0
    for x, y in zip(f.elements, g.elements):
        diff = ms.apply(witness, x) - y
        residual = max(residual, ms.vector_norm(diff))

    # unitarity on the module: P (T T*) P = P
    unitary_defect = 0.0
    for pf, wf in zip(f.module.projection_flats(), witness.flats()):
        tt = wf @ wf.conj().T
        unitary_defect = max(unitary_defect, np.abs(pf @ tt @ pf - pf).max(initial=0.0))
    relation = "unitarily_equivalent" if unitary_defect <= tol * 10.0 else "similar"
    return SimilarityResult(relation, witness, gap, residual)


@dataclass(frozen=True)
class RieszReport:
    is_riesz_basis: bool
    is_orthogonal_hilbert_basis: bool
    kernel_generators: int
    max_summand_residual: float


def riesz_check(frame: Frame, tol: float = DEFAULT_TOL) -> RieszReport:
    """Riesz-basis test through the kernel of the synthesis map.

    A generating frame is a Riesz basis when every coefficient tuple killed
    by the synthesis map kills it summand by summand; over an algebra with
    zero-divisors the kernel may be nontrivial even for a Riesz basis, so
    the kernel generators are checked coordinatewise instead of being
    required to vanish. A normalized tight Riesz basis is additionally an
    orthogonal Hilbert basis with projection-valued inner squares.
    """
    report = analyze(frame, tol=tol)
    if not report.is_frame:
        raise NotAFrame("sequence does not generate its submodule")
    shape, k = frame.shape, frame.count

    kernel_count = 0
    worst = 0.0
    scale = 1.0 + max((ms.vector_norm(x) for x in frame.elements), default=0.0)
    for bi, kb in enumerate(shape.blocks):
        synth = frame.theta_flats()[bi].conj().T     # (k kb) x (n kb)
        u, s, _ = mc.svd(synth)
        smax = s.max(initial=0.0)
        cut = max(tol * smax, 1e-13)
        # left-null directions of the synthesis flat
        null_vecs = [u[:, i].conj() for i in range(len(s)) if s[i] <= cut]
        if synth.shape[0] > len(s):
            null_vecs.extend(_left_null_completion(u, synth.shape[0]))
        for v in null_vecs:
            kernel_count += 1
            for j in range(k):
                a_j = np.zeros((kb, kb), dtype=np.complex128)
                a_j[0, :] = v[j * kb:(j + 1) * kb]
                prod = a_j @ frame.elements[j].flats()[bi]
                worst = max(worst, float(np.abs(prod).max(initial=0.0)))
    is_riesz = worst <= tol * scale

    is_ohb = False
    if report.is_normalized_tight:
        is_ohb = True
        for i, x in enumerate(frame.elements):
            for j in range(i + 1, k):
                if cstar.norm(ms.inner(x, frame.elements[j])) > tol * scale:
                    is_ohb = False
                    break
            if not is_ohb:
                break
        if is_ohb:
            for x in frame.elements:
                sq = ms.inner(x, x)
                if sq.is_zero(tol):
                    continue
                p = cstar.carrier_projection(sq, rank_tol=tol)
                if cstar.norm(sq - p) > tol * scale:
                    is_ohb = False
                    break
    return RieszReport(is_riesz, is_ohb, kernel_count, worst)


def _left_null_completion(u, rows):
    """Left-null directions not visible in the economy SVD (rows > rank)."""
    have = u.shape[1]
    if have >= rows:
        return []
    full = np.zeros((rows, rows), dtype=np.complex128)
    full[:, :have] = u
    q = mc._complete_columns(full, np.arange(rows) < have)
    return [q[:, i].conj() for i in range(have, rows)]


def direct_sum(f: Frame, g: Frame) -> Frame:
    """Pairwise orthogonal sum {x_j + y_j} inside A^(n_f + n_g).

    Plumbing for composing frames of orthogonal summands; no optimality
    claim is attached to it.
    """
    if f.count != g.count:
        raise CountMismatch("direct sum needs equal element counts")
    if f.shape.blocks != g.shape.blocks:
        raise ShapeMismatch("frames live over different algebras")
    shape = f.shape
    nf, ng = f.rank, g.rank
    proj_flats = []
    for pf, pg, k in zip(f.module.projection_flats(), g.module.projection_flats(), shape.blocks):
        proj_flats.append(
            np.block(
                [
                    [pf, np.zeros((nf * k, ng * k))],
                    [np.zeros((ng * k, nf * k)), pg],
                ]
            ).astype(np.complex128)
        )
    module = SubmoduleDescriptor(shape, nf + ng, ms.operator_from_flats(proj_flats, shape, nf + ng, nf + ng))
    elements = [
        ModuleVector(shape, list(x.coords) + list(y.coords))
        for x, y in zip(f.elements, g.elements)
    ]
    return Frame(module, elements)
