"""Resolutions of the identity in a matrix algebra, read as modular frames.

A finite sequence b_1, ..., b_k in M_d with sum b_i* b_i = 1 is a
normalized tight frame of the algebra viewed as the rank-one module over
itself with <a, b> = a b*: the reconstruction a = sum_i (a b_i*) b_i is the
resolution property verbatim. This module verifies that reading, computes
the analysis map a -> (a b_1*, ..., a b_k*) with its range projection
Q[i][j] = b_i b_j*, polar-factors each block as b_i = u_i m_i with modulus
m_i = (b_i* b_i)^(1/2), and checks the endpoint identity

    sum_j (b_i b_j*)(b_j b_i*) = b_i b_i*,

the finite-dimensional face of the coefficient inequality. The dilation
picture behind these identities (an isometry u with u u* = p plus an
infinite family of pairwise-orthogonal projections each similar to the
identity) needs a properly infinite algebra and is out of scope here; every
report says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrix_core as mc
from .errors import ResolutionFailed

DILATION_NOTE = (
    "dilation data (isometry u with u u* = p and an infinite orthogonal "
    "family of projections similar to the identity) requires a properly "
    "infinite algebra and is out of scope at finite dimension"
)

__all__ = [
    "ResolutionSequence",
    "ResolutionReport",
    "RangeProjectionReport",
    "PolarFactorReport",
    "CoefficientReport",
    "verify_resolution",
    "frame_transform_range",
    "polar_factorization",
    "coefficient_inequality",
    "DILATION_NOTE",
]


class ResolutionSequence:
    """d x d blocks b_i meant to satisfy sum b_i* b_i = identity."""

    __slots__ = ("d", "blocks")

    def __init__(self, blocks):
        mats = [mc.as_matrix(b) for b in blocks]
        if not mats:
            raise ResolutionFailed("need at least one block")
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise ResolutionFailed("all blocks must be square of equal size")
        frozen = []
        for m in mats:
            c = np.array(m)
            c.setflags(write=False)
            frozen.append(c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "blocks", tuple(frozen))

    def __setattr__(self, name, value):
        raise AttributeError("ResolutionSequence is immutable")

    @property
    def count(self) -> int:
        return len(self.blocks)

    def default_tol(self) -> float:
        # absorbs summation round-off across k terms
        return 1e-9 * (1.0 + self.count)

    def sum_defect(self) -> float:
        acc = np.zeros((self.d, self.d), dtype=np.complex128)
        for b in self.blocks:
            acc += b.conj().T @ b
        return float(mc.op_norm(acc - np.eye(self.d)))


@dataclass(frozen=True)
class ResolutionReport:
    passed: bool
    sum_residual: float
    reconstruction_residual: float
    tol: float
    probes: int
    note: str = DILATION_NOTE


def verify_resolution(seq: ResolutionSequence, tol: float | None = None, rng=None, probes: int = 8) -> ResolutionReport:
    """Check sum b_i* b_i = 1 and the reconstruction a = sum (a b_i*) b_i.

    Reconstruction is probed on random algebra elements; both residuals are
    reported and the check passes when each stays within tol.
    """
    if tol is None:
        tol = seq.default_tol()
    if rng is None:
        rng = np.random.default_rng(0)
    sum_res = seq.sum_defect()
    worst = 0.0
    for _ in range(probes):
        a = rng.standard_normal((seq.d, seq.d)) + 1j * rng.standard_normal((seq.d, seq.d))
        acc = np.zeros_like(a)
        for b in seq.blocks:
            acc += (a @ b.conj().T) @ b
        worst = max(worst, float(mc.op_norm(acc - a) / (1.0 + mc.op_norm(a))))
    return ResolutionReport(
        passed=bool(sum_res <= tol and worst <= tol),
        sum_residual=sum_res,
        reconstruction_residual=worst,
        tol=tol,
        probes=probes,
    )


@dataclass(frozen=True)
class RangeProjectionReport:
    q: np.ndarray = field(repr=False)
    isometry_residual: float
    idempotency_residual: float
    adjoint_residual: float
    decomposition_residual: float
    tol: float
    note: str = DILATION_NOTE


def analysis_map(seq: ResolutionSequence):
    """theta(a) = (a b_1*, ..., a b_k*), returned as a list of d x d blocks."""

    def theta(a):
        a = mc.as_matrix(a)
        return [a @ b.conj().T for b in seq.blocks]

    return theta


def frame_transform_range(seq: ResolutionSequence, tol: float | None = None) -> RangeProjectionReport:
    """Range projection Q of the analysis map, flattened to a kd x kd matrix.

    Q has algebra entries Q[i][j] = b_i b_j*; the analysis map is an
    isometry for the algebra-valued inner product (theta* theta = id), Q is
    an orthogonal projection, and the frame decomposition
    b_i = sum_j (b_i b_j*) b_j reproduces every block.
    """
    if tol is None:
        tol = seq.default_tol()
    rep = verify_resolution(seq, tol=tol)
    if not rep.passed:
        raise ResolutionFailed(f"sum residual {rep.sum_residual:.3e} exceeds tol")
    d, k = seq.d, seq.count
    q = np.zeros((k * d, k * d), dtype=np.complex128)
    for i, bi in enumerate(seq.blocks):
        for j, bj in enumerate(seq.blocks):
            q[i * d:(i + 1) * d, j * d:(j + 1) * d] = bi @ bj.conj().T

    # theta* theta (a) = sum_i (a b_i*) b_i = a, measured on the identity
    acc = np.zeros((d, d), dtype=np.complex128)
    for b in seq.blocks:
        acc += b.conj().T @ b
    iso = float(mc.op_norm(acc - np.eye(d)))
    idem = float(mc.op_norm(q @ q - q))
    adj = float(np.abs(q - q.conj().T).max(initial=0.0))
    dec = 0.0
    for i, bi in enumerate(seq.blocks):
        rec = np.zeros((d, d), dtype=np.complex128)
        for j, bj in enumerate(seq.blocks):
            rec += (bi @ bj.conj().T) @ bj
        dec = max(dec, float(mc.op_norm(rec - bi)))
    return RangeProjectionReport(
        q=q,
        isometry_residual=iso,
        idempotency_residual=idem,
        adjoint_residual=adj,
        decomposition_residual=dec,
        tol=tol,
    )


@dataclass(frozen=True)
class PolarFactorReport:
    factors: tuple
    reconstruction_residual: float
    support_residual: float
    moduli_sum_residual: float
    tol: float
    note: str = DILATION_NOTE


def polar_factorization(seq: ResolutionSequence, tol: float | None = None) -> PolarFactorReport:
    """Polar factors b_i = u_i m_i with m_i = (b_i* b_i)^(1/2).

    The partial isometries satisfy u_i* u_i = support(m_i) and the moduli
    square-sum back to the identity; the positive root is the canonical
    choice of inner factor (other roots exist but are not enumerated).
    """
    if tol is None:
        tol = seq.default_tol()
    rep = verify_resolution(seq, tol=tol)
    if not rep.passed:
        raise ResolutionFailed(f"sum residual {rep.sum_residual:.3e} exceeds tol")
    factors = []
    rec = supp = 0.0
    acc = np.zeros((seq.d, seq.d), dtype=np.complex128)
    for b in seq.blocks:
        u, m = mc.polar(b)
        factors.append((u, m))
        rec = max(rec, float(mc.op_norm(u @ m - b)))
        sp = mc.support_projection(m, rank_tol=1e-11)
        supp = max(supp, float(mc.op_norm(u.conj().T @ u - sp)))
        acc += m @ m
    msum = float(mc.op_norm(acc - np.eye(seq.d)))
    return PolarFactorReport(
        factors=tuple(factors),
        reconstruction_residual=rec,
        support_residual=supp,
        moduli_sum_residual=msum,
        tol=tol,
    )


@dataclass(frozen=True)
class CoefficientReport:
    endpoint_residual: float
    dominance_defect: float
    tol: float
    note: str = DILATION_NOTE


def coefficient_inequality(seq: ResolutionSequence, tol: float | None = None) -> CoefficientReport:
    """Endpoint identity and diagonal dominance of the range projection.

    For a resolution the coefficient inequality closes to the identity
    sum_j (b_i b_j*)(b_j b_i*) = b_i b_i* for every i, and each single term
    b_s b_i* b_i b_s* stays below the diagonal entry Q[s][s] = b_s b_s* in
    the positive order.
    """
    if tol is None:
        tol = seq.default_tol()
    rep = verify_resolution(seq, tol=tol)
    if not rep.passed:
        raise ResolutionFailed(f"sum residual {rep.sum_residual:.3e} exceeds tol")
    endpoint = 0.0
    for bi in seq.blocks:
        acc = np.zeros((seq.d, seq.d), dtype=np.complex128)
        for bj in seq.blocks:
            c = bi @ bj.conj().T
            acc += c @ c.conj().T
        endpoint = max(endpoint, float(mc.op_norm(acc - bi @ bi.conj().T)))
    dominance = 0.0
    for bs in seq.blocks:
        qss = bs @ bs.conj().T
        for bi in seq.blocks:
            term = bs @ bi.conj().T @ bi @ bs.conj().T
            w, _ = mc.eig_hermitian((qss - term + (qss - term).conj().T) / 2.0)
            if len(w):
                dominance = max(dominance, float(max(0.0, -w[0])))
    return CoefficientReport(endpoint_residual=endpoint, dominance_defect=dominance, tol=tol)
