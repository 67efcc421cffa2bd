"""Isomorphism invariants of finitely generated projective modules.

Any generating set of a finitely generated module is a frame, and there is
exactly one inner product on the module that turns it into a normalized
tight frame; the k x k matrix of its pairwise inner products under that
metric pins the module down up to unitary isomorphism. The metric is
realized concretely by the positive operator S = pinv(G):

    <x, y>_0 := <S x, y>,

under which the reconstruction sum collapses to the identity on the
support, which is exactly the normalized tight property. Matching Gram
matrices of two normalized tight frames produce the connecting unitary by
composing one frame's analysis map with the other's synthesis map, and two
Riesz bases of the same module are related by coefficient matrices that are
Moore-Penrose inverses of each other.

Unitary isomorphism is certified through inner-product preservation; the
isometric Banach-module formulation is equivalent for these modules and is
not tested separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cstar
from . import matrix_core as mc
from . import module_space as ms
from .cstar import AlgebraElement
from .errors import GramMismatch, NotAFrame, NotNormalizedTight, NotRieszBasis, ShapeMismatch, ExpansionResidualTooLarge
from .frames import DEFAULT_TOL, Frame, analyze, frame_operator, riesz_check
from .module_space import ModuleOperator

__all__ = [
    "GramInvariant",
    "normalized_tight_inner_product",
    "metric_bounds",
    "gram_gap",
    "build_unitary_from_matching_grams",
    "change_of_basis_mp",
    "MpReport",
]


@dataclass(frozen=True)
class GramInvariant:
    """Pairwise inner products under the normalized tight metric.

    The flattened matrix of a valid invariant is an orthogonal projection in
    M_k(A), because for a normalized tight frame it coincides with the range
    projection of the analysis map.
    """

    k: int
    gram: tuple[tuple[AlgebraElement, ...], ...]

    def flats(self):
        shape = self.gram[0][0].shape
        return cstar.block_matrix_to_flats([list(r) for r in self.gram], shape)

    def projection_defect(self) -> float:
        worst = 0.0
        for f in self.flats():
            worst = max(worst, float(np.abs(f @ f - f).max(initial=0.0)))
            worst = max(worst, float(np.abs(f - f.conj().T).max(initial=0.0)))
        return worst


def _gram_under_metric(frame: Frame, s_flats) -> GramInvariant:
    shape, k = frame.shape, frame.count
    entries = []
    for i in range(k):
        row = []
        xi = frame.elements[i]
        for j in range(k):
            xj = frame.elements[j]
            blocks = [
                xf @ sf @ yf.conj().T
                for xf, sf, yf in zip(xi.flats(), s_flats, xj.flats())
            ]
            row.append(AlgebraElement(shape, blocks))
        entries.append(tuple(row))
    return GramInvariant(k=k, gram=tuple(entries))


def normalized_tight_inner_product(frame: Frame, tol: float = DEFAULT_TOL):
    """The unique metric making the generators a normalized tight frame.

    Returns ``(new_metric, invariant)``: the positive operator S defining
    ``<x, y>_0 = <S x, y>`` and the Gram matrix of the frame under it. The
    postcondition (the frame re-analyzed under the new metric is normalized
    tight) is checked and enforced here.
    """
    report = analyze(frame, tol=tol)
    if not report.is_frame:
        raise NotAFrame("generators do not span their submodule")
    s_flats = [mc.pinv(g, rank_tol=tol) for g in frame.gram_flats()]
    new_metric = ms.operator_from_flats(s_flats, frame.shape, frame.rank, frame.rank)
    lo, hi = metric_bounds(frame, new_metric, tol=tol)
    if abs(lo - 1.0) > 100 * tol or abs(hi - 1.0) > 100 * tol:
        raise NotAFrame(f"re-metricized bounds ({lo}, {hi}) are not normalized tight")
    invariant = _gram_under_metric(frame, s_flats)
    return new_metric, invariant


def metric_bounds(frame: Frame, metric: ModuleOperator, tol: float = DEFAULT_TOL):
    """Frame bounds of a frame measured in the inner product <W x, y>.

    Equivalent to the extreme nonzero eigenvalues of W^(1/2) G W^(1/2), the
    operator inequality form of the cone inequality under the new metric.
    """
    lo, hi = np.inf, 0.0
    top = 0.0
    pooled = []
    for g, wflat in zip(frame.gram_flats(), metric.flats()):
        root = mc.sqrt_psd((wflat + wflat.conj().T) / 2.0)
        h = root @ g @ root
        w, _ = mc.eig_hermitian((h + h.conj().T) / 2.0)
        pooled.append(w)
        if len(w):
            top = max(top, w[-1])
    for w in pooled:
        keep = w > tol * top
        if keep.any():
            lo = min(lo, float(w[keep][0]))
            hi = max(hi, float(w[keep][-1]))
    if not np.isfinite(lo):
        lo = hi = 1.0
    return lo, hi


def gram_gap(a: GramInvariant, b: GramInvariant) -> float:
    """Largest entrywise algebra-norm difference of two invariants."""
    if a.k != b.k:
        raise ShapeMismatch("invariants have different sizes")
    worst = 0.0
    for ra, rb in zip(a.gram, b.gram):
        for ea, eb in zip(ra, rb):
            worst = max(worst, cstar.norm(ea - eb))
    return worst


def build_unitary_from_matching_grams(f: Frame, g: Frame, tol: float = DEFAULT_TOL) -> ModuleOperator:
    """Connecting unitary V with V(x_i) = y_i from equal Gram matrices.

    Both frames must be normalized tight with nonzero elements; V is the
    synthesis map of g applied to the analysis map of f, and matching Gram
    data forces it to preserve inner products.
    """
    if f.count != g.count:
        raise ShapeMismatch("element counts differ")
    if f.shape.blocks != g.shape.blocks:
        raise ShapeMismatch("frames live over different algebras")
    for frame in (f, g):
        rep = analyze(frame, tol=tol)
        if not rep.is_normalized_tight:
            raise NotNormalizedTight("both frames must be normalized tight")
        if any(ms.vector_norm(x) <= tol for x in frame.elements):
            raise NotNormalizedTight("all elements must be nonzero")

    gram_f = _gram_under_metric(f, [np.eye(fl.shape[0]) for fl in f.gram_flats()])
    gram_g = _gram_under_metric(g, [np.eye(fl.shape[0]) for fl in g.gram_flats()])
    scale = 1.0 + max(cstar.norm(e) for row in gram_f.gram for e in row)
    gap = gram_gap(gram_f, gram_g)
    if gap > tol * scale:
        raise GramMismatch(f"gram matrices differ by {gap:.3e}")

    flats = [tf @ tg.conj().T for tf, tg in zip(f.theta_flats(), g.theta_flats())]
    return ms.operator_from_flats(flats, f.shape, f.rank, g.rank)


@dataclass(frozen=True)
class MpReport:
    """Residuals of the four Moore-Penrose identities for a pair (F, G)."""

    fgf: float
    gfg: float
    fg_adjoint: float
    gf_adjoint: float
    expansion_f: float
    expansion_g: float

    def max_identity_residual(self) -> float:
        return max(self.fgf, self.gfg, self.fg_adjoint, self.gf_adjoint)


def change_of_basis_mp(f: Frame, g: Frame, tol: float = DEFAULT_TOL):
    """Coefficient matrices between two Riesz bases of the same module.

    ``F[i][j] = <y_i, S_f(x_j)>`` expands each y_i in the x-basis and
    ``G[j][i] = <x_j, S_g(y_i)>`` goes back; the two matrices verify the
    four Moore-Penrose identities over the algebra. Returns ``(F, G,
    report)`` with the entries as nested AlgebraElement lists.
    """
    for frame in (f, g):
        rz = riesz_check(frame, tol=max(tol, 1e-8))
        if not rz.is_riesz_basis:
            raise NotRieszBasis("both inputs must be Riesz bases")
    if f.shape.blocks != g.shape.blocks or f.rank != g.rank:
        raise ShapeMismatch("bases do not generate the same module")

    sf = frame_operator(f, tol=tol).flats()
    sg = frame_operator(g, tol=tol).flats()
    shape = f.shape
    l, k = g.count, f.count

    def coeff(target, dual_s, source):
        blocks = [
            yf @ sflat @ xf.conj().T
            for yf, sflat, xf in zip(target.flats(), dual_s, source.flats())
        ]
        return AlgebraElement(shape, blocks)

    f_mat = [[coeff(g.elements[i], sf, f.elements[j]) for j in range(k)] for i in range(l)]
    g_mat = [[coeff(f.elements[j], sg, g.elements[i]) for i in range(l)] for j in range(k)]

    def expansion_residual(coeffs, basis, targets):
        worst = 0.0
        for i, row in enumerate(coeffs):
            acc = ms.zero_vector(shape, basis[0].rank)
            for j, c in enumerate(row):
                acc = acc + basis[j].left_mul(c)
            diff = acc - targets[i]
            worst = max(worst, ms.vector_norm(diff) / (1.0 + ms.vector_norm(targets[i])))
        return worst

    res_f = expansion_residual(f_mat, list(f.elements), list(g.elements))
    res_g = expansion_residual(g_mat, list(g.elements), list(f.elements))
    limit = max(tol * 1e3, 1e-6)
    if res_f > limit or res_g > limit:
        raise ExpansionResidualTooLarge(f"expansion residuals {res_f:.3e}, {res_g:.3e}")

    ff = cstar.block_matrix_to_flats(f_mat, shape)
    gf = cstar.block_matrix_to_flats(g_mat, shape)
    fgf = gfg = fga = gfa = 0.0
    for a, b in zip(ff, gf):
        fgf = max(fgf, float(np.abs(a @ b @ a - a).max(initial=0.0)))
        gfg = max(gfg, float(np.abs(b @ a @ b - b).max(initial=0.0)))
        ab = a @ b
        ba = b @ a
        fga = max(fga, float(np.abs(ab - ab.conj().T).max(initial=0.0)))
        gfa = max(gfa, float(np.abs(ba - ba.conj().T).max(initial=0.0)))
    report = MpReport(fgf, gfg, fga, gfa, res_f, res_g)
    return f_mat, g_mat, report
