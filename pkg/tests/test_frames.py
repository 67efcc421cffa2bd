"""Frame engine: bounds, transform, duals, similarity, Riesz tests.

The cone inequality is always evaluated directly from inner products when
used as an oracle, independently of the Gram-operator route implemented in
``analyze``.
"""

import numpy as np
import pytest

from modframe import cstar
from modframe import frames as fr
from modframe import matrix_core as mc
from modframe import module_space as ms
from modframe import sampling as sp
from modframe.errors import (
    CountMismatch,
    EmptyFrame,
    NotAFrame,
    NotPartialIsometry,
    VectorOutsideModule,
)

SCALAR = cstar.AlgebraShape((1,))


def scalar_frame(rows, n):
    vecs = ms.embed_hilbert_frame(np.asarray(rows, dtype=complex), SCALAR)
    return fr.Frame(ms.SubmoduleDescriptor(SCALAR, n), vecs)


def cone_sum(frame, x):
    """sum_j <x, x_j> <x_j, x>, summed entry by entry."""
    acc = cstar.zero(frame.shape)
    for xj in frame.elements:
        acc = acc + cstar.mul(ms.inner(x, xj), ms.inner(xj, x))
    return acc


class TestAnalyze:
    def test_orthonormal_basis(self):
        report = fr.analyze(fr.standard_basis_frame((2, 1), 3))
        assert report.lower == pytest.approx(1.0, abs=1e-12)
        assert report.upper == pytest.approx(1.0, abs=1e-12)
        assert report.is_frame and report.is_tight and report.is_normalized_tight

    def test_diagonal_scaled_frame_bounds(self):
        # x_1 = e_1, x_2 = 3 e_2, x_3 = 2 e_3, x_4 = 2 e_4: bounds 1 and 9
        frame = scalar_frame(np.diag([1.0, 3.0, 2.0, 2.0]), 4)
        report = fr.analyze(frame)
        assert report.lower == pytest.approx(1.0, abs=1e-12)
        assert report.upper == pytest.approx(9.0, abs=1e-12)
        assert report.is_frame and not report.is_tight

    def test_duplicated_basis(self):
        frame = scalar_frame([[1, 0], [1, 0], [0, 1], [0, 1]], 2)
        report = fr.analyze(frame)
        assert report.lower == pytest.approx(2.0, abs=1e-12)
        assert report.upper == pytest.approx(2.0, abs=1e-12)

    def test_empty_frame(self):
        with pytest.raises(EmptyFrame):
            fr.analyze(fr.Frame(ms.SubmoduleDescriptor(SCALAR, 1), []))

    def test_cone_inequality_with_reported_bounds(self, rng):
        frame = sp.module_frame(rng, (2, 1), 2, 4)
        report = fr.analyze(frame)
        tol = report.tol
        for _ in range(5):
            x = sp.module_vector(rng, frame.shape, frame.rank)
            middle = cone_sum(frame, x)
            gram = ms.inner(x, x)
            assert cstar.is_positive(middle - report.lower * gram)
            assert cstar.is_positive(report.upper * gram - middle)
        # inflating C (or deflating D) by 10 tol must break on extreme probes
        for g, kb in zip(frame.gram_flats(), frame.shape.blocks):
            w, u = mc.eig_hermitian(g)
            for col, bound, sign in ((0, report.lower, +1), (-1, report.upper, -1)):
                flats = [np.zeros((k2, frame.rank * k2), dtype=complex) for k2 in frame.shape.blocks]
                bi = frame.shape.blocks.index(kb)
                flats[bi] = np.zeros((kb, frame.rank * kb), dtype=complex)
                flats[bi][0, :] = u[:, col].conj()
                x = ms.vector_from_flats(flats, frame.shape, frame.rank)
                middle = cone_sum(frame, x)
                gram = ms.inner(x, x)
                if sign > 0 and abs(w[col] - report.lower) < 1e-12:
                    bad = middle - (report.lower * (1 + 10 * tol)) * gram
                    assert not cstar.is_positive(bad, tol=tol * 1e-2)
                if sign < 0 and abs(w[col] - report.upper) < 1e-12:
                    bad = (report.upper / (1 + 10 * tol)) * gram - middle
                    assert not cstar.is_positive(bad, tol=tol * 1e-2)

    def test_non_generating_sequence_detected(self, rng):
        # a frame of a proper submodule is not a frame of the full module
        v = sp.module_partial_isometry(rng, (2,), 2, ranks=[2])
        sub = fr.from_partial_isometry(v)
        full = fr.Frame(ms.SubmoduleDescriptor(sub.shape, sub.rank), sub.elements)
        assert fr.analyze(sub).is_frame
        assert not fr.analyze(full).is_frame


class TestTransform:
    def test_orthonormal_basis_theta_is_identity(self):
        frame = fr.standard_basis_frame((2,), 3)
        ft = fr.frame_transform(frame)
        ident = ms.identity_operator((2,), 3)
        assert (ft.theta - ident).norm() <= 1e-12
        assert (ft.range_projection - ident).norm() <= 1e-12

    def test_synthesis_hits_elements(self, rng):
        frame = sp.module_frame(rng, (2, 1), 2, 5)
        ft = fr.frame_transform(frame)
        for j, xj in enumerate(frame.elements):
            ej = ms.basis_vector(frame.shape, frame.count, j)
            assert ms.vector_norm(ms.apply(ft.synthesis, ej) - xj) <= 1e-12

    def test_normalized_tight_theta_is_isometry(self, rng):
        frame = fr.from_partial_isometry(sp.module_partial_isometry(rng, (2, 1), 3))
        g = frame.gram_flats()
        for gf, pf in zip(g, frame.module.projection_flats()):
            assert np.abs(gf - pf).max() <= 1e-10

    def test_range_projection_of_doubled_vector(self):
        # {e_1/sqrt2, e_1/sqrt2} in C^1: Q = [[.5, .5], [.5, .5]]
        frame = scalar_frame([[1 / np.sqrt(2)], [1 / np.sqrt(2)]], 1)
        ft = fr.frame_transform(frame)
        q = ft.range_projection.flats()[0]
        np.testing.assert_allclose(q, np.full((2, 2), 0.5), atol=1e-12)

    def test_range_projection_idempotent_selfadjoint(self, rng):
        frame = sp.module_frame(rng, (2,), 2, 4)
        q = fr.frame_transform(frame).range_projection
        for f in q.flats():
            assert np.abs(f @ f - f).max() <= 1e-10
            assert np.abs(f - f.conj().T).max() <= 1e-12
        # normalized tight: Q e_j = theta(x_j)
        nt = fr.from_partial_isometry(sp.module_partial_isometry(rng, (2,), 2))
        ftnt = fr.frame_transform(nt)
        for j, xj in enumerate(nt.elements):
            ej = ms.basis_vector(nt.shape, nt.count, j)
            lhs = ms.apply(ftnt.range_projection, ej)
            rhs = ms.apply(ftnt.theta, xj)
            assert ms.vector_norm(lhs - rhs) <= 1e-10


class TestReconstruction:
    def test_tight_frame_is_self_dual(self, rng):
        frame = fr.from_partial_isometry(sp.module_partial_isometry(rng, (2, 1), 2))
        dual = fr.canonical_dual(frame)
        worst = max(
            ms.vector_norm(a - b) for a, b in zip(frame.elements, dual.elements)
        )
        assert worst <= 1e-9

    def test_diagonal_frame_dual_scales(self):
        frame = scalar_frame(np.diag([1.0, 3.0, 2.0, 2.0]), 4)
        dual = fr.canonical_dual(frame)
        # S(x_j) = x_j / <x_j, x_j> for a diagonal Gram operator
        for xj, dj in zip(frame.elements, dual.elements):
            scale = ms.inner(xj, xj).blocks[0][0, 0].real
            assert ms.vector_norm(dj - (1.0 / scale) * xj) <= 1e-12

    def test_random_reconstruction(self, rng):
        frame = sp.module_frame(rng, (2, 1), 2, 5)
        for _ in range(5):
            x = sp.module_vector(rng, frame.shape, frame.rank)
            err = ms.vector_norm(fr.reconstruct(frame, x) - x)
            assert err <= 1e-9 * (1.0 + ms.vector_norm(x))

    def test_vector_outside_module(self, rng):
        v = sp.module_partial_isometry(rng, (2,), 2, ranks=[2])
        frame = fr.from_partial_isometry(v)
        with pytest.raises(VectorOutsideModule):
            fr.reconstruct(frame, sp.module_vector(rng, (2,), 2))

    def test_dual_of_dual(self, rng):
        frame = sp.module_frame(rng, (1, 1), 2, 4)
        again = fr.canonical_dual(fr.canonical_dual(frame))
        worst = max(ms.vector_norm(a - b) for a, b in zip(frame.elements, again.elements))
        assert worst <= 1e-9


class TestPartialIsometry:
    def test_identity_gives_standard_basis(self):
        frame = fr.from_partial_isometry(ms.identity_operator((2, 1), 2))
        expected = fr.standard_basis_frame((2, 1), 2)
        for a, b in zip(frame.elements, expected.elements):
            assert ms.vector_norm(a - b) <= 1e-12

    def test_projection_input(self, rng):
        sh = cstar.AlgebraShape((2,))
        p = sp.module_partial_isometry(rng, sh, 2, ranks=[2])
        # make an honest orthogonal projection and use it as the isometry
        proj_flat = p.flats()[0].conj().T @ p.flats()[0]
        w, u = mc.eig_hermitian((proj_flat + proj_flat.conj().T) / 2)
        keep = u[:, w > 0.5]
        proj = ms.operator_from_flats([keep @ keep.conj().T], sh, 2, 2)
        frame = fr.from_partial_isometry(proj)
        report = fr.analyze(frame)
        assert report.is_normalized_tight
        assert report.lower == pytest.approx(1.0, abs=1e-10)

    def test_rejects_non_isometry(self, rng):
        t = sp.module_operator(rng, (2,), 2)
        with pytest.raises(NotPartialIsometry):
            fr.from_partial_isometry(t)

    def test_thousand_random_partial_isometries(self, rng):
        shapes = [(1,), (2,), (1, 1), (2, 1), (3,)]
        for trial in range(1000):
            shape = shapes[trial % len(shapes)]
            n = int(rng.integers(1, 4))
            v = sp.module_partial_isometry(rng, shape, n)
            report = fr.analyze(fr.from_partial_isometry(v))
            assert report.is_normalized_tight
            assert abs(report.lower - 1.0) <= 1e-9
            assert abs(report.upper - 1.0) <= 1e-9


class TestSimilarity:
    def test_frame_vs_itself(self, rng):
        frame = sp.module_frame(rng, (2,), 2, 4)
        res = fr.test_similarity(frame, frame)
        assert res.relation == "unitarily_equivalent"
        ident = ms.identity_operator(frame.shape, frame.rank)
        assert (res.witness - ident).norm() <= 1e-8
        assert res.element_residual <= 1e-9

    def test_frame_vs_canonical_dual(self, rng):
        frame = sp.module_frame(rng, (2,), 2, 4)
        dual = fr.canonical_dual(frame)
        res = fr.test_similarity(frame, dual)
        assert res.relation == "similar"
        assert res.element_residual <= 1e-8
        # the witness is the frame operator S = pinv(G)
        s = fr.frame_operator(frame)
        assert (res.witness - s).norm() <= 1e-8

    def test_swapped_basis_unitary(self):
        f = scalar_frame([[1, 0], [0, 1]], 2)
        g = scalar_frame([[0, 1], [1, 0]], 2)
        res = fr.test_similarity(f, g)
        assert res.relation == "unitarily_equivalent"
        np.testing.assert_allclose(
            res.witness.flats()[0], np.array([[0, 1], [1, 0]]), atol=1e-12
        )

    def test_unrelated_frames(self, rng):
        f = sp.module_frame(rng, (2,), 2, 4)
        # four elements of a proper submodule: analysis ranges cannot agree
        v = sp.module_partial_isometry(rng, (2,), 2, ranks=[2])
        sub = fr.from_partial_isometry(v)
        proj = sub.module.projection
        elements = [ms.apply(proj, sp.module_vector(rng, (2,), 2)) for _ in range(4)]
        g = fr.Frame(sub.module, elements)
        assert fr.analyze(g).is_frame
        res = fr.test_similarity(f, g)
        assert res.relation == "neither"

    def test_count_mismatch(self, rng):
        with pytest.raises(CountMismatch):
            fr.test_similarity(
                sp.module_frame(rng, (2,), 2, 4), sp.module_frame(rng, (2,), 2, 5)
            )


class TestRiesz:
    def test_standard_basis(self):
        report = fr.riesz_check(fr.standard_basis_frame((2, 1), 3))
        assert report.is_riesz_basis
        assert report.is_orthogonal_hilbert_basis
        assert report.kernel_generators == 0

    def test_doubled_vector_is_not_riesz(self):
        frame = scalar_frame([[1.0], [1.0]], 1)
        report = fr.riesz_check(frame)
        assert not report.is_riesz_basis
        assert report.kernel_generators >= 1
        assert report.max_summand_residual > 0.1

    def test_zero_divisor_riesz_basis(self):
        # over C + C the two idempotent coordinates form a Riesz basis of the
        # rank-one module even though the synthesis kernel is nontrivial
        sh = cstar.AlgebraShape((1, 1))
        x1 = ms.ModuleVector(sh, [cstar.AlgebraElement(sh, [[[1.0]], [[0.0]]])])
        x2 = ms.ModuleVector(sh, [cstar.AlgebraElement(sh, [[[0.0]], [[1.0]]])])
        frame = fr.Frame(ms.SubmoduleDescriptor(sh, 1), [x1, x2])
        report = fr.riesz_check(frame)
        assert report.is_riesz_basis
        assert report.kernel_generators == 2
        assert report.max_summand_residual <= 1e-12
        assert report.is_orthogonal_hilbert_basis

    def test_riesz_requires_frame(self, rng):
        v = sp.module_partial_isometry(rng, (2,), 2, ranks=[2])
        sub = fr.from_partial_isometry(v)
        full = fr.Frame(ms.SubmoduleDescriptor(sub.shape, sub.rank), sub.elements)
        with pytest.raises(NotAFrame):
            fr.riesz_check(full)


def test_direct_sum_reassembles_split_riesz_basis(rng):
    # chop a Riesz basis by complementary projections and re-assemble the
    # pieces orthogonally: z -> Pz + (1-P)z is unitary onto its range, so the
    # composed frame keeps the original bounds
    sh = cstar.AlgebraShape((2,))
    basis = sp.riesz_basis(rng, sh, 2)
    v = sp.module_partial_isometry(rng, sh, 2, ranks=[2])
    p = fr.from_partial_isometry(v).module.projection
    comp = ms.identity_operator(sh, 2) - p
    pw, pu = mc.eig_hermitian(comp.flats()[0])
    comp = ms.operator_from_flats([pu[:, pw > 0.5] @ pu[:, pw > 0.5].conj().T], sh, 2, 2)

    fa = fr.Frame(
        ms.SubmoduleDescriptor(sh, 2, p), [ms.apply(p, x) for x in basis.elements]
    )
    fb = fr.Frame(
        ms.SubmoduleDescriptor(sh, 2, comp), [ms.apply(comp, x) for x in basis.elements]
    )
    total = fr.direct_sum(fa, fb)
    assert total.rank == 4 and total.count == basis.count
    r0, rt = fr.analyze(basis), fr.analyze(total)
    assert rt.is_frame
    assert rt.lower == pytest.approx(r0.lower, rel=1e-9)
    assert rt.upper == pytest.approx(r0.upper, rel=1e-9)


def test_zero_elements_are_permitted(rng):
    # padding a frame with the zero vector changes nothing
    frame = sp.module_frame(rng, (2,), 2, 3)
    padded = fr.Frame(frame.module, list(frame.elements) + [ms.zero_vector(frame.shape, 2)])
    r0, r1 = fr.analyze(frame), fr.analyze(padded)
    assert r1.is_frame
    assert r1.lower == pytest.approx(r0.lower, rel=1e-12)
    assert r1.upper == pytest.approx(r0.upper, rel=1e-12)
    x = sp.module_vector(rng, frame.shape, 2)
    assert ms.vector_norm(fr.reconstruct(padded, x) - x) <= 1e-9 * (1 + ms.vector_norm(x))
