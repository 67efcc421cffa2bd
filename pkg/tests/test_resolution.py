"""Resolutions of the identity: verification, range projection, polar data."""

import numpy as np
import pytest

from modframe import cstar
from modframe import frames as fr
from modframe import module_space as ms
from modframe import resolution as rs
from modframe import sampling as sp
from modframe.errors import ResolutionFailed


def projections_fixture():
    p1 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    p2 = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    p3 = np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)
    return rs.ResolutionSequence([p1, p2, p3])


class TestVerify:
    def test_orthogonal_projections_pass(self):
        rep = rs.verify_resolution(projections_fixture())
        assert rep.passed
        assert rep.sum_residual <= 1e-12
        assert rep.reconstruction_residual <= 1e-12

    def test_single_identity(self):
        rep = rs.verify_resolution(rs.ResolutionSequence([np.eye(3)]))
        assert rep.passed

    def test_rows_of_random_isometry(self, rng):
        seq = rs.ResolutionSequence(sp.resolution_blocks(rng, 3, 4))
        rep = rs.verify_resolution(seq)
        assert rep.passed

    def test_defective_sequence_fails(self, rng):
        seq = rs.ResolutionSequence([np.eye(2) * 0.9])
        rep = rs.verify_resolution(seq)
        assert not rep.passed
        with pytest.raises(ResolutionFailed):
            rs.frame_transform_range(seq)


class TestRangeProjection:
    def test_single_block_q_is_identity(self):
        rep = rs.frame_transform_range(rs.ResolutionSequence([np.eye(2)]))
        np.testing.assert_allclose(rep.q, np.eye(2), atol=1e-12)

    def test_projections_fixture_block_diagonal(self):
        seq = projections_fixture()
        rep = rs.frame_transform_range(seq)
        d = seq.d
        for i, bi in enumerate(seq.blocks):
            for j, bj in enumerate(seq.blocks):
                block = rep.q[i * d:(i + 1) * d, j * d:(j + 1) * d]
                np.testing.assert_allclose(block, bi @ bj.conj().T, atol=1e-12)
        assert rep.idempotency_residual <= 1e-12

    def test_random_sequences_projection_laws(self, rng):
        seq = rs.ResolutionSequence(sp.resolution_blocks(rng, 3, 4))
        rep = rs.frame_transform_range(seq)
        assert rep.idempotency_residual <= 1e-9
        assert rep.adjoint_residual <= 1e-9
        assert rep.isometry_residual <= 1e-9
        assert rep.decomposition_residual <= 1e-9


class TestPolar:
    def test_projections_give_themselves(self):
        rep = rs.polar_factorization(projections_fixture())
        for (u, m), p in zip(rep.factors, projections_fixture().blocks):
            np.testing.assert_allclose(u, p, atol=1e-12)
            np.testing.assert_allclose(m, p, atol=1e-12)

    def test_identity_block(self):
        rep = rs.polar_factorization(rs.ResolutionSequence([np.eye(2)]))
        u, m = rep.factors[0]
        np.testing.assert_allclose(u, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(m, np.eye(2), atol=1e-12)

    def test_random_reconstruction(self, rng):
        seq = rs.ResolutionSequence(sp.resolution_blocks(rng, 4, 5))
        rep = rs.polar_factorization(seq)
        assert rep.reconstruction_residual <= 1e-9
        assert rep.support_residual <= 1e-9
        assert rep.moduli_sum_residual <= 1e-9

    def test_bookkeeping_identity(self, rng):
        # sum u_i m_i^2 u_i* = sum b_i b_i*, pure algebra
        seq = rs.ResolutionSequence(sp.resolution_blocks(rng, 3, 4))
        rep = rs.polar_factorization(seq)
        lhs = sum(u @ m @ m @ u.conj().T for u, m in rep.factors)
        rhs = sum(b @ b.conj().T for b in seq.blocks)
        assert np.abs(lhs - rhs).max() <= 1e-10


class TestCoefficientInequality:
    def test_projections_equality(self):
        rep = rs.coefficient_inequality(projections_fixture())
        assert rep.endpoint_residual <= 1e-12
        assert rep.dominance_defect <= 1e-12

    def test_single_block(self):
        rep = rs.coefficient_inequality(rs.ResolutionSequence([np.eye(2)]))
        assert rep.endpoint_residual <= 1e-12

    def test_random(self, rng):
        seq = rs.ResolutionSequence(sp.resolution_blocks(rng, 4, 4))
        rep = rs.coefficient_inequality(seq)
        assert rep.endpoint_residual <= 1e-9
        assert rep.dominance_defect <= 1e-9


def test_resolution_is_normalized_tight_module_frame(rng):
    """Reading the blocks as elements of the rank-one module over M_d."""
    d, k = 3, 4
    seq = rs.ResolutionSequence(sp.resolution_blocks(rng, d, k))
    sh = cstar.AlgebraShape((d,))
    elements = [
        ms.ModuleVector(sh, [cstar.AlgebraElement(sh, [b])]) for b in seq.blocks
    ]
    frame = fr.Frame(ms.SubmoduleDescriptor(sh, 1), elements)
    report = fr.analyze(frame)
    assert report.is_normalized_tight
    assert report.lower == pytest.approx(1.0, abs=1e-10)
    assert report.upper == pytest.approx(1.0, abs=1e-10)
