"""Gate catalog, condition systems, classification, decomposition checks."""

import numpy as np
import pytest

from ghzdist import qmat
from ghzdist.unitaries import (
    CNOT_FLAG_TO_KEEP,
    CNOT_KEEP_TO_FLAG,
    H_ON_FLAG,
    H_ON_KEEP,
    X_ON_FLAG,
    SolutionClass,
    TwoQubitUnitary,
    check_coherent_conditions,
    check_fixed_point,
    check_unitarity,
    classify_solution,
    rz_on_keep,
    u1,
    u2,
    u3,
    verify_decomposition,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)


def diag_pattern(phase: complex) -> TwoQubitUnitary:
    """Permutation-like matrix with U[0,1] = 1 and U[2,2] = phase."""
    m = np.array(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, phase, 0], [0, 0, 0, 1]], dtype=complex
    )
    return TwoQubitUnitary(m, f"diag[{phase:.3f}]")


class TestCatalogMatrices:
    def test_u1_entries(self):
        m = u1().matrix
        np.testing.assert_array_equal(m[0], [0, 1, 0, 0])
        np.testing.assert_array_equal(m[1], [1, 0, 0, 0])
        np.testing.assert_array_equal(m[2], [0, 0, 1, 0])
        np.testing.assert_array_equal(m[3], [0, 0, 0, 1])

    def test_u1_is_involution(self):
        m = u1().matrix
        np.testing.assert_allclose(m @ m, np.eye(4), atol=1e-15)

    def test_u2_entries(self):
        m = u2().matrix
        expected = np.array(
            [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, -1, 1, 0]], dtype=complex
        ) * SQRT_HALF
        np.testing.assert_allclose(m, expected, atol=1e-15)
        assert m[0, 3] == pytest.approx(SQRT_HALF)

    def test_u2_column_norms(self):
        norms = np.linalg.norm(u2().matrix, axis=0)
        np.testing.assert_allclose(norms, np.ones(4), atol=1e-15)

    def test_u3_zero_entries(self):
        m = u3(0).matrix
        expected = np.array(
            [[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 0, -1], [0, 1, -1, 0]], dtype=complex
        ) * SQRT_HALF
        np.testing.assert_allclose(m, expected, atol=1e-15)
        assert m[2, 3] == pytest.approx(-SQRT_HALF)

    def test_u3_period_six(self):
        np.testing.assert_array_equal(u3(6).matrix, u3(0).matrix)
        np.testing.assert_allclose(u3(-1).matrix, u3(5).matrix, atol=1e-15)

    @pytest.mark.parametrize("n", range(-2, 4))
    def test_u3_family_unitary(self, n):
        assert qmat.is_unitary(u3(n).matrix, 1e-12)

    def test_catalog_unitarity_residuals(self):
        for gate in (u1(), u2(), u3(0), u3(1), u3(-2)):
            report = check_unitarity(gate, 1e-12)
            assert report.passed, gate.label

    def test_constructor_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            TwoQubitUnitary(0.5 * np.eye(4))

    def test_constructor_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            TwoQubitUnitary(np.eye(8))


class TestFixedPointConditions:
    def test_u1_passes(self):
        assert check_fixed_point(u1()).passed

    def test_u2_passes(self):
        assert check_fixed_point(u2()).passed

    def test_u3_fails(self):
        report = check_fixed_point(u3(0))
        assert not report.passed
        # the violated conditions and their sizes
        failing = dict(report.residuals)
        assert failing["cube_sums_equal"] == pytest.approx(SQRT_HALF, abs=1e-12)
        assert failing["cross_sum_r2r2r0"] == pytest.approx(SQRT_HALF, abs=1e-12)

    def test_report_invariant(self):
        report = check_fixed_point(u2())
        assert report.passed == all(r < report.tolerance for _, r in report.residuals)


class TestCoherentConditions:
    def test_u1_passes(self):
        assert check_coherent_conditions(u1()).passed

    def test_u2_fails_with_nonzero_residuals(self):
        report = check_coherent_conditions(u2())
        assert not report.passed
        failing = dict(report.residuals)
        assert failing["c3[x=1]"] == pytest.approx(SQRT_HALF, abs=1e-12)
        assert failing["c4[x=1]"] == pytest.approx(SQRT_HALF, abs=1e-12)

    def test_u3_fails(self):
        report = check_coherent_conditions(u3(0))
        assert not report.passed
        failing = dict(report.residuals)
        assert failing["c6"] == pytest.approx(SQRT_HALF, abs=1e-12)
        assert failing["c7[x=2]"] == pytest.approx(SQRT_HALF, abs=1e-12)

    def test_instance_count(self):
        assert len(check_coherent_conditions(u1()).residuals) == 13


class TestClassification:
    def test_u1_is_type_a_phase_zero(self):
        assert classify_solution(u1()) == SolutionClass("A", 0.0)

    def test_u2_is_unclassified(self):
        assert classify_solution(u2()) == SolutionClass(None, None)

    def test_diag_pattern_with_third_phase(self):
        out = classify_solution(diag_pattern(np.exp(2j * np.pi / 3)))
        assert out.kind == "A"
        assert out.relative_phase == pytest.approx(2 * np.pi / 3)

    def test_type_b_pattern(self):
        m = np.array(
            [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
        out = classify_solution(TwoQubitUnitary(m))
        assert out.kind == "B"
        assert out.relative_phase == pytest.approx(0.0)

    def test_disallowed_phase_rejected(self):
        out = classify_solution(diag_pattern(np.exp(1j * np.pi / 2)))
        assert out == SolutionClass(None, None)

    def test_stable_under_global_phase(self):
        gate = TwoQubitUnitary(np.exp(0.7j) * u1().matrix)
        assert classify_solution(gate) == SolutionClass("A", 0.0)

    @pytest.mark.parametrize("sign", (1, -1))
    def test_third_phase_patterns_satisfy_both_systems(self, sign):
        # recorded outcome: both +-2pi/3 diagonal patterns pass the
        # fixed-point and the coherent-cancellation systems numerically
        gate = diag_pattern(np.exp(sign * 2j * np.pi / 3))
        assert check_fixed_point(gate).passed
        assert check_coherent_conditions(gate).passed


class TestVerifyDecomposition:
    def test_u1_decomposition(self):
        assert verify_decomposition(u1(), [CNOT_KEEP_TO_FLAG, X_ON_FLAG]) < 1e-12

    def test_u2_decomposition(self):
        assert verify_decomposition(u2(), [H_ON_FLAG, CNOT_FLAG_TO_KEEP]) < 1e-12

    def test_u3_zero_decomposition(self):
        assert verify_decomposition(u3(0), [H_ON_KEEP, CNOT_KEEP_TO_FLAG]) < 1e-12

    @pytest.mark.parametrize("n", (-2, 1, 2, 3))
    def test_u3_family_decomposition_with_z_rotations(self, n):
        theta = n * np.pi / 3.0
        factors = [rz_on_keep(theta), H_ON_KEEP, CNOT_KEEP_TO_FLAG, rz_on_keep(theta)]
        assert verify_decomposition(u3(n), factors) < 1e-12

    def test_wrong_decomposition_distance(self):
        assert verify_decomposition(u1(), [np.eye(4)]) == pytest.approx(1.0)

    def test_global_phase_ignored(self):
        factors = [np.exp(1.3j) * CNOT_KEEP_TO_FLAG, X_ON_FLAG]
        assert verify_decomposition(u1(), factors) < 1e-12

    def test_rejects_bad_factor_shape(self):
        with pytest.raises(ValueError):
            verify_decomposition(u1(), [np.eye(2)])
