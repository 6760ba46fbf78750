"""Kernel tests: tensor products, qubit permutation, partial trace, checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzdist import qmat

from _oracles import kron_oracle, partial_trace_oracle, permute_oracle

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_matrix(seed, dim):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_density(seed, dim):
    a = random_matrix(seed, dim)
    rho = a @ a.conj().T
    return rho / rho.trace()


class TestTensor:
    def test_identity_case(self):
        np.testing.assert_array_equal(qmat.tensor(I2, I2), np.eye(4))

    def test_x_tensor_identity_structure(self):
        out = qmat.tensor(X, I2)
        expected = np.zeros((4, 4), dtype=complex)
        for i, j in ((0, 2), (1, 3), (2, 0), (3, 1)):
            expected[i, j] = 1
        np.testing.assert_array_equal(out, expected)

    def test_basis_bookkeeping(self):
        p0 = np.diag([1, 0]).astype(complex)
        p1 = np.diag([0, 1]).astype(complex)
        out = qmat.tensor(p0, p1)
        expected = np.zeros((4, 4), dtype=complex)
        expected[1, 1] = 1
        np.testing.assert_array_equal(out, expected)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_matches_loop_oracle(self, seed):
        a = random_matrix(seed, 2)
        b = random_matrix(seed + 1, 4)
        np.testing.assert_allclose(qmat.tensor(a, b), kron_oracle(a, b), atol=1e-14)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_associative(self, seed):
        a = random_matrix(seed, 2)
        b = random_matrix(seed + 1, 2)
        c = random_matrix(seed + 2, 2)
        np.testing.assert_allclose(
            qmat.tensor(qmat.tensor(a, b), c),
            qmat.tensor(a, qmat.tensor(b, c)),
            atol=1e-13,
        )


class TestPermuteQubits:
    def test_identity_perm(self):
        m = random_matrix(0, 8)
        np.testing.assert_array_equal(qmat.permute_qubits(m, [0, 1, 2]), m)

    def test_swap_is_tensor_swap(self):
        a = random_matrix(1, 2)
        b = random_matrix(2, 2)
        np.testing.assert_allclose(
            qmat.permute_qubits(qmat.tensor(a, b), [1, 0]),
            qmat.tensor(b, a),
            atol=1e-15,
        )

    def test_pairing_perm_matches_index_remap(self):
        # the layout change used by the protocol, checked entry by entry
        m = random_matrix(3, 64)
        perm = [0, 3, 1, 4, 2, 5]
        np.testing.assert_array_equal(
            qmat.permute_qubits(m, perm), permute_oracle(m, perm)
        )

    @given(seed=st.integers(0, 10_000), n=st.integers(1, 3), data=st.data())
    @settings(max_examples=30, deadline=None)
    def test_round_trip_is_exact(self, seed, n, data):
        perm = data.draw(st.permutations(range(n)))
        m = random_matrix(seed, 2**n)
        inverse = list(np.argsort(perm))
        out = qmat.permute_qubits(qmat.permute_qubits(m, list(perm)), inverse)
        np.testing.assert_array_equal(out, m)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            qmat.permute_qubits(np.eye(4), [0, 0])

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qmat.permute_qubits(np.eye(4), [0, 1], n=3)


class TestPartialTrace:
    def test_product_state_factorizes(self):
        rho_a = random_density(4, 2)
        rho_b = random_density(5, 2)
        out = qmat.partial_trace(qmat.tensor(rho_a, rho_b), keep={0})
        np.testing.assert_allclose(out, rho_a, atol=1e-14)

    def test_ghz_marginal_is_maximally_mixed(self):
        from ghzdist.states import ghz_density

        out = qmat.partial_trace(ghz_density(), keep={0})
        np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-14)

    def test_keep_all_is_identity(self):
        m = random_matrix(6, 8)
        np.testing.assert_array_equal(qmat.partial_trace(m, keep={0, 1, 2}), m)

    @given(seed=st.integers(0, 10_000), data=st.data())
    @settings(max_examples=30, deadline=None)
    def test_matches_basis_sum_oracle(self, seed, data):
        n = data.draw(st.integers(1, 3))
        keep = data.draw(
            st.sets(st.integers(0, n - 1), min_size=1, max_size=n)
        )
        m = random_matrix(seed, 2**n)
        np.testing.assert_allclose(
            qmat.partial_trace(m, keep),
            partial_trace_oracle(m, keep, n),
            atol=1e-13,
        )

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_preserves_trace_and_hermiticity(self, seed):
        rho = random_density(seed, 8)
        out = qmat.partial_trace(rho, keep={1})
        assert abs(out.trace() - rho.trace()) < 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-12

    def test_rejects_bad_keep(self):
        with pytest.raises(ValueError):
            qmat.partial_trace(np.eye(4), keep={0, 5})


class TestIsUnitary:
    def test_identity(self):
        assert qmat.is_unitary(np.eye(4), 1e-10)

    def test_scaled_identity_fails(self):
        assert not qmat.is_unitary(0.5 * np.eye(4), 1e-10)

    def test_catalog_gate(self):
        from ghzdist.unitaries import u1

        assert qmat.is_unitary(u1().matrix, 1e-10)


class TestValidateDensity:
    def test_ghz_is_valid(self):
        from ghzdist.states import ghz_density

        report = qmat.validate_density(ghz_density(), 1e-10)
        assert report.hermitian and report.unit_trace and report.positive

    def test_perturbed_ghz_is_valid(self):
        from ghzdist.states import ghz_density

        rho = 0.95 * ghz_density() + (0.05 / 8) * np.eye(8)
        assert qmat.validate_density(rho, 1e-10).ok

    def test_non_hermitian_flagged(self):
        m = np.eye(4, dtype=complex)
        m[0, 1] = 1j
        report = qmat.validate_density(m)
        assert not report.hermitian

    def test_trace_and_positivity_flagged(self):
        assert not qmat.validate_density(2 * np.eye(4) / 4 + np.eye(4) / 4).unit_trace
        assert not qmat.validate_density(np.diag([1.5, -0.5, 0, 0])).positive

    def test_rejects_nan(self):
        m = np.eye(4, dtype=complex)
        m[0, 0] = np.nan
        with pytest.raises(ValueError):
            qmat.validate_density(m)
