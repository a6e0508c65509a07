import numpy as np
import pytest

from qgatesim import linalg
from qgatesim.linalg import (
    CapacityError,
    PermutationOperator,
    apply,
    basis_state,
    conjugate_transpose,
    dot,
    is_unitary,
    tensor,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def random_unitary(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestTensor:
    def test_left_factor_is_most_significant(self):
        """tensor(X, I) flips the first label bit: |00> -> |10>."""
        op = tensor(X, np.eye(2))
        np.testing.assert_array_equal(apply(op, basis_state(0, 4)), basis_state(2, 4))

    def test_z_on_first_qubit_signs(self):
        np.testing.assert_array_equal(np.diag(tensor(Z, np.eye(2))), [1, 1, -1, -1])

    def test_mixed_product_identity(self):
        """(A (x) B)(C (x) D) = AC (x) BD."""
        rng = np.random.default_rng(11)
        a, b, c, d = (random_unitary(4, rng) for _ in range(4))
        np.testing.assert_allclose(
            dot(tensor(a, b), tensor(c, d)), tensor(dot(a, c), dot(b, d)), atol=1e-12
        )

    def test_capacity_cap(self):
        with pytest.raises(CapacityError):
            tensor(np.eye(1 << 8), np.eye(1 << 8), max_dim=1 << 14)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            tensor(np.zeros((2, 3)), np.eye(2))
        with pytest.raises(ValueError):
            tensor(np.eye(3), np.eye(2))


class TestDotApply:
    def test_dot_is_composition(self):
        """dot(A, B) applied equals applying B then A."""
        rng = np.random.default_rng(3)
        a, b = random_unitary(8, rng), random_unitary(8, rng)
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        np.testing.assert_allclose(apply(dot(a, b), v), apply(a, apply(b, v)), atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dot(np.eye(2), np.eye(4))
        with pytest.raises(ValueError):
            apply(np.eye(4), basis_state(0, 2))

    def test_norm_preserved_under_unitaries(self):
        """1000 random states through random unitaries keep unit norm to 1e-10."""
        rng = np.random.default_rng(20)
        for dim in (2, 8, 16):
            u = random_unitary(dim, rng)
            for _ in range(1000 // 3):
                v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
                v /= np.linalg.norm(v)
                assert abs(linalg.norm(apply(u, v)) - 1.0) < 1e-10

    def test_state_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            apply(np.eye(2), np.zeros(3))


class TestConjugateTranspose:
    def test_involution_exact(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        np.testing.assert_array_equal(conjugate_transpose(conjugate_transpose(a)), a)

    def test_gives_unitary_inverse(self):
        u = random_unitary(16, np.random.default_rng(9))
        np.testing.assert_allclose(dot(conjugate_transpose(u), u), np.eye(16), atol=1e-12)


class TestUnitarity:
    def test_accepts_unitaries(self):
        assert is_unitary(H)
        assert is_unitary(np.eye(8))

    def test_rejects_non_unitaries(self):
        assert not is_unitary(np.array([[1, 0], [0, 0.5]], dtype=complex))

    def test_require_unitary_raises(self):
        with pytest.raises(ValueError, match="unitary"):
            linalg.require_unitary(2 * np.eye(2))


class TestPermutationOperator:
    def test_dense_round_trip_exact(self):
        perm = PermutationOperator(np.array([2, 0, 3, 1]))
        dense = perm.to_dense()
        assert PermutationOperator.from_dense(dense).targets.tolist() == [2, 0, 3, 1]
        # column j carries its single 1 in row targets[j]
        np.testing.assert_array_equal(dense[:, 0], basis_state(2, 4))

    def test_apply_matches_dense(self):
        rng = np.random.default_rng(5)
        targets = rng.permutation(16)
        perm = PermutationOperator(targets)
        v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(perm.apply(v), perm.to_dense() @ v, atol=1e-15)

    def test_inverse_composes_to_identity(self):
        perm = PermutationOperator(np.array([1, 2, 3, 0]))
        np.testing.assert_array_equal(
            perm.inverse().apply(perm.apply(basis_state(2, 4))), basis_state(2, 4)
        )

    def test_rejects_non_permutations(self):
        with pytest.raises(ValueError):
            PermutationOperator(np.array([0, 0, 1, 2]))
        with pytest.raises(ValueError):
            PermutationOperator.from_dense(H)

    def test_to_dense_respects_cap(self):
        perm = PermutationOperator(np.arange(8))
        with pytest.raises(CapacityError):
            perm.to_dense(max_dim=4)

    def test_dispatch_through_apply(self):
        perm = PermutationOperator(np.array([1, 0]))
        np.testing.assert_array_equal(apply(perm, basis_state(0, 2)), basis_state(1, 2))
