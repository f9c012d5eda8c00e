"""
Tests for the single-qubit linear algebra kernel.
"""
import itertools
import math

import numpy as np
import pytest

from qva_transfer.core.errors import DomainError, PreconditionError
from qva_transfer.core.qcore import (
    IDENTITY,
    PauliAxis,
    adjoint_linearization,
    as_axis,
    basis_state,
    commutator,
    conjugate,
    dagger,
    expectation,
    frobenius_norm,
    is_hermitian,
    is_unitary,
    pauli,
    pauli_exponential,
    rotation_gate,
)


def _random_hermitian(rng: np.random.Generator, max_norm: float = 2.0) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = (a + dagger(a)) / 2.0
    return h * (max_norm * rng.uniform(0.2, 1.0) / frobenius_norm(h))


class TestPauli:
    """Test Pauli matrices and axis handling."""

    def test_standard_convention(self):
        """Test the three matrices match the standard convention."""
        assert np.array_equal(pauli(1), np.array([[0, 1], [1, 0]]))
        assert np.array_equal(pauli(2), np.array([[0, -1j], [1j, 0]]))
        assert np.array_equal(pauli(3), np.array([[1, 0], [0, -1]]))

    def test_involution_and_hermiticity(self):
        """Test sigma_k is Hermitian, traceless and squares to I."""
        for k in PauliAxis:
            sigma = pauli(k)
            assert np.allclose(sigma @ sigma, IDENTITY)
            assert is_hermitian(sigma)
            assert abs(np.trace(sigma)) == 0

    def test_returns_copy(self):
        """Test callers cannot mutate the shared matrices."""
        sigma = pauli(3)
        sigma[0, 0] = 7
        assert pauli(3)[0, 0] == 1

    @pytest.mark.parametrize("bad", [0, 4, -1, 1.0, True, "z"])
    def test_invalid_axis(self, bad):
        """Test invalid axes raise DomainError."""
        with pytest.raises(DomainError):
            as_axis(bad)

    def test_commutation_relations(self):
        """Test [sigma_a, sigma_b] = 2i eps_abc sigma_c for all ordered pairs."""
        for a, b, c in itertools.permutations((1, 2, 3)):
            sign = 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1
            expected = 2j * sign * pauli(c)
            assert frobenius_norm(commutator(pauli(a), pauli(b)) - expected) <= 1e-14

    def test_commutator_antisymmetry(self):
        """Test [A, A] = 0 and [A, B] = -[B, A]."""
        rng = np.random.default_rng(3)
        a, b = _random_hermitian(rng), _random_hermitian(rng)
        assert np.allclose(commutator(a, a), 0)
        assert np.allclose(commutator(a, b), -commutator(b, a))


class TestRotationGate:
    """Test closed-form Pauli rotations."""

    def test_zero_angle_is_identity(self):
        """Test rotation_gate(3, 0) is I."""
        assert np.array_equal(rotation_gate(3, 0.0), IDENTITY)

    def test_half_turn_about_y(self):
        """Test R_y(pi) = [[0, -1], [1, 0]]."""
        assert np.allclose(rotation_gate(2, math.pi), [[0, -1], [1, 0]], atol=1e-15)

    def test_group_properties(self):
        """Test unitarity, unit determinant, inverse and angle additivity."""
        rng = np.random.default_rng(0)
        for k in PauliAxis:
            alpha, beta = rng.uniform(-10, 10, 2)
            gate = rotation_gate(k, alpha)
            assert is_unitary(gate, tol=1e-12)
            assert abs(np.linalg.det(gate) - 1.0) <= 1e-12
            assert frobenius_norm(gate @ rotation_gate(k, -alpha) - IDENTITY) <= 1e-12
            composed = gate @ rotation_gate(k, beta)
            assert frobenius_norm(composed - rotation_gate(k, alpha + beta)) <= 1e-12

    def test_vectorized_angles(self):
        """Test an array of angles yields a stack of gates."""
        angles = np.array([0.1, 0.2, 0.3])
        stack = rotation_gate(1, angles)
        assert stack.shape == (3, 2, 2)
        assert np.allclose(stack[1], rotation_gate(1, 0.2))

    def test_non_finite_angle(self):
        """Test NaN and infinite angles are rejected."""
        with pytest.raises(PreconditionError):
            rotation_gate(1, float("nan"))
        with pytest.raises(PreconditionError):
            rotation_gate(2, np.array([0.0, np.inf]))

    def test_pauli_exponential(self):
        """Test exp(i t sigma) = cos t I + i sin t sigma."""
        t = 0.37
        expected = math.cos(t) * IDENTITY + 1j * math.sin(t) * pauli(1)
        assert frobenius_norm(pauli_exponential(1, t) - expected) <= 1e-15


class TestConjugate:
    """Test the adjoint action and its linearization."""

    def test_identity_action(self):
        """Test conjugation by I leaves H unchanged."""
        h = _random_hermitian(np.random.default_rng(1))
        assert np.allclose(conjugate(IDENTITY, h), h)

    def test_commuting_generator(self):
        """Test Z rotations fix sigma_3."""
        for theta in (0.3, -2.0, 5.5):
            assert frobenius_norm(conjugate(rotation_gate(3, theta), pauli(3)) - pauli(3)) <= 1e-14

    def test_quarter_turn_about_y(self):
        """Test R_y(pi/2) sigma_3 R_y(pi/2)^dagger = sigma_1."""
        result = conjugate(rotation_gate(2, math.pi / 2), pauli(3))
        assert frobenius_norm(result - pauli(1)) <= 1e-14

    def test_preserves_hermiticity_and_trace(self):
        """Test conjugating a Hermitian operator keeps it Hermitian with equal trace."""
        rng = np.random.default_rng(2)
        for _ in range(20):
            h = _random_hermitian(rng)
            u = rotation_gate(int(rng.integers(1, 4)), rng.uniform(-5, 5))
            result = conjugate(u, h)
            assert is_hermitian(result, tol=1e-12)
            assert abs(np.trace(result) - np.trace(h)) <= 1e-12

    def test_non_unitary_rejected(self):
        """Test a non-unitary conjugator raises PreconditionError."""
        with pytest.raises(PreconditionError):
            conjugate(2.0 * IDENTITY, pauli(3))

    def test_linearization_zero_step(self):
        """Test t = 0 returns B exactly."""
        b = _random_hermitian(np.random.default_rng(4))
        assert np.array_equal(adjoint_linearization(2, 0.0, b), b)

    def test_linearization_small_step(self):
        """Test the first-order expansion is accurate to 1e-5 at t = 1e-3."""
        t = 1e-3
        exact = conjugate(pauli_exponential(1, t), pauli(3))
        assert frobenius_norm(exact - adjoint_linearization(1, t, pauli(3))) <= 1e-5

    def test_linearization_remainder_is_second_order(self):
        """Test the log-log slope of the remainder against t lies in [1.9, 2.1]."""
        rng = np.random.default_rng(5)
        steps = np.logspace(-4, -1, 7)
        for _ in range(20):
            b = _random_hermitian(rng)
            k = int(rng.integers(1, 4))
            errors = [
                frobenius_norm(conjugate(pauli_exponential(k, t), b) - adjoint_linearization(k, t, b))
                for t in steps
            ]
            slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
            assert 1.9 <= slope <= 2.1

    def test_linearization_error_quarters_when_step_halves(self):
        """Test halving t divides the remainder by about four."""
        b = pauli(3)
        error = lambda t: frobenius_norm(conjugate(pauli_exponential(1, t), b) - adjoint_linearization(1, t, b))
        assert error(1e-2) / error(5e-3) == pytest.approx(4.0, rel=1e-2)


class TestExpectation:
    """Test expectation values."""

    def test_basis_states(self):
        """Test <0|Z|0> = 1 and <1|Z|1> = -1."""
        assert expectation(basis_state(0), pauli(3)) == 1.0
        assert expectation(basis_state(1), pauli(3)) == -1.0

    def test_superposition(self):
        """Test the equal superposition has zero Z expectation."""
        plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
        assert expectation(plus, pauli(3)) == pytest.approx(0.0, abs=1e-15)

    def test_within_spectrum(self):
        """Test expectations lie between the extreme eigenvalues."""
        rng = np.random.default_rng(6)
        for _ in range(20):
            h = _random_hermitian(rng)
            lo, hi = np.linalg.eigvalsh(h)
            state = rng.normal(size=2) + 1j * rng.normal(size=2)
            state = state / np.linalg.norm(state)
            value = expectation(state, h)
            assert lo - 1e-12 <= value <= hi + 1e-12

    def test_batched_states(self):
        """Test a stack of states yields an array of expectations."""
        states = np.stack([basis_state(0), basis_state(1)])
        assert np.array_equal(expectation(states, pauli(3)), [1.0, -1.0])

    def test_non_hermitian_rejected(self):
        """Test a non-Hermitian observable raises PreconditionError."""
        with pytest.raises(PreconditionError):
            expectation(basis_state(0), np.array([[0, 1], [0, 0]], dtype=complex))

    def test_unnormalized_state_rejected(self):
        """Test a state with norm != 1 raises PreconditionError."""
        with pytest.raises(PreconditionError):
            expectation(np.array([1.0, 1.0], dtype=complex), pauli(3))

    def test_invalid_basis_index(self):
        """Test basis_state only accepts 0 and 1."""
        with pytest.raises(DomainError):
            basis_state(2)
