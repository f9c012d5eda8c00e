"""
Exact 2x2 complex linear algebra for a single qubit.

Operators are NumPy complex arrays of shape (..., 2, 2) and states are arrays of
shape (..., 2). Every function broadcasts over the leading axes, so a stack of
per-sample gates can be conjugated or measured in one call.

Convention:
    sigma_1 = [[0, 1], [1, 0]]
    sigma_2 = [[0, -i], [i, 0]]
    sigma_3 = [[1, 0], [0, -1]]
    rotation_gate(k, a) = cos(a/2) I - i sin(a/2) sigma_k
"""
from enum import IntEnum
from typing import Any, Union

import numpy as np

from .errors import DomainError, PreconditionError

Operator2 = np.ndarray
QubitState = np.ndarray
ArrayLike = Union[float, np.ndarray]

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
IMAG_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)


class PauliAxis(IntEnum):
    X = 1
    Y = 2
    Z = 3


_PAULI = {
    PauliAxis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliAxis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliAxis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
for _matrix in _PAULI.values():
    _matrix.setflags(write=False)


def as_axis(k: Any) -> PauliAxis:
    """Coerce an integer-like value to a PauliAxis.

    Raises:
        DomainError: If k is not exactly 1, 2 or 3
    """
    if isinstance(k, PauliAxis):
        return k
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"Pauli axis must be an integer in {{1, 2, 3}}, got {k!r}")
    try:
        return PauliAxis(int(k))
    except ValueError:
        raise DomainError(f"Pauli axis must be 1, 2 or 3, got {k}") from None


def pauli(k: Any) -> Operator2:
    """Return a fresh copy of sigma_k."""
    return _PAULI[as_axis(k)].copy()


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def frobenius_norm(a: np.ndarray) -> np.ndarray:
    return np.linalg.norm(a, axis=(-2, -1))


def _finite_angle(angle: ArrayLike, what: str) -> np.ndarray:
    values = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(values)):
        raise PreconditionError(f"{what} must be finite")
    return values


def rotation_gate(k: Any, angle: ArrayLike) -> Operator2:
    """Closed-form Pauli rotation exp(-(i/2) angle sigma_k).

    Args:
        k: Pauli axis (1, 2 or 3)
        angle: Rotation angle in radians; an array yields a stack of gates

    Returns:
        Array of shape angle.shape + (2, 2)
    """
    sigma = pauli(k)
    half = _finite_angle(angle, "Rotation angle")[..., None, None] / 2.0
    return np.cos(half) * IDENTITY - 1j * np.sin(half) * sigma


def pauli_exponential(k: Any, t: ArrayLike) -> Operator2:
    """exp(i t sigma_k), i.e. rotation_gate(k, -2t)."""
    return rotation_gate(k, -2.0 * _finite_angle(t, "Exponent"))


def commutator(a: Operator2, b: Operator2) -> Operator2:
    return a @ b - b @ a


def is_unitary(u: Operator2, tol: float = UNITARY_TOL) -> bool:
    deviation = frobenius_norm(u @ dagger(u) - IDENTITY)
    return bool(np.all(deviation <= tol))


def is_hermitian(a: Operator2, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.all(frobenius_norm(a - dagger(a)) <= tol))


def conjugate(u: Operator2, b: Operator2) -> Operator2:
    """Adjoint action u b u^dagger.

    Raises:
        PreconditionError: If u is not unitary within 1e-10
    """
    if not is_unitary(u):
        raise PreconditionError("Conjugating operator is not unitary")
    return u @ b @ dagger(u)


def adjoint_linearization(k: Any, t: ArrayLike, b: Operator2) -> Operator2:
    """First-order expansion B + i t [sigma_k, B] of exp(i t sigma_k) B exp(-i t sigma_k)."""
    step = _finite_angle(t, "Linearization step")[..., None, None]
    return b + 1j * step * commutator(pauli(k), b)


def basis_state(index: int) -> QubitState:
    if index not in (0, 1):
        raise DomainError(f"Computational basis index must be 0 or 1, got {index}")
    state = np.zeros(2, dtype=complex)
    state[index] = 1.0
    return state


def is_normalized(state: QubitState, tol: float = NORM_TOL) -> bool:
    norms = np.sum(np.abs(state) ** 2, axis=-1)
    return bool(np.all(np.abs(norms - 1.0) <= tol))


def apply(gate: Operator2, state: QubitState) -> QubitState:
    return np.einsum("...ij,...j->...i", gate, state)


def bilinear(state: QubitState, op: Operator2) -> np.ndarray:
    """Raw <psi| op |psi>, complex, broadcast over leading axes."""
    return np.einsum("...i,...ij,...j->...", np.conj(state), op, state)


def real_part(value: np.ndarray, scale: float, what: str) -> np.ndarray:
    """Drop the imaginary part after checking it is rounding noise.

    Raises:
        PreconditionError: If |imag| exceeds 1e-12 * max(1, scale)
    """
    limit = IMAG_TOL * max(1.0, float(scale))
    worst = float(np.max(np.abs(np.imag(value)), initial=0.0))
    if worst > limit:
        raise PreconditionError(f"{what} has imaginary residue {worst:.3e} > {limit:.1e}")
    return np.real(value)


def expectation(state: QubitState, h: Operator2) -> np.ndarray:
    """Expectation value <psi|H|psi> as a real number (or array over leading axes).

    Raises:
        PreconditionError: If h is not Hermitian or the state is not unit norm
    """
    if not is_hermitian(h):
        raise PreconditionError("Observable is not Hermitian")
    if not is_normalized(state):
        raise PreconditionError("State is not normalized")
    scale = float(np.max(frobenius_norm(h), initial=0.0))
    value = real_part(bilinear(state, h), scale, "Expectation value")
    return value if np.ndim(value) else float(value)
