"""
Single-qubit variational quantum circuit.

The model is f(x) = <psi0| V(x)^dagger U(theta)^dagger H U(theta) V(x) |psi0> with
V = V_d ... V_1 (V_1 acts first) built from encoding rotations of the scaled
features and U = U_L ... U_1 built from trainable rotations.

This module provides:
- Circuit, scaler, model and dataset value types
- Statevector forward evaluation and the sign decision rule
- Three gradient paths: nested conjugation (analytic), parameter shift, and the
  mixed-argument input sensitivity used by the transfer engine
- JSON persistence of trained models

Every evaluation accepts a single feature vector of shape (d,) or a batch of
shape (N, d) and returns a scalar/vector or a batch accordingly.
"""
import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from .errors import DataParseError, DomainError, PreconditionError, ShapeError
from .qcore import (
    PauliAxis,
    apply,
    as_axis,
    basis_state,
    bilinear,
    commutator,
    conjugate,
    dagger,
    expectation,
    frobenius_norm,
    is_hermitian,
    is_normalized,
    pauli,
    real_part,
    rotation_gate,
)

logger = logging.getLogger("qva.vqc_model")

CONSTRUCTION_TOL = 1e-12
SHIFT = math.pi / 2

Features = np.ndarray


@dataclass(frozen=True)
class CircuitSpec:
    """Ordered Pauli axes of the encoding gates V_j and variational gates U_l."""

    encoding_axes: Tuple[PauliAxis, ...]
    variational_axes: Tuple[PauliAxis, ...]

    def __post_init__(self) -> None:
        encoding = tuple(as_axis(k) for k in self.encoding_axes)
        variational = tuple(as_axis(k) for k in self.variational_axes)
        if not encoding:
            raise DomainError("Circuit needs at least one encoding gate")
        if not variational:
            raise DomainError("Circuit needs at least one variational gate")
        object.__setattr__(self, "encoding_axes", encoding)
        object.__setattr__(self, "variational_axes", variational)

    @property
    def d(self) -> int:
        return len(self.encoding_axes)

    @property
    def L(self) -> int:
        return len(self.variational_axes)


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """Affine map from raw features to rotation angles: (x - mean) * scale + offset.

    `scale` is in radians per feature unit and must be strictly positive.
    """

    mean: np.ndarray
    scale: np.ndarray
    offset: np.ndarray

    def __post_init__(self) -> None:
        arrays = [np.array(v, dtype=float).reshape(-1) for v in (self.mean, self.scale, self.offset)]
        if len({a.size for a in arrays}) != 1:
            raise ShapeError("Scaler mean, scale and offset must have the same length")
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise PreconditionError("Scaler parameters must be finite")
        if np.any(arrays[1] <= 0):
            raise DomainError("Scaler scale components must be strictly positive")
        for name, value in zip(("mean", "scale", "offset"), arrays):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def d(self) -> int:
        return int(self.mean.size)

    @classmethod
    def identity(cls, d: int) -> "FeatureScaler":
        return cls(np.zeros(d), np.ones(d), np.zeros(d))

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        angle_per_std: float = math.pi / 2,
        offset: Optional[Sequence[float]] = None,
    ) -> "FeatureScaler":
        """Standardize on X, then map one standard deviation to `angle_per_std` radians.

        Features with zero spread keep unit scale so the map stays invertible.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ShapeError("Scaler needs a non-empty (N, d) feature matrix")
        std = X.std(axis=0)
        std = np.where(std > 0, std, 1.0)
        shift = np.zeros(X.shape[1]) if offset is None else np.asarray(offset, dtype=float)
        if shift.shape != (X.shape[1],):
            raise ShapeError(f"Scaler offset needs {X.shape[1]} components, got {shift.size}")
        return cls(X.mean(axis=0), angle_per_std / std, shift)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) * self.scale + self.offset


@dataclass(frozen=True, eq=False)
class VqcModel:
    """A circuit together with its parameters, observable, input state and scaler."""

    spec: CircuitSpec
    theta: np.ndarray
    observable: np.ndarray
    initial_state: np.ndarray
    scaler: FeatureScaler
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size != self.spec.L:
            raise ShapeError(f"theta has {theta.size} entries, circuit has {self.spec.L} gates")
        if not np.all(np.isfinite(theta)):
            raise PreconditionError("theta must be finite")
        observable = np.array(self.observable, dtype=complex)
        if observable.shape != (2, 2):
            raise ShapeError("Observable must be a 2x2 matrix")
        if not is_hermitian(observable, CONSTRUCTION_TOL):
            raise PreconditionError("Observable must be Hermitian")
        state = np.array(self.initial_state, dtype=complex)
        if state.shape != (2,):
            raise ShapeError("Initial state must have 2 amplitudes")
        if not is_normalized(state, CONSTRUCTION_TOL):
            raise PreconditionError("Initial state must have unit norm")
        if self.scaler.d != self.spec.d:
            raise ShapeError(f"Scaler covers {self.scaler.d} features, circuit encodes {self.spec.d}")
        for name, value in (("theta", theta), ("observable", observable), ("initial_state", state)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @classmethod
    def create(
        cls,
        spec: CircuitSpec,
        theta: Optional[Sequence[float]] = None,
        observable: Optional[np.ndarray] = None,
        initial_state: Optional[np.ndarray] = None,
        scaler: Optional[FeatureScaler] = None,
        seed: Optional[int] = None,
    ) -> "VqcModel":
        """Build a model with the defaults H = sigma_3, |psi0> = |0>, identity scaling."""
        return cls(
            spec=spec,
            theta=np.zeros(spec.L) if theta is None else theta,
            observable=pauli(PauliAxis.Z) if observable is None else observable,
            initial_state=basis_state(0) if initial_state is None else initial_state,
            scaler=FeatureScaler.identity(spec.d) if scaler is None else scaler,
            seed=seed,
        )

    def with_theta(self, theta: Sequence[float]) -> "VqcModel":
        return replace(self, theta=np.asarray(theta, dtype=float))


@dataclass(frozen=True, eq=False)
class LabeledSample:
    x: np.ndarray
    y: int

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=float).reshape(-1)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", _check_label(self.y))


def _check_label(y: Any) -> int:
    if y == 1 or y == -1:
        return int(y)
    raise DomainError(f"Label must be -1 or +1, got {y!r}")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Column-oriented labeled data: X of shape (N, d) and labels y in {-1, +1}.

    An empty dataset is allowed (N = 0) and keeps its feature dimension.
    """

    X: np.ndarray
    y: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            raise ShapeError(f"Features must be a 2-D array, got shape {X.shape}")
        y = np.array(self.y).reshape(-1)
        if y.shape[0] != X.shape[0]:
            raise ShapeError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if y.size and not np.all((y == 1) | (y == -1)):
            bad = y[(y != 1) & (y != -1)][0]
            raise DomainError(f"Label must be -1 or +1, got {bad!r}")
        y = y.astype(int)
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_samples(cls, samples: Sequence[LabeledSample], d: Optional[int] = None) -> "Dataset":
        if not samples:
            return cls(np.zeros((0, d or 0)))
        return cls(np.stack([s.x for s in samples]), np.array([s.y for s in samples]))

    @property
    def dim(self) -> int:
        return int(self.X.shape[1])

    def __len__(self) -> int:
        return int(self.X.shape[0])

    def __iter__(self) -> Iterator[LabeledSample]:
        for x, y in zip(self.X, self.y):
            yield LabeledSample(x, int(y))

    def __getitem__(self, index: int) -> LabeledSample:
        return LabeledSample(self.X[index], int(self.y[index]))

    def subset(self, indices: Union[slice, np.ndarray]) -> "Dataset":
        return Dataset(self.X[indices], self.y[indices])


DataLike = Union[Dataset, Sequence[LabeledSample]]


def as_dataset(data: DataLike) -> Dataset:
    if isinstance(data, Dataset):
        return data
    return Dataset.from_samples(list(data))


def _features(model: VqcModel, x: Features) -> Tuple[np.ndarray, bool]:
    """Validate x against the model and return (batch of raw features, was_single)."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.spec.d:
        raise ShapeError(f"Expected features of dimension {model.spec.d}, got shape {np.shape(x)}")
    if not np.all(np.isfinite(X)):
        raise PreconditionError("Features must be finite")
    return X, single


def _unwrap(values: np.ndarray, single: bool) -> Any:
    if not single:
        return values
    first = values[0]
    return float(first) if np.ndim(first) == 0 else first


def _encoding_gates(model: VqcModel, angles: np.ndarray) -> List[np.ndarray]:
    """Per-sample stacks V_j(x_hat_j), each of shape (N, 2, 2)."""
    return [rotation_gate(k, angles[:, j]) for j, k in enumerate(model.spec.encoding_axes)]


def _variational_gates(model: VqcModel, theta: np.ndarray) -> List[np.ndarray]:
    return [rotation_gate(k, t) for k, t in zip(model.spec.variational_axes, theta)]


def _encode(model: VqcModel, angles: np.ndarray) -> np.ndarray:
    states = np.broadcast_to(model.initial_state, (angles.shape[0], 2))
    for gate in _encoding_gates(model, angles):
        states = apply(gate, states)
    return states


def _measure(model: VqcModel, theta: np.ndarray, encoded: np.ndarray) -> np.ndarray:
    states = encoded
    for gate in _variational_gates(model, theta):
        states = apply(gate, states)
    return np.asarray(expectation(states, model.observable))


def forward(model: VqcModel, x: Features) -> Any:
    """Model output <H> for one feature vector (float) or a batch (array of shape (N,)).

    Raises:
        ShapeError: If the feature dimension differs from the circuit's
    """
    X, single = _features(model, x)
    encoded = _encode(model, model.scaler.transform(X))
    return _unwrap(_measure(model, model.theta, encoded), single)


def predict(model: VqcModel, x: Features) -> Any:
    """Sign of the output with an exact zero mapped to +1."""
    X, single = _features(model, x)
    labels = np.where(np.asarray(forward(model, X)) >= 0.0, 1, -1)
    return int(labels[0]) if single else labels


def _heisenberg_tail(model: VqcModel) -> List[np.ndarray]:
    """inner[l] = U_l^dagger ... U_L^dagger H U_L ... U_l, for l = 0..L (inner[L] = H)."""
    gates = _variational_gates(model, model.theta)
    inner = [np.empty((2, 2), dtype=complex)] * (len(gates) + 1)
    inner[len(gates)] = model.observable
    for index in range(len(gates) - 1, -1, -1):
        inner[index] = conjugate(dagger(gates[index]), inner[index + 1])
    return inner


def _observable_scale(model: VqcModel) -> float:
    return float(frobenius_norm(model.observable))


def grad_theta_analytic(model: VqcModel, x: Features) -> Any:
    """Parameter gradient by nested adjoint conjugation.

    z_l = (i/2) < Ad_{V^dagger} Ad_{U_1^dagger} ... Ad_{U_{l-1}^dagger}
                  [sigma_{k_l}, Ad_{U_l^dagger} ... Ad_{U_L^dagger} H] >_{psi0}

    Returns:
        Array of shape (L,) for a single input, (N, L) for a batch
    """
    X, single = _features(model, x)
    gates = _variational_gates(model, model.theta)
    inner = _heisenberg_tail(model)
    brackets = []
    for index, axis in enumerate(model.spec.variational_axes):
        op = 0.5j * commutator(pauli(axis), inner[index])
        for outer in range(index - 1, -1, -1):
            op = conjugate(dagger(gates[outer]), op)
        brackets.append(op)
    ops = np.broadcast_to(np.stack(brackets), (X.shape[0], len(brackets), 2, 2))
    for gate in reversed(_encoding_gates(model, model.scaler.transform(X))):
        ops = conjugate(dagger(gate)[:, None], ops)
    z = real_part(bilinear(model.initial_state, ops), _observable_scale(model), "Parameter gradient")
    return _unwrap(z, single)


def grad_theta_shift(model: VqcModel, x: Features) -> Any:
    """Parameter gradient by the two-term shift rule at +/- pi/2."""
    X, single = _features(model, x)
    encoded = _encode(model, model.scaler.transform(X))
    columns = []
    for index in range(model.spec.L):
        step = np.zeros(model.spec.L)
        step[index] = SHIFT
        plus = _measure(model, model.theta + step, encoded)
        minus = _measure(model, model.theta - step, encoded)
        columns.append((plus - minus) / 2.0)
    return _unwrap(np.stack(columns, axis=-1), single)


def input_sensitivity(model: VqcModel, x_source: Features, x_target: Features) -> Any:
    """Mixed-argument input sensitivity r between matched source and target inputs.

    r_j = (i/2) < Ad_{V_1^dagger(x_1)} ... Ad_{V_{j-1}^dagger(x_{j-1})}
                  [sigma_{k_j}, Ad_{V_j^dagger(x~_j)} ... Ad_{V_d^dagger(x~_d)} Ad_{U^dagger} H] >

    Left factors use source features and the bracket interior uses target features.
    The result is multiplied by the scaler's slope so it is expressed per raw
    feature unit. With x_target == x_source this is the input gradient.
    """
    X, single = _features(model, x_source)
    X_tilde, single_tilde = _features(model, x_target)
    if X.shape != X_tilde.shape or single != single_tilde:
        raise ShapeError(f"Source shape {np.shape(x_source)} != target shape {np.shape(x_target)}")
    source_gates = _encoding_gates(model, model.scaler.transform(X))
    target_gates = _encoding_gates(model, model.scaler.transform(X_tilde))
    d = model.spec.d
    interior = [np.empty(0)] * (d + 1)
    interior[d] = np.broadcast_to(_heisenberg_tail(model)[0], (X.shape[0], 2, 2))
    for j in range(d - 1, -1, -1):
        interior[j] = conjugate(dagger(target_gates[j]), interior[j + 1])
    columns = []
    for j, axis in enumerate(model.spec.encoding_axes):
        op = 0.5j * commutator(pauli(axis), interior[j])
        for outer in range(j - 1, -1, -1):
            op = conjugate(dagger(source_gates[outer]), op)
        columns.append(bilinear(model.initial_state, op))
    r = real_part(np.stack(columns, axis=-1), _observable_scale(model), "Input sensitivity")
    return _unwrap(r * model.scaler.scale, single)


def grad_x(model: VqcModel, x: Features) -> Any:
    """Gradient of the output with respect to the raw features."""
    return input_sensitivity(model, x, x)


# Persistence

_NAMED_OBSERVABLES = {"pauli_x": PauliAxis.X, "pauli_y": PauliAxis.Y, "pauli_z": PauliAxis.Z}
_NAMED_STATES = {"zero": 0, "one": 1}

ComplexPairs = List[List[float]]


class ScalerDocument(BaseModel):
    mean: List[float]
    scale: List[float]
    offset: Optional[List[float]] = None


class ModelDocument(BaseModel):
    """On-disk JSON schema of a VqcModel."""

    encoding_axes: List[int] = Field(min_length=1)
    variational_axes: List[int] = Field(min_length=1)
    theta: List[float]
    observable: Union[str, List[List[List[float]]]] = "pauli_z"
    initial_state: Union[str, ComplexPairs] = "zero"
    scaler: ScalerDocument
    seed: Optional[int] = None

    @field_validator("observable")
    @classmethod
    def _known_observable(cls, value: Any) -> Any:
        if isinstance(value, str) and value not in _NAMED_OBSERVABLES:
            raise ValueError(f"unknown observable '{value}'")
        return value

    @field_validator("initial_state")
    @classmethod
    def _known_state(cls, value: Any) -> Any:
        if isinstance(value, str) and value not in _NAMED_STATES:
            raise ValueError(f"unknown initial state '{value}'")
        return value


def _encode_complex(values: np.ndarray) -> Any:
    if values.ndim == 0:
        return [float(values.real), float(values.imag)]
    return [_encode_complex(v) for v in values]


def _decode_complex(pairs: Any) -> np.ndarray:
    array = np.asarray(pairs, dtype=float)
    if array.shape[-1] != 2:
        raise DataParseError("Complex entries must be [re, im] pairs")
    return array[..., 0] + 1j * array[..., 1]


def model_to_dict(model: VqcModel) -> Dict[str, Any]:
    observable: Any = _encode_complex(model.observable)
    for name, axis in _NAMED_OBSERVABLES.items():
        if np.array_equal(model.observable, pauli(axis)):
            observable = name
    initial_state: Any = _encode_complex(model.initial_state)
    for name, index in _NAMED_STATES.items():
        if np.array_equal(model.initial_state, basis_state(index)):
            initial_state = name
    return {
        "encoding_axes": [int(k) for k in model.spec.encoding_axes],
        "variational_axes": [int(k) for k in model.spec.variational_axes],
        "theta": [float(t) for t in model.theta],
        "observable": observable,
        "initial_state": initial_state,
        "scaler": {
            "mean": [float(v) for v in model.scaler.mean],
            "scale": [float(v) for v in model.scaler.scale],
            "offset": [float(v) for v in model.scaler.offset],
        },
        "seed": model.seed,
    }


def model_from_dict(payload: Dict[str, Any]) -> VqcModel:
    """Rebuild a model from its JSON document.

    Raises:
        DataParseError: If the document does not match the schema
    """
    try:
        doc = ModelDocument.model_validate(payload)
    except ValidationError as e:
        raise DataParseError(f"Invalid model document: {e}") from e
    spec = CircuitSpec(tuple(doc.encoding_axes), tuple(doc.variational_axes))
    if isinstance(doc.observable, str):
        observable = pauli(_NAMED_OBSERVABLES[doc.observable])
    else:
        observable = _decode_complex(doc.observable)
    if isinstance(doc.initial_state, str):
        state = basis_state(_NAMED_STATES[doc.initial_state])
    else:
        state = _decode_complex(doc.initial_state)
    offset = doc.scaler.offset if doc.scaler.offset is not None else [0.0] * len(doc.scaler.mean)
    scaler = FeatureScaler(np.array(doc.scaler.mean), np.array(doc.scaler.scale), np.array(offset))
    return VqcModel(spec, np.array(doc.theta), observable, state, scaler, doc.seed)


def dumps_model(model: VqcModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def save_model(model: VqcModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_model(model))
    logger.debug(f"Saved model to {path}")


def load_model(path: str) -> VqcModel:
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise DataParseError(f"Invalid JSON in model file {path}: {e.msg}", line=e.lineno) from e
    if not isinstance(payload, dict):
        raise DataParseError(f"Model file {path} must contain a JSON object")
    return model_from_dict(payload)
