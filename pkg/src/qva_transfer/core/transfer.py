"""
One-shot transfer of a pretrained circuit to a shifted domain.

Pipeline:
1. align: pair every target sample with a source sample in joint (x, y) space
2. build the linear system: per pair, z (parameter sensitivity at the source
   input), r (mixed-argument input sensitivity) and the residue
   q = dy - <r, dx> + y - f(x)
3. qva_solve: minimum-norm least squares min ||Z dtheta - q|| via SVD with a
   relative singular value cutoff
4. adapt: theta~ = theta + dtheta*

Diagnostics classify each pair into one of four transition types and split the
residue into its domain-mismatch and pretrain-error parts.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial.distance import cdist

from ..config.models import AlignmentConfig
from .errors import DomainError, PreconditionError, ShapeError
from .parallel import chunked_map
from .trainer import Metrics
from .vqc_model import (
    DataLike,
    LabeledSample,
    VqcModel,
    as_dataset,
    forward,
    grad_theta_analytic,
    input_sensitivity,
)

logger = logging.getLogger("qva.transfer")

RCOND = 1e-12


@dataclass(frozen=True, eq=False)
class AlignedPair:
    source: LabeledSample
    target: LabeledSample
    delta_x: np.ndarray = field(init=False)
    delta_y: float = field(init=False)

    def __post_init__(self) -> None:
        if self.source.x.shape != self.target.x.shape:
            raise ShapeError("Paired samples must have the same feature dimension")
        delta_x = self.target.x - self.source.x
        delta_x.setflags(write=False)
        object.__setattr__(self, "delta_x", delta_x)
        object.__setattr__(self, "delta_y", float(self.target.y - self.source.y))


def _joint(X: np.ndarray, y: np.ndarray, label_weight: float) -> np.ndarray:
    """Embed (x, y) so that squared Euclidean distance is ||dx||^2 + w dy^2."""
    return np.column_stack([X, np.sqrt(label_weight) * y.astype(float)])


def _cost_matrix(targets: np.ndarray, sources: np.ndarray) -> np.ndarray:
    rows = chunked_map(lambda chunk: cdist(targets[chunk], sources, "sqeuclidean"), targets.shape[0])
    return np.vstack(rows)


def align(source: DataLike, target: DataLike, cfg: AlignmentConfig) -> List[AlignedPair]:
    """Pair each target sample with a source sample.

    In `nearest` mode a target takes the source minimizing
    ||x~ - x||^2 + label_weight (y~ - y)^2, ties going to the lowest source index;
    many targets may share a source. In `one_to_one_greedy` mode targets are
    processed by ascending best-match cost and each source is used at most once.

    Returns:
        One pair per target, in target order

    Raises:
        DomainError: If either side is empty, or greedy mode has more targets than sources
        ShapeError: If the feature dimensions differ
    """
    src = as_dataset(source)
    tgt = as_dataset(target)
    if len(src) == 0 or len(tgt) == 0:
        raise DomainError("Alignment needs non-empty source and target data")
    if src.dim != tgt.dim:
        raise ShapeError(f"Source has {src.dim} features, target has {tgt.dim}")

    costs = _cost_matrix(_joint(tgt.X, tgt.y, cfg.label_weight), _joint(src.X, src.y, cfg.label_weight))
    if cfg.mode == "nearest":
        matches = np.argmin(costs, axis=1)
    else:
        if len(tgt) > len(src):
            raise DomainError(
                f"one_to_one_greedy needs at least as many sources ({len(src)}) as targets ({len(tgt)})"
            )
        matches = np.empty(len(tgt), dtype=int)
        available = np.ones(len(src), dtype=bool)
        for t in np.argsort(costs.min(axis=1), kind="stable"):
            row = np.where(available, costs[t], np.inf)
            matches[t] = int(np.argmin(row))
            available[matches[t]] = False

    logger.debug(f"Aligned {len(tgt)} targets to {len(np.unique(matches))} distinct sources ({cfg.mode})")
    return [AlignedPair(src[int(s)], tgt[t]) for t, s in enumerate(matches)]


def compute_r(model: VqcModel, pair: AlignedPair) -> np.ndarray:
    """Input sensitivity across the pair: left factors at x, bracket interior at x~."""
    return input_sensitivity(model, pair.source.x, pair.target.x)


def compute_z(model: VqcModel, x: np.ndarray) -> np.ndarray:
    """Parameter sensitivity at the source input, by nested conjugation."""
    return grad_theta_analytic(model, x)


@dataclass(frozen=True, eq=False)
class TransferSystem:
    """Rows of the linearized transfer problem, one per aligned pair.

    q = domain_mismatch + pretrain_error, where
    domain_mismatch = dy - <r, dx> and pretrain_error = y - f(x).
    """

    Z: np.ndarray
    R: np.ndarray
    q: np.ndarray
    delta_x: np.ndarray
    delta_y: np.ndarray
    domain_mismatch: np.ndarray
    pretrain_error: np.ndarray
    pairs: Tuple[AlignedPair, ...] = ()

    def __post_init__(self) -> None:
        n = self.q.shape[0]
        for name in ("Z", "R", "delta_x", "delta_y", "domain_mismatch", "pretrain_error"):
            if getattr(self, name).shape[0] != n:
                raise ShapeError(f"{name} has {getattr(self, name).shape[0]} rows, expected {n}")
        if self.pairs and len(self.pairs) != n:
            raise ShapeError(f"{len(self.pairs)} pairs for {n} rows")
        for name in ("Z", "R", "q"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise PreconditionError(f"Transfer system {name} contains non-finite entries")

    @property
    def n(self) -> int:
        return int(self.q.shape[0])


def build_transfer_system(
    model: VqcModel,
    X_source: np.ndarray,
    y_source: np.ndarray,
    X_target: np.ndarray,
    y_target: np.ndarray,
    pairs: Sequence[AlignedPair] = (),
) -> TransferSystem:
    """Assemble Z, R and q from row-aligned source/target arrays.

    Labels may be any real numbers here, which lets callers linearize around
    arbitrary regression targets.

    Raises:
        DomainError: If there are no rows
        ShapeError: If the arrays are not row-aligned or mismatch the model
    """
    Xs = np.asarray(X_source, dtype=float)
    Xt = np.asarray(X_target, dtype=float)
    ys = np.asarray(y_source, dtype=float).reshape(-1)
    yt = np.asarray(y_target, dtype=float).reshape(-1)
    if Xs.ndim != 2 or Xs.shape[0] == 0:
        raise DomainError("Transfer system needs at least one pair")
    if Xs.shape != Xt.shape or ys.shape != yt.shape or ys.shape[0] != Xs.shape[0]:
        raise ShapeError("Source and target arrays must be row-aligned")

    def rows(chunk: slice) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.atleast_2d(grad_theta_analytic(model, Xs[chunk])),
            np.atleast_2d(input_sensitivity(model, Xs[chunk], Xt[chunk])),
            np.atleast_1d(forward(model, Xs[chunk])),
        )

    parts = chunked_map(rows, Xs.shape[0])
    Z = np.vstack([p[0] for p in parts])
    R = np.vstack([p[1] for p in parts])
    outputs = np.concatenate([p[2] for p in parts])

    delta_x = Xt - Xs
    delta_y = yt - ys
    domain_mismatch = delta_y - np.einsum("ij,ij->i", R, delta_x)
    pretrain_error = ys - outputs
    return TransferSystem(
        Z=Z,
        R=R,
        q=domain_mismatch + pretrain_error,
        delta_x=delta_x,
        delta_y=delta_y,
        domain_mismatch=domain_mismatch,
        pretrain_error=pretrain_error,
        pairs=tuple(pairs),
    )


def compute_residue(model: VqcModel, pairs: Sequence[AlignedPair]) -> TransferSystem:
    """Transfer residue q_i = dy_i - <r_i, dx_i> + y_i - f(x_i) over aligned pairs."""
    if not pairs:
        raise DomainError("Transfer residue needs at least one aligned pair")
    return build_transfer_system(
        model,
        np.stack([p.source.x for p in pairs]),
        np.array([p.source.y for p in pairs], dtype=float),
        np.stack([p.target.x for p in pairs]),
        np.array([p.target.y for p in pairs], dtype=float),
        pairs,
    )


@dataclass(frozen=True, eq=False)
class QvaSolution:
    delta_theta: np.ndarray
    residual_norm: float
    rank: int
    singular_value_cutoff: float
    singular_values: np.ndarray


def qva_solve(system: TransferSystem) -> QvaSolution:
    """Minimum-norm least-squares solution of Z dtheta = q.

    Singular values at or below 1e-12 times the largest are treated as zero. An
    all-zero Z yields rank 0 and dtheta = 0 rather than an error.
    """
    Z = system.Z
    if Z.ndim != 2 or Z.shape[0] < 1 or Z.shape[1] < 1:
        raise DomainError(f"Transfer system must be at least 1x1, got shape {Z.shape}")
    U, s, Vh = np.linalg.svd(Z, full_matrices=False)
    cutoff = RCOND * float(s[0]) if s.size else 0.0
    keep = s > cutoff
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    delta_theta = Vh.T @ (s_inv * (U.T @ system.q))
    rank = int(np.count_nonzero(keep))
    residual_norm = float(np.linalg.norm(Z @ delta_theta - system.q))

    if rank == 0 and np.any(system.q != 0):
        logger.warning("Parameter sensitivities vanish on every pair; no update is possible")
    elif rank < Z.shape[1]:
        logger.info(f"Transfer system is rank deficient: rank {rank} of {Z.shape[1]}")
    return QvaSolution(delta_theta, residual_norm, rank, cutoff, s)


def adapt(
    model: VqcModel,
    source: DataLike,
    target: DataLike,
    cfg: AlignmentConfig,
) -> Tuple[VqcModel, QvaSolution, TransferSystem]:
    """Align, linearize and solve; return the adapted model with the solution and system."""
    pairs = align(source, target, cfg)
    system = compute_residue(model, pairs)
    solution = qva_solve(system)
    logger.info(
        f"One-shot update over {system.n} pairs: |q|={np.linalg.norm(system.q):.4f}, "
        f"|dtheta|={np.linalg.norm(solution.delta_theta):.4f}, rank={solution.rank}"
    )
    return model.with_theta(model.theta + solution.delta_theta), solution, system


def linearized_loss(system: TransferSystem, delta_theta: np.ndarray) -> float:
    """||Z dtheta - q||^2, the first-order estimate of the adapted target loss."""
    residual = system.Z @ np.asarray(delta_theta, dtype=float) - system.q
    return float(np.dot(residual, residual))


class TransitionType(str, Enum):
    """Transition kinds by whether the input shift and the label shift vanish."""

    TYPE1 = "type1"  # nothing moves
    TYPE2 = "type2"  # inputs move, labels kept
    TYPE3 = "type3"  # labels change in place
    TYPE4 = "type4"  # both move


def classify_transition(pair: AlignedPair, tol: float) -> TransitionType:
    moved = float(np.max(np.abs(pair.delta_x), initial=0.0)) > tol
    relabeled = abs(pair.delta_y) > tol
    if not moved and not relabeled:
        return TransitionType.TYPE1
    if moved and not relabeled:
        return TransitionType.TYPE2
    if not moved:
        return TransitionType.TYPE3
    return TransitionType.TYPE4


def classify_transitions(pairs: Sequence[AlignedPair], tol: float) -> Dict[TransitionType, int]:
    """Histogram of transition types; every type is present and the counts sum to len(pairs).

    Raises:
        DomainError: If tol is not positive
    """
    if not tol > 0:
        raise DomainError(f"Transition tolerance must be positive, got {tol}")
    histogram = {kind: 0 for kind in TransitionType}
    for pair in pairs:
        histogram[classify_transition(pair, tol)] += 1
    return histogram


@dataclass(frozen=True)
class ResidueDecomposition:
    domain_mismatch_norm: float
    pretrain_error_norm: float
    q_norm: float
    pretrain_stationarity: float


def residue_decomposition(system: TransferSystem) -> ResidueDecomposition:
    """Split ||q|| into the domain-mismatch and pretrain-error contributions.

    pretrain_stationarity is ||Z^T (y - f)||, which vanishes when the pretrained
    parameters are a stationary point of the source loss over the paired rows.
    """
    return ResidueDecomposition(
        domain_mismatch_norm=float(np.linalg.norm(system.domain_mismatch)),
        pretrain_error_norm=float(np.linalg.norm(system.pretrain_error)),
        q_norm=float(np.linalg.norm(system.q)),
        pretrain_stationarity=float(np.linalg.norm(system.Z.T @ system.pretrain_error)),
    )


class QvaReport(BaseModel):
    """JSON report of a one-shot adaptation."""
    delta_theta: List[float]
    residual_norm: float = Field(ge=0.0)
    rank: int = Field(ge=0)
    rank_deficient: bool
    singular_values: List[float]
    q_norm: float = Field(ge=0.0)
    domain_mismatch_norm: float = Field(ge=0.0)
    pretrain_error_norm: float = Field(ge=0.0)
    pretrain_stationarity: float = Field(ge=0.0)
    linearized_loss: float = Field(ge=0.0)
    transition_histogram: Dict[str, int]
    n_pairs: int = Field(ge=1)
    accuracy_before: float = Field(ge=0.0, le=1.0)
    accuracy_after: float = Field(ge=0.0, le=1.0)
    loss_before: float = Field(ge=0.0)
    loss_after: float = Field(ge=0.0)


def build_report(
    system: TransferSystem,
    solution: QvaSolution,
    histogram: Dict[TransitionType, int],
    before: Metrics,
    after: Metrics,
) -> QvaReport:
    """Assemble a QvaReport; `before`/`after` are metrics on the raw target data."""
    decomposition = residue_decomposition(system)
    return QvaReport(
        delta_theta=[float(v) for v in solution.delta_theta],
        residual_norm=solution.residual_norm,
        rank=solution.rank,
        rank_deficient=solution.rank < system.Z.shape[1],
        singular_values=[float(v) for v in solution.singular_values],
        q_norm=decomposition.q_norm,
        domain_mismatch_norm=decomposition.domain_mismatch_norm,
        pretrain_error_norm=decomposition.pretrain_error_norm,
        pretrain_stationarity=decomposition.pretrain_stationarity,
        linearized_loss=linearized_loss(system, solution.delta_theta),
        transition_histogram={kind.value: count for kind, count in histogram.items()},
        n_pairs=system.n,
        accuracy_before=before.accuracy,
        accuracy_after=after.accuracy,
        loss_before=before.loss,
        loss_after=after.loss,
    )
