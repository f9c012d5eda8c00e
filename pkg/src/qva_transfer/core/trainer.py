"""
Gradient-descent training against the quadratic loss.

The loss of a model on a dataset is the plain sum of squared errors
sum_i (f(x_i) - y_i)^2. Each GD step moves theta against the gradient of the
batch-mean squared error; per-sample gradients are computed in fixed-size
chunks and reduced in chunk order, so trajectories are bit-reproducible for
any thread count.
"""
import csv
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..config.models import TrainConfig
from .errors import DomainError, ShapeError, TrainingDivergedError
from .parallel import chunked_map
from .rng import substream
from .vqc_model import (
    DataLike,
    VqcModel,
    as_dataset,
    forward,
    grad_theta_analytic,
    grad_theta_shift,
    predict,
)

logger = logging.getLogger("qva.trainer")

GradientFn = Callable[[VqcModel, np.ndarray], np.ndarray]

GRADIENTS: Dict[str, GradientFn] = {
    "shift": grad_theta_shift,
    "analytic": grad_theta_analytic,
}


@dataclass(frozen=True)
class Metrics:
    loss: float
    accuracy: float
    n: int

    @property
    def error_rate(self) -> float:
        return 1.0 - self.accuracy


@dataclass(frozen=True)
class TrainCurvePoint:
    epoch: int
    loss: float
    accuracy: float


def _check_targets(model: VqcModel, X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] == 0:
        raise DomainError("Data must not be empty")
    if X.ndim != 2 or X.shape[1] != model.spec.d:
        raise ShapeError(f"Model expects {model.spec.d} features, data has shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ShapeError(f"{X.shape[0]} feature rows but labels of shape {y.shape}")


def squared_error(model: VqcModel, X: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared errors for arbitrary real-valued targets."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_targets(model, X, y)
    residual = np.asarray(forward(model, X)) - y
    return float(np.dot(residual, residual))


def loss(model: VqcModel, data: DataLike) -> float:
    """Quadratic loss sum_i (f(x_i) - y_i)^2.

    Raises:
        DomainError: If data is empty
    """
    dataset = as_dataset(data)
    return squared_error(model, dataset.X, dataset.y)


def evaluate(model: VqcModel, data: DataLike) -> Metrics:
    """Loss and sign-rule accuracy of the model on labeled data."""
    dataset = as_dataset(data)
    _check_targets(model, dataset.X, dataset.y.astype(float))
    outputs = np.asarray(forward(model, dataset.X))
    residual = outputs - dataset.y
    labels = np.where(outputs >= 0.0, 1, -1)
    correct = int(np.count_nonzero(labels == dataset.y))
    return Metrics(
        loss=float(np.dot(residual, residual)),
        accuracy=correct / len(dataset),
        n=len(dataset),
    )


def accuracy(model: VqcModel, data: DataLike) -> float:
    dataset = as_dataset(data)
    return float(np.mean(predict(model, dataset.X) == dataset.y))


def init_theta(n_params: int, seed: int) -> np.ndarray:
    """i.i.d. uniform initial angles on [-pi, pi] from the 'init' stream."""
    return substream(seed, "init").uniform(-math.pi, math.pi, n_params)


def batch_gradient(
    model: VqcModel,
    X: np.ndarray,
    y: np.ndarray,
    gradient: GradientFn = grad_theta_shift,
) -> np.ndarray:
    """Gradient of the batch-mean squared error (1/B) sum (f - y)^2 with respect to theta."""

    def partial(chunk: slice) -> np.ndarray:
        residual = np.asarray(forward(model, X[chunk])) - y[chunk]
        return 2.0 * residual @ np.asarray(gradient(model, X[chunk]))

    partials = chunked_map(partial, X.shape[0])
    total = np.zeros(model.spec.L)
    for value in partials:
        total = total + value
    return total / X.shape[0]


def _batches(order: np.ndarray, batch_size: int) -> List[np.ndarray]:
    return [order[start:start + batch_size] for start in range(0, order.size, batch_size)]


def fit_gd(
    model: VqcModel,
    data: DataLike,
    config: TrainConfig,
) -> Tuple[VqcModel, List[TrainCurvePoint]]:
    """Train theta by plain mini-batch gradient descent.

    Args:
        model: Starting model; its theta is the initial point
        data: Labeled training data
        config: Learning rate, epochs, batch size, shuffle seed and gradient estimator

    Returns:
        Tuple of (trained model, one curve point per epoch)

    Raises:
        DomainError: If data is empty or the learning rate is negative/non-finite
        TrainingDivergedError: If theta or the loss stops being finite; carries
                               the last model whose loss was finite
    """
    dataset = as_dataset(data)
    _check_targets(model, dataset.X, dataset.y.astype(float))
    lr = float(config.learning_rate)
    if not math.isfinite(lr) or lr < 0:
        raise DomainError(f"Learning rate must be finite and non-negative, got {lr}")
    n = len(dataset)
    batch_size = n if config.batch_size == "full" else min(int(config.batch_size), n)
    gradient = GRADIENTS[config.gradient]
    rng = substream(config.seed, "shuffle")
    targets = dataset.y.astype(float)

    logger.info(
        f"Training {model.spec.L} parameters on {n} samples: "
        f"lr={lr}, epochs={config.epochs}, batch={batch_size}, gradient={config.gradient}"
    )
    current = model
    theta = np.array(model.theta, dtype=float)
    curve: List[TrainCurvePoint] = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        for batch in _batches(order, batch_size):
            step = batch_gradient(current, dataset.X[batch], targets[batch], gradient)
            theta = theta - lr * step
            if not np.all(np.isfinite(theta)):
                raise TrainingDivergedError("Parameters became non-finite", model=current, epoch=epoch)
            current = current.with_theta(theta)
        metrics = evaluate(current, dataset)
        if not math.isfinite(metrics.loss):
            raise TrainingDivergedError("Loss became non-finite", model=current, epoch=epoch)
        curve.append(TrainCurvePoint(epoch, metrics.loss, metrics.accuracy))
        logger.debug(f"epoch {epoch}: loss={metrics.loss:.6f} accuracy={metrics.accuracy:.4f}")

    if curve:
        logger.info(f"Finished training: loss={curve[-1].loss:.6f} accuracy={curve[-1].accuracy:.4f}")
    return current, curve


def write_curve_csv(path: str, curve: Sequence[TrainCurvePoint]) -> None:
    """Write `epoch,loss,accuracy` rows with shortest round-trip floats."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "loss", "accuracy"])
        for point in curve:
            writer.writerow([point.epoch, repr(float(point.loss)), repr(float(point.accuracy))])
