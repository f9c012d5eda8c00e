"""
Seeded two-moons data, target-domain transforms and CSV persistence.

Random draws come from the named 'data' stream (generation) and 'transform'
stream (target noise). Generation consumes all arc positions t first, then all
noise values, so the stream layout does not depend on noise_sigma.
"""
import csv
import logging
import math
from typing import List, Optional

import numpy as np

from ..config.models import DomainTransform, MoonsConfig
from .errors import DataParseError, DomainError, ShapeError
from .rng import substream
from .vqc_model import DataLike, Dataset, as_dataset

logger = logging.getLogger("qva.datagen")

UPPER_LABEL = -1
LOWER_LABEL = 1


def moon_point(arc: str, t: float) -> np.ndarray:
    """Noise-free point on the upper arc (cos t, sin t) or lower arc (1 - cos t, 0.5 - sin t)."""
    if arc == "upper":
        return np.array([math.cos(t), math.sin(t)])
    if arc == "lower":
        return np.array([1.0 - math.cos(t), 0.5 - math.sin(t)])
    raise DomainError(f"Unknown arc '{arc}', expected 'upper' or 'lower'")


def make_moons(cfg: MoonsConfig, stream: str = "data") -> Dataset:
    """Generate the two-moons dataset.

    The first n/2 rows lie on the upper arc with label -1, the remaining n/2 on
    the lower arc with label +1.

    Raises:
        DomainError: If n is odd or smaller than 2
    """
    if cfg.n < 2 or cfg.n % 2:
        raise DomainError(f"Sample count must be even and >= 2, got {cfg.n}")
    half = cfg.n // 2
    rng = substream(cfg.seed, stream)
    t = rng.uniform(0.0, math.pi, cfg.n)
    noise = rng.normal(0.0, cfg.noise_sigma, (cfg.n, 2))

    upper = np.column_stack([np.cos(t[:half]), np.sin(t[:half])])
    lower = np.column_stack([1.0 - np.cos(t[half:]), 0.5 - np.sin(t[half:])])
    X = np.vstack([upper, lower]) + noise
    y = np.concatenate([np.full(half, UPPER_LABEL), np.full(half, LOWER_LABEL)])
    logger.debug(f"Generated {cfg.n} two-moons samples (noise={cfg.noise_sigma}, seed={cfg.seed})")
    return Dataset(X, y)


def transform_domain(
    data: DataLike,
    transform: DomainTransform,
    seed: int,
    center: Optional[np.ndarray] = None,
) -> Dataset:
    """Map source features into a target domain; labels are preserved.

    Rotates about `center` (default: the centroid of `data`), then translates,
    then adds Gaussian noise. Steps that are exact identities are skipped.

    Raises:
        ShapeError: If the features are not 2-dimensional
    """
    dataset = as_dataset(data)
    if dataset.dim != 2:
        raise ShapeError(f"Domain transforms need 2-D features, got {dataset.dim}")
    X = np.array(dataset.X, dtype=float)

    if transform.rotation_deg != 0.0 and len(dataset):
        angle = math.radians(transform.rotation_deg)
        rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        centroid = X.mean(axis=0) if center is None else np.asarray(center, dtype=float)
        X = (X - centroid) @ rotation.T + centroid
    if any(component != 0.0 for component in transform.translation):
        X = X + np.asarray(transform.translation, dtype=float)
    if transform.extra_noise > 0.0:
        X = X + substream(seed, "transform").normal(0.0, transform.extra_noise, X.shape)
    return Dataset(X, dataset.y)


def _header(d: int) -> List[str]:
    return [f"x{j + 1}" for j in range(d)] + ["y"]


def write_csv(path: str, data: DataLike) -> None:
    """Write `x1,...,xd,y` rows with shortest round-trip float formatting."""
    dataset = as_dataset(data)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_header(dataset.dim))
        for x, y in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in x] + [int(y)])


def read_csv(path: str) -> Dataset:
    """Read a dataset written by write_csv.

    Raises:
        DataParseError: On a bad header, malformed row, or label other than +/-1;
                        carries the 1-based line number
    """
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise DataParseError("Missing header", line=1)
    header = [cell.strip() for cell in rows[0]]
    d = len(header) - 1
    if d < 1 or header != _header(d):
        raise DataParseError(f"Expected header {','.join(_header(max(d, 1)))}, got {','.join(header)}", line=1)

    features: List[List[float]] = []
    labels: List[int] = []
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != d + 1:
            raise DataParseError(f"Expected {d + 1} fields, got {len(row)}", line=line)
        try:
            values = [float(cell) for cell in row]
        except ValueError as e:
            raise DataParseError(f"Non-numeric field: {e}", line=line) from e
        if not all(math.isfinite(v) for v in values):
            raise DataParseError("Non-finite field", line=line)
        if values[-1] not in (1.0, -1.0):
            raise DataParseError(f"Label must be -1 or 1, got {row[-1].strip()}", line=line)
        features.append(values[:-1])
        labels.append(int(values[-1]))

    X = np.array(features, dtype=float).reshape(len(features), d)
    return Dataset(X, np.array(labels, dtype=int))
