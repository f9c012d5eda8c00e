"""
Configuration models for qva-transfer.

This module defines Pydantic models for configuration validation:
- Two-moons generation and the source-to-target domain transform
- Circuit architecture and feature scaling
- Gradient-descent settings for pretraining and fine-tuning
- Domain alignment
- Logging

The models provide:
- Type validation
- Default values matching the reference benchmark
- Field descriptions
- Invariant checks (even sample counts, positive learning rates, ...)
"""
import math
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator


class MoonsConfig(BaseModel):
    """Model for two-moons dataset generation.

    Half the samples are drawn on the upper arc (label -1) and half on the
    lower arc (label +1).
    """
    n: int = Field(2000, ge=2, description="Total number of samples, split evenly between arcs")
    noise_sigma: float = Field(0.15, ge=0.0, description="Std of isotropic Gaussian feature noise")
    seed: int = Field(42, ge=0, description="Seed of the 'data' random stream")

    @field_validator("n")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"n must be even, got {value}")
        return value


class DomainTransform(BaseModel):
    """Model for the source-to-target feature transform.

    Applied in a fixed order: rotate about the centroid, translate, add noise.
    """
    rotation_deg: float = Field(75.0, description="Rotation about the source centroid in degrees")
    translation: Tuple[float, float] = Field((0.0, 0.0), description="Translation after rotation")
    extra_noise: float = Field(0.0, ge=0.0, description="Std of extra Gaussian noise")

    @field_validator("rotation_deg", "extra_noise")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value


class CircuitConfig(BaseModel):
    """Model for the circuit architecture and input scaling.

    Axes use 1 = X, 2 = Y, 3 = Z. The default encodes with R_y then R_z and
    trains a Z-Y-Z Euler rotation.
    """
    encoding_axes: List[int] = Field([2, 3], min_length=1, description="Encoding gate axes")
    variational_axes: List[int] = Field([3, 2, 3], min_length=1, description="Trainable gate axes")
    observable: Literal["pauli_x", "pauli_y", "pauli_z"] = Field("pauli_z", description="Measured observable")
    initial_state: Literal["zero", "one"] = Field("zero", description="Input basis state")
    angle_per_std: float = Field(math.pi / 4, gt=0.0, description="Radians per standard deviation of a feature")
    angle_offset: Optional[List[float]] = Field(
        [math.pi / 2, 0.0],
        description="Angle added after standardization, one entry per encoding gate",
    )

    @field_validator("encoding_axes", "variational_axes")
    @classmethod
    def _pauli_axes(cls, value: List[int]) -> List[int]:
        for k in value:
            if k not in (1, 2, 3):
                raise ValueError(f"axis must be 1, 2 or 3, got {k}")
        return value


class TrainConfig(BaseModel):
    """Model for plain gradient-descent training."""
    learning_rate: float = Field(0.1, gt=0.0, description="Step size")
    epochs: int = Field(100, ge=1, description="Number of passes over the data")
    batch_size: Union[int, Literal["full"]] = Field(32, description="Mini-batch size or 'full'")
    seed: int = Field(42, ge=0, description="Seed of the 'init' and 'shuffle' streams")
    shuffle: bool = Field(True, description="Reshuffle sample order every epoch")
    gradient: Literal["shift", "analytic"] = Field("shift", description="Gradient estimator")

    @field_validator("learning_rate")
    @classmethod
    def _finite_rate(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("learning_rate must be finite")
        return value

    @field_validator("batch_size")
    @classmethod
    def _positive_batch(cls, value: Union[int, str]) -> Union[int, str]:
        if isinstance(value, int) and value < 1:
            raise ValueError(f"batch_size must be >= 1, got {value}")
        return value


def _finetune_defaults() -> TrainConfig:
    return TrainConfig(learning_rate=0.05, epochs=30, batch_size="full", shuffle=False)


class AlignmentConfig(BaseModel):
    """Model for source/target domain alignment."""
    label_weight: float = Field(1.0, ge=0.0, description="Weight of (y~ - y)^2 in the matching metric")
    mode: Literal["nearest", "one_to_one_greedy"] = Field("nearest", description="Matching strategy")

    @field_validator("label_weight")
    @classmethod
    def _finite_weight(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("label_weight must be finite")
        return value


class LoggingConfig(BaseModel):
    """Model for logging configuration.

    Logs always go to stderr; a file handler is added when `file` is set.
    """
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file: Optional[str] = None


class ExperimentConfig(BaseModel):
    """Root configuration model.

    Every section has defaults, so an empty JSON object is a valid config and
    reproduces the reference benchmark.
    """
    seed: int = Field(42, ge=0, description="Root seed for commands that do not override it")
    data: MoonsConfig = Field(default_factory=MoonsConfig)
    transform: DomainTransform = Field(default_factory=DomainTransform)
    circuit: CircuitConfig = Field(default_factory=CircuitConfig)
    pretrain: TrainConfig = Field(default_factory=TrainConfig)
    finetune: TrainConfig = Field(default_factory=_finetune_defaults)
    alignment: AlignmentConfig = Field(default_factory=AlignmentConfig)
    transition_tol: float = Field(1e-9, gt=0.0, description="Tolerance of the transition-type classifier")
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
