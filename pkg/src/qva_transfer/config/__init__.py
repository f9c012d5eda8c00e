"""
Configuration models and loading for qva-transfer.
"""
from .loader import CONFIG_ENV, load_config
from .models import (
    AlignmentConfig,
    CircuitConfig,
    DomainTransform,
    ExperimentConfig,
    LoggingConfig,
    MoonsConfig,
    TrainConfig,
)

__all__ = [
    "CONFIG_ENV",
    "load_config",
    "AlignmentConfig",
    "CircuitConfig",
    "DomainTransform",
    "ExperimentConfig",
    "LoggingConfig",
    "MoonsConfig",
    "TrainConfig",
]
