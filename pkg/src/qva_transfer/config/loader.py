"""
Configuration loading for qva-transfer.

The experiment configuration is a JSON document validated against
ExperimentConfig. Every section is optional; omitted values take the
reference-benchmark defaults. The CLI and the MCP server both fall back to
the path in the QVA_CONFIG environment variable.
"""
import json
import os
from typing import Optional

from pydantic import ValidationError

from .models import ExperimentConfig

CONFIG_ENV = "QVA_CONFIG"


def load_config(config_path: Optional[str] = None) -> ExperimentConfig:
    """Load and validate configuration from a JSON file.

    Args:
        config_path: Path to the JSON configuration file. When omitted, the
                     QVA_CONFIG environment variable is consulted, and when that
                     is unset too the defaults are returned.

    Returns:
        Validated ExperimentConfig

    Raises:
        ValueError: If the file cannot be read, is not valid JSON, or fails validation
    """
    config_path = config_path or os.getenv(CONFIG_ENV)
    if not config_path:
        return ExperimentConfig()

    try:
        with open(config_path) as f:
            config_data = json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in config file: {e}") from e
    except OSError as e:
        raise ValueError(f"Failed to load config: {e}") from e

    if not isinstance(config_data, dict):
        raise ValueError("Config file must contain a JSON object")
    try:
        return ExperimentConfig(**config_data)
    except ValidationError as e:
        raise ValueError(f"Invalid configuration: {e}") from e
