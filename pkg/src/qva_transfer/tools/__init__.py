"""
MCP tools for running quantum variational transfer experiments.
"""

from .dataset import DatasetTools
from .model import ModelTools
from .transfer import TransferTools

__all__ = ["DatasetTools", "ModelTools", "TransferTools"]
