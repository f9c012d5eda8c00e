"""
Model tools for qva-transfer MCP.

This module provides tools for the pretraining stage of an experiment:
- Training a fresh circuit on a dataset by gradient descent
- Evaluating a saved model's loss and accuracy
"""
from typing import List, Optional

from mcp.types import TextContent as Content

from ..config.models import TrainConfig
from ..core.datagen import read_csv
from ..core.trainer import evaluate
from ..core.vqc_model import load_model, save_model
from ..experiment import run_pretrain
from .base import QvaTool


def _overrides(base: TrainConfig, **values: object) -> TrainConfig:
    updates = {key: value for key, value in values.items() if value is not None}
    return TrainConfig.model_validate({**base.model_dump(), **updates})


class ModelTools(QvaTool):
    """Tools for training and evaluating variational classifiers."""

    def pretrain_model(
        self,
        data: str,
        out: str,
        epochs: Optional[int] = None,
        lr: Optional[float] = None,
        batch: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> List[Content]:
        """Pretrain a circuit with the configured architecture.

        Args:
            data: Training CSV path
            out: Output model JSON path
            epochs: Overrides the configured pretraining epochs
            lr: Overrides the configured learning rate
            batch: Overrides the configured batch size
            seed: Overrides the seed for initialization and shuffling

        Returns:
            List of Content objects with final metrics and the training curve

        Raises:
            ValueError: If the data or parameters are invalid
            RuntimeError: If training diverges
        """
        try:
            train = _overrides(self.config.pretrain, epochs=epochs, learning_rate=lr, batch_size=batch, seed=seed)
            result = run_pretrain(read_csv(data), self.config.circuit, train)
            save_model(result.model, out)
            metrics = {"loss": result.metrics.loss, "accuracy": result.metrics.accuracy, "n": result.metrics.n}
            return self._format_response((f"Pretrained {out}", metrics, result.curve), "curve")
        except Exception as e:
            self._handle_error("pretrain model", e)

    def evaluate_model(self, model: str, data: str) -> List[Content]:
        """Evaluate a saved model on a dataset.

        Returns:
            List of Content objects with loss, accuracy and sample count

        Raises:
            ValueError: If the model or dataset cannot be read or do not match
        """
        try:
            metrics = evaluate(load_model(model), read_csv(data))
            payload = {"loss": metrics.loss, "accuracy": metrics.accuracy, "n": metrics.n}
            return self._format_response((f"{model} on {data}", payload, None), "metrics")
        except Exception as e:
            self._handle_error("evaluate model", e)
