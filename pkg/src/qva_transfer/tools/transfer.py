"""
Transfer tools for qva-transfer MCP.

One-shot QVA adaptation, gradient-descent fine-tuning and the full
comparison benchmark.
"""
import csv
import os
from typing import List, Optional

from mcp.types import TextContent as Content

from ..config.models import TrainConfig
from ..core.datagen import read_csv
from ..core.trainer import write_curve_csv
from ..core.vqc_model import load_model, save_model
from ..experiment import run_compare, run_gd, run_qva
from .base import QvaTool

DEFAULT_COMPARE_DIR = os.path.join("qva-runs", "compare")


def _sibling(model_path: str, suffix: str) -> str:
    return f"{os.path.splitext(model_path)[0]}{suffix}"


class TransferTools(QvaTool):
    """Tools for adapting a pretrained model to a target domain."""

    def adapt_qva(self, model: str, source: str, target: str, out: Optional[str] = None) -> List[Content]:
        """One-shot QVA adaptation.

        Args:
            model: Pretrained model JSON path
            source: Source dataset CSV path
            target: Target dataset CSV path
            out: Adapted model path (default: <model>.qva.json)

        Returns:
            List of Content objects with the adaptation report

        Raises:
            ValueError: If inputs are unreadable, empty or dimensionally inconsistent
        """
        try:
            out = out or _sibling(model, ".qva.json")
            result = run_qva(
                load_model(model),
                read_csv(source),
                read_csv(target),
                self.config.alignment,
                self.config.transition_tol,
            )
            save_model(result.model, out)
            return self._format_response(result.report.model_dump(), "qva_report")
        except Exception as e:
            self._handle_error("adapt model with QVA", e)

    def finetune_gd(
        self,
        model: str,
        target: str,
        out: Optional[str] = None,
        epochs: Optional[int] = None,
        lr: Optional[float] = None,
    ) -> List[Content]:
        """Gradient-descent fine-tuning on the target domain.

        The per-epoch curve is written next to the output model as
        <out>.curve.csv.
        """
        try:
            out = out or _sibling(model, ".gd.json")
            updates = {k: v for k, v in (("epochs", epochs), ("learning_rate", lr)) if v is not None}
            train = TrainConfig.model_validate({**self.config.finetune.model_dump(), **updates})
            result = run_gd(load_model(model), read_csv(target), train)
            save_model(result.model, out)
            write_curve_csv(_sibling(out, ".curve.csv"), result.curve)
            metrics = {"loss": result.after.loss, "accuracy": result.after.accuracy, "n": result.after.n}
            return self._format_response((f"Fine-tuned {out}", metrics, result.curve), "curve")
        except Exception as e:
            self._handle_error("fine-tune model", e)

    def compare_methods(self, out_dir: Optional[str] = None) -> List[Content]:
        """Run the full QVA versus GD benchmark with the configured settings.

        Returns:
            List of Content objects with the comparison summary and per-epoch table

        Raises:
            RuntimeError: If any stage fails unexpectedly
        """
        try:
            out_dir = out_dir or DEFAULT_COMPARE_DIR
            report = run_compare(self.config, out_dir)
            rows = _comparison_rows(os.path.join(out_dir, report.metrics.gd_curve))
            return self._format_response((report.metrics.model_dump(), rows, report.timings), "comparison")
        except Exception as e:
            self._handle_error("compare methods", e)


def _comparison_rows(path: str) -> List[List[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        records = list(csv.DictReader(f))
    return [
        [
            record["epoch"],
            f"{float(record['gd_loss']):.4f}",
            f"{float(record['gd_accuracy']):.4f}",
            f"{float(record['qva_accuracy']):.4f}",
        ]
        for record in records
    ]
