"""
Output templates for qva-transfer artifacts.
"""
from typing import Any, Dict, List, Optional, Sequence

from .components import QvaComponents
from .formatters import QvaFormatters
from .theme import QvaTheme


def _title(resource: str, text: str) -> str:
    return QvaFormatters.format_header(resource, text)


class QvaTemplates:
    """Output templates for datasets, models, curves and transfer reports."""

    @staticmethod
    def dataset_summary(summary: Dict[str, Any]) -> str:
        """Template for a generated or transformed dataset.

        Args:
            summary: Dictionary with at least 'out' and 'n', and optional
                     'counts' (label -> count) and 'transform'

        Returns:
            Formatted dataset summary string
        """
        fields = {
            "File": str(summary.get("out", "unknown")),
            "Samples": str(summary.get("n", 0)),
        }
        for label, count in sorted(summary.get("counts", {}).items()):
            fields[f"Label {label}"] = str(count)
        transform = summary.get("transform")
        if transform:
            dx, dy = transform.get("translation", (0.0, 0.0))
            fields["Rotation"] = f"{transform.get('rotation_deg', 0.0):g}°"
            fields["Translation"] = f"({dx:g}, {dy:g})"
            fields["Extra noise"] = f"{transform.get('extra_noise', 0.0):g}"
        return "\n".join([_title("dataset", "Two-Moons Dataset"), QvaComponents.create_key_value_list(fields)])

    @staticmethod
    def metrics_summary(title: str, metrics: Dict[str, Any], extra: Optional[Dict[str, str]] = None) -> str:
        """Template for loss/accuracy metrics of a model on a dataset."""
        fields = {
            "Samples": str(metrics.get("n", 0)),
            "Loss": QvaFormatters.format_float(metrics.get("loss")),
            "Accuracy": QvaFormatters.format_accuracy(metrics.get("accuracy", 0.0)),
        }
        fields.update(extra or {})
        return "\n".join([_title("model", title), QvaComponents.create_key_value_list(fields)])

    @staticmethod
    def training_curve(title: str, curve: Sequence[Any], max_rows: int = 10) -> str:
        """Template for a per-epoch training curve.

        Shows an accuracy bar for up to `max_rows` evenly spaced epochs,
        always including the first and last.
        """
        result = [_title("curve", title)]
        if not curve:
            result.append("  (no epochs)")
            return "\n".join(result)
        step = max(1, (len(curve) - 1) // max(1, max_rows - 1))
        shown = list(range(0, len(curve), step))
        if shown[-1] != len(curve) - 1:
            shown.append(len(curve) - 1)
        for index in shown:
            point = curve[index]
            bar = QvaComponents.create_progress_bar(point.accuracy, 1.0)
            result.append(f"  epoch {point.epoch:>3}  loss {point.loss:>10.4f}  {bar}")
        return "\n".join(result)

    @staticmethod
    def qva_report(report: Dict[str, Any]) -> str:
        """Template for a one-shot adaptation report.

        Args:
            report: QvaReport fields as a dictionary

        Returns:
            Formatted report with accuracy change, solver details, residue
            decomposition and the transition histogram
        """
        rank = f"{report['rank']} of {len(report['delta_theta'])}"
        if report.get("rank_deficient"):
            rank += f" {QvaTheme.get_status_emoji('warning')}".rstrip()
        solver = {
            "Accuracy": QvaFormatters.format_change(report["accuracy_before"], report["accuracy_after"]),
            "Loss": f"{report['loss_before']:.4f} -> {report['loss_after']:.4f}",
            "Linearized loss": QvaFormatters.format_float(report["linearized_loss"]),
            "Δθ": QvaFormatters.format_vector(report["delta_theta"]),
            "Rank": rank,
            "Residual": QvaFormatters.format_float(report["residual_norm"]),
            "Pairs": str(report["n_pairs"]),
        }
        residue = {
            "|q|": QvaFormatters.format_float(report["q_norm"]),
            "Domain mismatch": QvaFormatters.format_float(report["domain_mismatch_norm"]),
            "Pretrain error": QvaFormatters.format_float(report["pretrain_error_norm"]),
            "Stationarity": QvaFormatters.format_float(report["pretrain_stationarity"]),
        }
        transitions = {
            kind.replace("type", "Type "): str(count)
            for kind, count in sorted(report["transition_histogram"].items())
        }
        return "\n".join([
            _title("report", "QVA One-Shot Adaptation"),
            QvaComponents.create_key_value_list(solver),
            "",
            f"{QvaTheme.get_section_emoji('residue')} Residue".lstrip(),
            QvaComponents.create_key_value_list(residue),
            "",
            f"{QvaTheme.get_section_emoji('transitions')} Transitions".lstrip(),
            QvaComponents.create_key_value_list(transitions),
        ])

    @staticmethod
    def comparison(metrics: Dict[str, Any], rows: List[List[str]], timings: Optional[Dict[str, float]] = None) -> str:
        """Template for the QVA versus GD benchmark.

        Args:
            metrics: CompareMetrics fields as a dictionary
            rows: Table rows of [epoch, gd_loss, gd_accuracy, qva_accuracy]
            timings: Optional per-stage durations in milliseconds

        Returns:
            Summary followed by the per-epoch table
        """
        crossover = metrics.get("crossover_epoch")
        fields = {
            "Source accuracy": QvaFormatters.format_accuracy(metrics["pretrain_acc"]),
            "Unadapted target": QvaFormatters.format_accuracy(metrics["unadapted_target_acc"]),
            "QVA target": QvaFormatters.format_accuracy(metrics["qva_target_acc"]),
            "GD final": QvaFormatters.format_accuracy(metrics["gd_final_acc"]),
            "Crossover epoch": "none" if crossover is None else str(crossover),
        }
        for name, value in (timings or {}).items():
            fields[f"Time {name}"] = QvaFormatters.format_duration(value)
        table = QvaComponents.create_table(
            ["Epoch", "GD loss", "GD accuracy", "QVA accuracy"], rows, title="GD vs QVA"
        )
        return "\n".join([
            _title("comparison", "Transfer Benchmark"),
            QvaComponents.create_key_value_list(fields),
            "",
            table,
        ])
