"""
Core formatting functions for qva-transfer output.
"""
from typing import Optional, Sequence

from .colors import QvaColors
from .theme import QvaTheme


class QvaFormatters:
    """Core formatting functions for metrics and parameter vectors."""

    @staticmethod
    def format_accuracy(value: float) -> str:
        """Format an accuracy fraction as a colored percentage.

        Args:
            value: Accuracy in [0, 1]

        Returns:
            Percentage string such as "81.5%"
        """
        color = QvaColors.accuracy_color(value)
        return QvaColors.colorize(f"{value * 100:.1f}%", color)

    @staticmethod
    def format_float(value: Optional[float], digits: int = 4) -> str:
        if value is None:
            return "n/a"
        return f"{value:.{digits}g}"

    @staticmethod
    def format_vector(values: Sequence[float], digits: int = 4) -> str:
        return "[" + ", ".join(f"{v:+.{digits}f}" for v in values) + "]"

    @staticmethod
    def format_duration(milliseconds: float) -> str:
        if milliseconds >= 1000.0:
            return f"{milliseconds / 1000.0:.2f} s"
        return f"{milliseconds:.1f} ms"

    @staticmethod
    def format_change(before: float, after: float) -> str:
        """Format an accuracy change with a status emoji and color.

        Args:
            before: Accuracy before adaptation
            after: Accuracy after adaptation

        Returns:
            String such as "📈 49.8% -> 77.2% (+27.4 pts)"
        """
        delta = after - before
        status = "improved" if delta > 0 else "degraded" if delta < 0 else "unchanged"
        emoji = QvaTheme.get_status_emoji(status)
        change = QvaColors.colorize(f"{delta * 100:+.1f} pts", QvaColors.status_color(status))
        text = f"{before * 100:.1f}% -> {after * 100:.1f}% ({change})"
        return f"{emoji} {text}" if emoji else text

    @staticmethod
    def format_header(resource_type: str, name: str) -> str:
        """Format an artifact header with emoji and styling."""
        emoji = QvaTheme.get_resource_emoji(resource_type)
        title = QvaColors.colorize(name, QvaColors.CYAN, QvaColors.BOLD)
        return f"{emoji} {title}" if emoji else title
