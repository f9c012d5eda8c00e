"""
Text building blocks shared by the templates: tables, bars and bullet lists.
"""
from typing import Dict, List, Optional, Sequence

from .colors import QvaColors


def _row(cells: Sequence[str], widths: Sequence[int]) -> str:
    return "|" + "|".join(f" {cell:<{width}} " for cell, width in zip(cells, widths)) + "|"


class QvaComponents:
    """Text building blocks for formatted output."""

    @staticmethod
    def create_table(headers: List[str], rows: List[List[str]], title: Optional[str] = None) -> str:
        """Boxed table with left-aligned columns sized to their widest cell.

        Args:
            headers: Column headers
            rows: Cell values, one list per row
            title: Optional caption centred above the headers

        Returns:
            Table text, one line per border or row
        """
        cells = [[str(cell) for cell in row] for row in rows]
        widths = [max([len(header)] + [len(row[i]) for row in cells]) for i, header in enumerate(headers)]
        rule = "+" + "+".join("-" * (width + 2) for width in widths) + "+"

        lines = []
        if title:
            inner = len(rule) - 2
            caption = title.center(inner).replace(title, QvaColors.colorize(title, QvaColors.CYAN, QvaColors.BOLD), 1)
            lines += ["+" + "-" * inner + "+", "|" + caption + "|"]
        lines += [rule, _row(headers, widths), rule]
        lines += [_row(row, widths) for row in cells]
        lines.append(rule)
        return "\n".join(lines)

    @staticmethod
    def create_progress_bar(value: float, total: float, width: int = 20) -> str:
        """Accuracy-colored bar for value/total, clipped to [0, 1], followed by the percentage."""
        fraction = min(1.0, max(0.0, value / total)) if total > 0 else 0.0
        filled = int(round(width * fraction))
        bar = "█" * filled + "░" * (width - filled)
        return f"{QvaColors.colorize(bar, QvaColors.accuracy_color(fraction))} {fraction * 100:.1f}%"

    @staticmethod
    def create_key_value_list(data: Dict[str, str], indent: int = 2) -> str:
        """Bullet list of key/value pairs, keys aligned."""
        if not data:
            return ""
        key_width = max(len(key) for key in data)
        pad = " " * indent
        return "\n".join(f"{pad}• {key + ':':<{key_width + 1}} {value}" for key, value in data.items())
