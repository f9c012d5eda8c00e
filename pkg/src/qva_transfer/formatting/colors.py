"""
ANSI styling for accuracies, outcomes and headers.

Colors are off unless QvaTheme.USE_COLORS is set, so MCP clients receive
plain text by default.
"""
from typing import Dict, Optional

from .theme import QvaTheme


class QvaColors:
    """ANSI codes and the color rules for experiment output."""

    RED = '\033[31m'
    GREEN = '\033[32m'
    YELLOW = '\033[33m'
    BLUE = '\033[34m'
    CYAN = '\033[36m'
    BOLD = '\033[1m'
    RESET = '\033[0m'

    # Adaptation outcome -> color; anything else is neutral blue
    OUTCOMES: Dict[str, str] = {
        'improved': GREEN,
        'degraded': RED,
        'warning': YELLOW,
    }

    @classmethod
    def colorize(cls, text: str, color: str, style: Optional[str] = None) -> str:
        """Wrap text in a color (and optional style) when colors are enabled."""
        if not QvaTheme.USE_COLORS:
            return text
        return f"{style or ''}{color}{text}{cls.RESET}"

    @classmethod
    def status_color(cls, status: str) -> str:
        return cls.OUTCOMES.get(status.lower(), cls.BLUE)

    @classmethod
    def accuracy_color(cls, value: float, good: float = 0.7, chance: float = 0.6) -> str:
        """Green from `good` upward, red near chance level, yellow in between."""
        if value >= good:
            return cls.GREEN
        return cls.YELLOW if value >= chance else cls.RED
