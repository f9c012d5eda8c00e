"""
qva-transfer formatting package for styled text output.
"""

from .colors import QvaColors
from .components import QvaComponents
from .formatters import QvaFormatters
from .templates import QvaTemplates
from .theme import QvaTheme

__all__ = [
    'QvaTheme',
    'QvaColors',
    'QvaFormatters',
    'QvaTemplates',
    'QvaComponents',
]
