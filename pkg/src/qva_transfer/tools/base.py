"""
Base classes and utilities for qva-transfer MCP tools.

This module provides the foundation for all experiment tools, including:
- Base tool class with access to the experiment config
- Response formatting through the text templates
- Error handling that maps library errors onto MCP-visible exceptions
"""
import json
import logging
from typing import Any, List, Optional

from mcp.types import TextContent as Content

from ..config.models import ExperimentConfig
from ..core.errors import QvaError
from ..formatting import QvaTemplates


class QvaTool:
    """Base class for qva-transfer MCP tools.

    All tool classes inherit from this base class so that responses are
    rendered the same way and failures surface as ValueError (bad input or
    data) or RuntimeError (anything unexpected).
    """

    def __init__(self, config: ExperimentConfig):
        """Initialize the tool.

        Args:
            config: Validated experiment configuration
        """
        self.config = config
        self.logger = logging.getLogger(f"qva.{self.__class__.__name__.lower()}")

    def _format_response(self, data: Any, kind: Optional[str] = None) -> List[Content]:
        """Format response data into MCP content using templates.

        Args:
            data: Payload to render; its shape depends on `kind`
            kind: Template selector. Valid kinds:
                  'dataset', 'metrics', 'curve', 'qva_report', 'comparison'

        Returns:
            List with one text Content; unknown kinds fall back to JSON
        """
        if kind == "dataset":
            formatted = QvaTemplates.dataset_summary(data)
        elif kind == "metrics":
            # (title, metrics dict, extra fields)
            formatted = QvaTemplates.metrics_summary(*data)
        elif kind == "curve":
            # (title, metrics dict, curve points)
            title, metrics, curve = data
            formatted = "\n\n".join([
                QvaTemplates.metrics_summary(title, metrics),
                QvaTemplates.training_curve("Training Curve", curve),
            ])
        elif kind == "qva_report":
            formatted = QvaTemplates.qva_report(data)
        elif kind == "comparison":
            # (metrics dict, table rows, timings)
            formatted = QvaTemplates.comparison(*data)
        else:
            formatted = json.dumps(data, indent=2, sort_keys=True)

        return [Content(type="text", text=formatted)]

    def _handle_error(self, operation: str, error: Exception) -> None:
        """Log a failed operation and re-raise it as a standard exception.

        Args:
            operation: Description of the operation that failed (e.g., "pretrain model")
            error: The exception that occurred

        Raises:
            ValueError: For invalid input, unreadable data or missing files
            RuntimeError: For numeric failures and unexpected errors
        """
        error_msg = str(error)
        self.logger.error(f"Failed to {operation}: {error_msg}")

        if isinstance(error, FileNotFoundError):
            raise ValueError(f"File not found: {error_msg}")
        if isinstance(error, (QvaError, ValueError)) and not isinstance(error, RuntimeError):
            raise ValueError(f"Invalid input: {error_msg}")

        raise RuntimeError(f"Failed to {operation}: {error_msg}")
