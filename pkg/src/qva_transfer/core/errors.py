"""
Exception hierarchy for qva-transfer.

Every error raised by the numerics derives from QvaError and from the builtin
exception a caller would naturally catch (ValueError / RuntimeError), so the
tool layer and the CLI can categorize failures without string matching.
"""
from typing import Any, Optional


class QvaError(Exception):
    """Base class for all qva-transfer errors."""


class DomainError(QvaError, ValueError):
    """An argument lies outside its documented domain (bad axis, odd n, empty data)."""


class ShapeError(QvaError, ValueError):
    """Array or feature dimensions do not match the model or each other."""


class PreconditionError(QvaError, ValueError):
    """A numerical precondition failed (non-unitary, non-Hermitian, non-finite)."""


class DataParseError(QvaError, ValueError):
    """A dataset or model artifact could not be parsed.

    Attributes:
        line: 1-based line number of the offending row, when known
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TrainingDivergedError(QvaError, RuntimeError):
    """Loss became NaN/Inf during gradient descent.

    Attributes:
        model: last model whose loss was finite
        epoch: 1-based epoch in which divergence was detected
    """

    def __init__(self, message: str, model: Any, epoch: int):
        self.model = model
        self.epoch = epoch
        super().__init__(f"{message} (epoch {epoch})")
