"""Exception hierarchy for the clustering engine."""

from __future__ import annotations

from typing import Any, Optional


class ParspecError(Exception):
    """Base class for all engine errors."""


class ParseError(ParspecError, ValueError):
    """Malformed input text."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReferentialError(ParseError):
    """An edge names a vertex that was never declared."""

    def __init__(self, vertex: int, line: Optional[int] = None) -> None:
        self.vertex = vertex
        super().__init__(f"edge references undeclared vertex {vertex}", line)


class DomainError(ParspecError, ValueError):
    """Argument outside the domain of an operation."""


class SingularityError(DomainError):
    """Zero degree vertex where a normalized Laplacian is required."""

    def __init__(self, vertex: int) -> None:
        self.vertex = vertex
        super().__init__(
            f"vertex {vertex} has zero degree (isolated); raise --knn-t or --sigma"
        )


class NumericalError(ParspecError, ArithmeticError):
    """Iteration failed to converge or an internal numeric check failed."""


class ConvergenceError(NumericalError):
    """Ritz residuals still above tolerance after all restarts."""

    def __init__(self, worst_residual: float, restarts: int) -> None:
        self.worst_residual = worst_residual
        self.restarts = restarts
        super().__init__(
            f"eigenpairs did not converge after {restarts} restarts "
            f"(worst residual {worst_residual:.3e})"
        )


class JobError(ParspecError, RuntimeError):
    """A map or reduce function failed; the job was aborted."""

    def __init__(self, job: str, phase: str, key: Any, cause: BaseException) -> None:
        self.job = job
        self.phase = phase
        self.key = key
        super().__init__(f"job {job!r} {phase} failed at key {key!r}: {cause}")


class ConfigError(ParspecError, ValueError):
    """Invalid pipeline or benchmark configuration."""


class StageError(ParspecError, RuntimeError):
    """Wraps any failure raised inside a pipeline stage."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
