# -*- coding: utf-8 -*-
"""Exceptions, and the policies that decide how to go on after a failed check.

The policies share the signature ``(what, residual) -> bool``: they are told
what failed and by how much, and answer whether the computation should go on.
"""
import logging
import typing as t


class SpraycheckError(ValueError):
    pass


class ExpressionSyntaxError(SpraycheckError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


class EvaluationError(SpraycheckError):
    pass


class DomainError(EvaluationError):
    pass


class ScenarioError(SpraycheckError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        if line:
            super().__init__(f"line {line}, column {column}: {message}")
        else:
            super().__init__(message)
        self.message = message
        self.line = line
        self.column = column


class StructureError(SpraycheckError):
    pass


class NotProjectableError(SpraycheckError):
    def __init__(self, component: int, residual: float):
        super().__init__(
            f"Section is not projectable: its X-component {component + 1} depends on the fibre coordinates (|∂/∂y| up to {residual:.3g})"
        )
        self.component = component
        self.residual = residual


class InconsistencyError(SpraycheckError):
    pass


class ProjectiveDimensionError(SpraycheckError):
    pass


FailureHandler = t.Callable[[str, float], bool]

logger = logging.getLogger(__name__)


def error(what: str, residual: float) -> bool:
    """Should I go on after this failure? No, the failure is an error.

    Raises
    ======
    StructureError

    """
    raise StructureError(f"{what} fails with residual {residual:.3g}")


def warn(what: str, residual: float) -> bool:
    """Should I go on after this failure? Yes, but inform the user.

    Returns
    =======
    True: The computation goes on.

    """
    logger.warning(f"{what} fails with residual {residual:.3g}. Continuing.")
    return True


def ignore(what: str, residual: float) -> bool:
    """Should I go on after this failure? Yes, quietly.

    Returns
    =======
    True: The computation goes on.

    """
    return True


POLICIES: t.Dict[str, FailureHandler] = {"error": error, "warn": warn, "ignore": ignore}
