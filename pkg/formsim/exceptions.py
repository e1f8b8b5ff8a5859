"""Exceptions raised by formsim."""
from __future__ import annotations


class FormsimError(Exception):
    """Base class for all formsim errors."""


class AssumptionViolated(FormsimError):
    """A vessel parameter set breaks a modelling assumption."""


class OutOfRange(FormsimError):
    """A path was queried outside its configured parameter range."""


class DegenerateGeometry(FormsimError):
    """Two vessels coincide, so a task Jacobian is undefined."""


class DegenerateReference(FormsimError):
    """A guidance reference cannot be formed at (near) zero speed."""


class InsufficientDecay(FormsimError):
    """A log holds no window over which the path error decays."""


class SimulationFailed(FormsimError):
    """A simulation run stopped. step and time locate the failing step."""

    def __init__(self, message: str, step: int | None = None, time: float | None = None) -> None:
        super().__init__(message)
        self.step = step
        self.time = time

    def __str__(self) -> str:
        base = super().__str__()
        if self.step is None:
            return base
        return f"{base} (step {self.step}, t={self.time:.3f} s)"


class NonFinite(SimulationFailed):
    """A state derivative or integrated state is NaN or infinite."""


class ScenarioError(FormsimError):
    """A scenario or parameter file could not be parsed or validated.

    Attributes:
        line, column: 1-based position of a JSON syntax error, if any.
        key_path: dotted path of the offending key for schema errors.
    """

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        column: int | None = None,
        key_path: str | None = None,
    ) -> None:
        super().__init__(message)
        self.line = line
        self.column = column
        self.key_path = key_path

    def __str__(self) -> str:
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, column {self.column})"
        if self.key_path:
            return f"{base} (at '{self.key_path}')"
        return base
