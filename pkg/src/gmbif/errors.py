"""Exception hierarchy shared across the package."""

from __future__ import annotations


class GMError(Exception):
    """Base class for every error raised by gmbif."""


class ParameterError(GMError, ValueError):
    """Invalid model parameters or option values."""


class DomainError(GMError, ValueError):
    """State outside the domain of the vector field (v <= 0)."""


class JetError(GMError, ValueError):
    """Invalid jet operation (order mismatch, zero constant term, ...)."""


class PipelineGuardError(GMError, ArithmeticError):
    """A normal-form pipeline denominator vanished.

    ``stage`` names the transformation step that tripped and ``quantity``
    the offending coefficient.
    """

    def __init__(self, stage: str, quantity: str, value: float, threshold: float):
        self.stage = stage
        self.quantity = quantity
        self.value = value
        self.threshold = threshold
        super().__init__(
            f"pipeline guard at stage '{stage}': |{quantity}| = {abs(value):.3e} "
            f"below {threshold:.3e}"
        )
