"""Exception types shared across the package."""


class AccelAtomsError(Exception):
    """Base class for all package errors."""


class DomainError(AccelAtomsError, ValueError):
    """An input is outside the mathematical domain of an operation."""


class DivergenceError(DomainError):
    """Evaluation at a point where the underlying expression diverges (k = 0)."""


class CapacityError(AccelAtomsError):
    """A dense construction was requested beyond the configured size cap."""


class IntegrationError(AccelAtomsError):
    """The time integrator breached a hard state invariant.

    Carries the failing step index so runs can be diagnosed and the CLI can
    report where the trajectory went bad.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class NoRootError(AccelAtomsError):
    """A bracketed root search found no sign change (no solution in range)."""


class ConfigError(AccelAtomsError):
    """A scenario configuration failed validation.

    `diagnostics` holds one human-readable message per violation.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics) or "invalid configuration")
