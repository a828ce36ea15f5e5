"""Exception hierarchy for moment evaluation and identity checks."""


class ABCError(Exception):
    """Base class for all package errors."""


class DomainError(ABCError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergentMoment(ABCError, ArithmeticError):
    """The radial integral defining <r^lambda> does not converge."""

    def __init__(self, lam, bound):
        self.lam = lam
        self.bound = bound
        super().__init__(f"<r^{lam}> diverges: need lambda > {float(bound):g}")


class RecurrenceWindow(ABCError, ArithmeticError):
    """A recurrence step would use a power outside its validity window."""

    def __init__(self, lam, bound):
        self.lam = lam
        self.bound = bound
        super().__init__(
            f"recurrence step at lambda={lam} needs lambda > {float(bound):g}"
        )


class NotRational(ABCError, TypeError):
    """Exact mode requested for a flux that has no exact rational value."""


class SWaveExcluded(ABCError, ValueError):
    """The identity is undefined for alpha = 0."""


class NotCircular(ABCError, ValueError):
    """The operation requires a nodeless (n = 0) state."""
