"""Exception hierarchy shared by every module."""


class WeilvError(Exception):
    """Base class for all library errors."""


class FieldDomainError(WeilvError, ArithmeticError):
    """Inversion of zero and similar domain violations."""


class ContextMismatch(WeilvError, ValueError):
    """Operands live in different fields (or different variable counts)."""


class BudgetExceeded(WeilvError):
    """An enumeration would visit more candidates than the configured budget."""

    def __init__(self, required, budget, what="enumeration"):
        self.required = required
        self.budget = budget
        self.what = what
        super().__init__(f"{what} needs {required} candidates, budget is {budget}")


class ConsistencyError(WeilvError):
    """A theorem-backed invariant failed, which points at a counting bug."""


class OrderMismatch(WeilvError, ValueError):
    """Truncated series of different orders were combined."""


class SeriesPrecondition(WeilvError, ValueError):
    """exp/log called on a series with the wrong constant term."""


class NoRationalFit(WeilvError):
    """The linear system for a rational reconstruction is inconsistent."""


class IntegralityViolation(WeilvError):
    """A reconstructed rational function has non-integer coefficients."""


class NotACurveZeta(WeilvError):
    """The denominator is not (1 - t)(1 - q t)."""


class NumericalFailure(WeilvError):
    """The root finder did not converge."""

    def __init__(self, message, residuals=()):
        self.residuals = list(residuals)
        super().__init__(message)


class InputFormatError(WeilvError, ValueError):
    """A variety file is malformed; the message names the offending position."""


class InsufficientDepth(WeilvError, ValueError):
    """Not enough point counts (or series terms) for the requested order."""

    def __init__(self, needed, have, what="depth"):
        self.needed = needed
        self.have = have
        super().__init__(f"{what}: need m >= {needed}, have {have}")
