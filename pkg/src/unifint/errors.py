"""Exception hierarchy shared by the evaluators and the CLI."""


class UnifintError(Exception):
    """Base class for every error raised by this package."""


class PoleError(UnifintError, ValueError):
    """A gamma function was asked for a value at one of its poles."""


class DomainError(UnifintError, ValueError):
    """Arguments lie outside the region where a closed form is valid."""


class InvariantError(UnifintError, ValueError):
    """A parameter block breaks a structural invariant (e.g. pole separation)."""


class SpecError(UnifintError, ValueError):
    """An evaluation spec could not be constructed from its fields."""


class NumericalError(UnifintError, ArithmeticError):
    """Base for failures of a numerical method to deliver a certified value."""


class DivergenceError(NumericalError):
    pass


class NonConvergenceError(NumericalError):
    pass


class CancellationError(NonConvergenceError):
    """Series summed, but cancellation destroyed the requested accuracy."""


class HigherOrderPoleError(NumericalError):
    pass


class ContourUnavailableError(NumericalError):
    pass


class TailBoundError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class UnsupportedRegimeError(NumericalError):
    pass


class DenominatorPoleError(UnifintError, ValueError):
    pass
