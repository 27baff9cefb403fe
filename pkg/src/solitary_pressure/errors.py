"""Exception hierarchy shared by the solver, field, verifier and gauge modules."""


class SolitaryWaveError(Exception):
    """Base class for all package errors."""


class InvalidInput(SolitaryWaveError, ValueError):
    """Malformed or inconsistent user input."""


class AmplitudeOutOfRange(InvalidInput):
    pass


class AmplitudeCapExceeded(InvalidInput):
    pass


class FroudeSubcritical(InvalidInput):
    """Raised when a requested wave would not be supercritical (c <= sqrt(g d))."""


class InputConflict(InvalidInput):
    pass


class InputFormat(InvalidInput):
    pass


class NoConvergence(SolitaryWaveError):
    """The nonlinear iteration did not reach the requested tolerance.

    ``solution`` holds the last iterate (flagged as not converged) when one exists.
    """

    def __init__(self, message, solution=None, amplitude=None):
        super().__init__(message)
        self.solution = solution
        self.amplitude = amplitude


class NotConverged(SolitaryWaveError, ValueError):
    """A non-converged solution was passed where a converged one is required."""


class OutOfDomain(SolitaryWaveError, ValueError):
    pass


class GridTooCoarse(SolitaryWaveError, ValueError):
    pass


class StepTooLarge(SolitaryWaveError, ValueError):
    pass


class DenominatorVanishing(SolitaryWaveError, ArithmeticError):
    pass


class TraceTooShort(InvalidInput):
    pass


class NegativeBoundWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    pass
