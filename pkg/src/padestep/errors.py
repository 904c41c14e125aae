"""Exception hierarchy for padestep."""


class PadeStepError(Exception):
    """Base class for all padestep errors."""


class ParameterError(PadeStepError, ValueError):
    """A scheme, problem or run parameter is out of range."""


class StepAlignmentError(ParameterError):
    """A declared load discontinuity falls strictly inside a time step."""


class NumericalError(PadeStepError, ArithmeticError):
    """A numerical procedure failed."""


class RootPairingError(NumericalError):
    """Complex denominator roots could not be matched into conjugate pairs."""


class ConsistencyError(NumericalError):
    """A polynomial identity the scheme relies on does not hold."""


class FactorizationError(NumericalError):
    """A matrix is singular to working precision."""

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class PlanError(NumericalError):
    """A shifted system r²M + rΔtC + Δt²K could not be factored."""

    def __init__(self, message: str, root: complex):
        super().__init__(message)
        self.root = root


class DivergenceError(NumericalError):
    """The integrated state stopped being finite."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step
