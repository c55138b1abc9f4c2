"""Exception types shared across the package."""


class FewnomialError(Exception):
    """Base class for every error raised by this package."""


class ZeroPolynomial(FewnomialError, ValueError):
    pass


class ZeroFunction(FewnomialError, ValueError):
    """The fewnomial is identically zero; its root set is not finite."""


class DomainError(FewnomialError, ValueError):
    pass


class InconclusiveBox(FewnomialError):
    """A subdivision box could not be certified within the budget."""

    def __init__(self, depth, box=None, message=None):
        self.depth = depth
        self.box = box
        super().__init__(message or f"box {box} not certified at depth {depth}")


class PrecisionExhausted(FewnomialError):
    pass


class NoPositiveSolutions(FewnomialError):
    """All coefficients of the trinomial share a sign."""


class CollinearInput(FewnomialError, ValueError):
    pass


class InfiniteSolutionFamily(FewnomialError):
    """The system has a non-isolated family of positive solutions."""


class DegenerateInput(FewnomialError, ValueError):
    pass


class HypothesisUnmet(FewnomialError):
    pass


class TraceFailure(FewnomialError):
    def __init__(self, message, edge=None):
        self.edge = edge
        super().__init__(message)
