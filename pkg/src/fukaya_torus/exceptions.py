"""Exception hierarchy shared by every module of the package."""


class FukayaTorusError(Exception):
    """Base class for all errors raised by the package."""


class InputParseError(FukayaTorusError, ValueError):
    """Malformed brane / ambient / scenario description."""


class ParallelLines(FukayaTorusError):
    """Two lines that were required to be transverse have parallel directions."""


class PointNotOnLine(FukayaTorusError):
    """A point was expected to lie on (a lift of) a line but does not."""


class NonIntegerDegree(FukayaTorusError):
    """Internal consistency failure: a Maslov degree came out non-integral."""


class DegenerateClass(FukayaTorusError):
    """A polygon class has zero area or coincident corners."""


class CutoffTooSmall(FukayaTorusError):
    """No class lies below the requested area cutoff."""


class NonContributingClass(FukayaTorusError):
    """A weight was requested for a class that carries no holomorphic polygon."""


class ConvergenceFailure(FukayaTorusError):
    """The tail bound could not be pushed below tolerance within the cutoff budget."""

    def __init__(self, message, achieved_bound=None):
        super().__init__(message)
        self.achieved_bound = achieved_bound


class NonPositiveLeadingCoefficient(FukayaTorusError):
    """An area quadratic handed to the tail bound does not open upwards."""


class TransversalityLost(FukayaTorusError):
    """An isotopy path passes through a non-transverse or degenerate configuration."""


class MismatchBeyondTolerance(FukayaTorusError):
    """A verification harness observed a discrepancy larger than its tolerance."""

    def __init__(self, message, worst=None):
        super().__init__(message)
        self.worst = worst


class QuadratureNotConverged(FukayaTorusError):
    """Adaptive quadrature did not reach the requested accuracy."""


class CocycleViolation(FukayaTorusError):
    """A pair (B, theta) fails dB = 0 or j*B = d theta."""


class DegenerateMesh(FukayaTorusError):
    """A relative cycle mesh is malformed (bad triangles, open boundary, ...)."""


class ConvergenceOrderViolation(FukayaTorusError):
    """A refinement study converged more slowly than required."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order
