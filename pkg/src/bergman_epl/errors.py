"""Exception types raised across the package."""


class BergmanError(Exception):
    """Base class for all package errors."""


class InvalidParams(BergmanError, ValueError):
    pass


class StepUnderflow(BergmanError):
    """Finite-difference steps fell below what double precision can resolve."""


class DomainEscape(BergmanError):
    """A stencil node or evaluation point lies outside the field's domain."""


class NearBoundary(BergmanError):
    """Kernel evaluation refused because b or c is below the conditioning floor."""


class SingularLocus(BergmanError):
    pass


class AxisSingular(BergmanError):
    """Factor extraction needs y >= eps and z >= eps."""


class Degenerate(BergmanError):
    pass


class ZeroVector(BergmanError, ValueError):
    pass


class Coincident(BergmanError, ValueError):
    pass


class DimensionTooSmall(BergmanError, ValueError):
    pass
