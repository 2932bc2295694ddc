"""Exception hierarchy. Every error raised on purpose derives from OriflagError."""


class OriflagError(Exception):
    pass


class InvalidParabolicType(OriflagError, ValueError):
    pass


class ThetaNotProperError(InvalidParabolicType):
    pass


class NotSubgroupError(InvalidParabolicType):
    pass


class MissingMbarThetaError(InvalidParabolicType):
    pass


class NotParabolicSetError(InvalidParabolicType):
    pass


class InvolutionError(OriflagError, ValueError):
    pass


class NotTransverseError(InvolutionError):
    pass


class NotNormalizingError(InvolutionError):
    pass


class SquareNotInEError(InvolutionError):
    pass


class ThetaNotInvariantError(InvolutionError):
    pass


class FixedPointError(OriflagError):
    """The involution fixes a class, so no balanced ideal can exist."""


class NotAnIdealError(OriflagError, ValueError):
    pass


class DegenerateInputError(OriflagError, ArithmeticError):
    """A pivot or determinant is too close to zero to decide."""


class NotProximalError(OriflagError, ArithmeticError):
    pass


class VerificationError(OriflagError):
    """A computed value disagrees with its closed form."""


class TooLargeError(OriflagError):
    """Refusing a computation whose size is gated behind an explicit force flag."""
