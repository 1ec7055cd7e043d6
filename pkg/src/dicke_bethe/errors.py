"""Exception hierarchy shared by all modules."""


class DickeError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpec(DickeError, ValueError):
    pass


class DistinctnessViolation(DickeError, ValueError):
    pass


class NonAscendingEnergies(DickeError, ValueError):
    pass


class NonPositiveCoupling(DickeError, ValueError):
    pass


class IndexOutOfRange(DickeError, IndexError):
    pass


class OutOfRange(DickeError, ValueError):
    pass


class UnsupportedCondition(DickeError, ValueError):
    pass


class NumericalError(DickeError, ArithmeticError):
    """Root finding or diagonalization did not produce a trustworthy result."""


class PoleHit(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class NotARoot(NumericalError):
    pass


class RotatingWaveWarning(UserWarning):
    """Spin detuning is large enough that dropping counter-rotating terms is questionable."""
