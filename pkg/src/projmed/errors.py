"""Exception hierarchy shared by all projmed modules."""


class ProjmedError(Exception):
    """Base class for every error raised by projmed."""


class DimensionMismatch(ProjmedError, ValueError):
    pass


class NotUnitVector(ProjmedError, ValueError):
    pass


class DegenerateTriangle(ProjmedError, ValueError):
    """Collinear representatives or a zero angle between two lines."""


class UnrealizableAngles(ProjmedError, ValueError):
    """No three lines in R^3 have the requested pairwise angles."""


class BigTriangleError(ProjmedError, ValueError):
    pass


class PoleSingularity(ProjmedError, ArithmeticError):
    """The base point coincides (projectively) with a data line."""


class InfeasibleConstraint(ProjmedError, RuntimeError):
    pass


class HypothesisViolation(ProjmedError, ValueError):
    """A construction was asked for outside the regime where it is defined."""


class IdentityViolation(ProjmedError, AssertionError):
    """A polynomial identity failed to hold at an evaluation point."""


class PointFileError(ProjmedError, ValueError):
    pass
