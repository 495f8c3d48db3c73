"""Exception types raised across the package."""


class QteamError(Exception):
    pass


class InvalidProblem(QteamError, ValueError):
    pass


class InvalidStrategyTable(QteamError, ValueError):
    pass


class InvalidMixture(QteamError, ValueError):
    pass


class ConstraintViolation(QteamError, ValueError):
    """Projector parameters do not describe an idempotent matrix."""


class NumericalInconsistency(QteamError, ArithmeticError):
    """A trace that should be a probability came out complex or negative."""


class DegenerateCollapse(QteamError, ArithmeticError):
    pass


class InvalidSpec(QteamError, ValueError):
    pass
