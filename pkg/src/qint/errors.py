"""Exception hierarchy shared by every qint module."""


class QintError(Exception):
    pass


class AlgebraMismatch(QintError):
    pass


class InvalidQuiver(QintError):
    pass


class InvalidRelation(QintError):
    pass


class CutoffTooSmall(QintError):
    pass


class NonTerminating(QintError):
    pass


class NotClosed(QintError):
    pass


class AssociativityFailure(QintError):
    pass


class OutOfDomain(QintError):
    pass


class DomainMismatch(QintError):
    pass


class ArityMismatch(QintError):
    pass


class NotAligned(QintError):
    pass


class BudgetExceeded(QintError):
    pass


class BadWeights(QintError):
    pass


class InvalidPieces(QintError):
    """Step-function pieces overlap or leave the domain."""


class ConfigError(QintError):
    pass
