"""Exception hierarchy shared by all qsskit modules."""


class QSSError(Exception):
    """Base class for every error raised by qsskit."""


class CapacityError(QSSError):
    """Input exceeds a hard size bound (qubit count, player count)."""


class FormatError(QSSError):
    """Malformed JSON input file."""


# qstate
class NotNormalized(QSSError):
    pass


class NotHermitian(QSSError):
    pass


class EmptySubset(QSSError):
    pass


class FullSubset(QSSError):
    pass


class OverlappingSubsets(QSSError):
    pass


# access
class NotAntichain(QSSError):
    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"minimal sets {a} and {b} are nested")


class PreconditionNotMet(QSSError):
    pass


class NotThreeHomogeneous(PreconditionNotMet):
    pass


# qssverify
class NotOrthogonal(QSSError):
    pass


class SizeMismatch(QSSError):
    pass


class InvalidStructure(QSSError):
    pass


class NotAQSSState(QSSError):
    def __init__(self, message, subset=None, value=None):
        self.subset = subset
        self.value = value
        super().__init__(message)


# uniformity
class KOutOfRange(QSSError):
    pass


class IncompletePattern(QSSError):
    pass


# entropy_lp
class TooLarge(CapacityError):
    pass


class InfeasibleLP(QSSError):
    pass


class LPTimeout(QSSError):
    pass


# codebook / classify
class BadParams(QSSError):
    pass


class BadN(QSSError):
    pass
