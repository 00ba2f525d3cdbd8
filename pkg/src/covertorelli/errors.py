"""Exception hierarchy shared by the library and the CLI."""


class CoverTorelliError(Exception):
    """Base class for every error raised by covertorelli."""


class GroupMismatch(CoverTorelliError, ValueError):
    pass


class NonIntegralEigensheaf(CoverTorelliError):
    """Some eigensheaf degree sum(a * d / m_i) is not an integer."""


class TotallyRamifiedViolation(CoverTorelliError):
    """The branch labels do not generate the group."""


class DegreeTooSmall(CoverTorelliError, ValueError):
    pass


class MissingSection(CoverTorelliError):
    pass


class DegreeMismatch(CoverTorelliError, ValueError):
    pass


class SingularInput(CoverTorelliError):
    """A branch section is singular or two branch divisors meet badly."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AmbientMismatch(CoverTorelliError, ValueError):
    pass


class ContextMismatch(CoverTorelliError, ValueError):
    pass


class TopPieceNotOneDimensional(CoverTorelliError):
    pass


class EmptyCharacterSet(CoverTorelliError):
    pass


class SpecError(CoverTorelliError, ValueError):
    """The cover-spec document could not be parsed."""
