"""Exception hierarchy shared by all modules."""


class IdentError(Exception):
    """Base class for errors raised by identcodes."""


class ParameterError(IdentError, ValueError):
    """A parameter lies outside its admissible range."""


class FieldMismatchError(IdentError, ValueError):
    """Operands belong to different fields."""


class LengthMismatchError(IdentError, ValueError):
    """Vector operands have incompatible lengths."""


class AttackNotApplicableError(ParameterError):
    """The LFSR attack needs register length mu < k."""


class EnumerationTooLargeError(ParameterError):
    """An exhaustive computation exceeds its enumeration budget."""
