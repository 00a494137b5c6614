class GouError(Exception):
    """Base class for every error raised by the gourisk apps."""


class SpecError(GouError, ValueError):
    """Malformed process description.

    ``field`` is a dotted pointer into the JSON document, e.g.
    ``jumps.atoms[2].rate``.
    """

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f'{field}: {message}' if field else message)


class Undetermined(GouError):
    """A decision could not be made within the declared tolerance."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class QuadratureError(Undetermined):
    pass


class NotApplicable(GouError):
    pass


class NotSupported(GouError):
    pass


class NotFiniteVariation(GouError):
    pass


class PreconditionError(GouError):
    pass


class ExtendedRealError(GouError, ArithmeticError):
    pass
