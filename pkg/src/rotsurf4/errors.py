"""Exception hierarchy.

Input problems derive from :class:`InputError`; numerical breakdowns derive
from :class:`DegeneracyError`. The CLI maps the two families to exit codes
2 and 3.
"""


class RotSurfError(Exception):
    pass


class InputError(RotSurfError):
    pass


class DegeneracyError(RotSurfError):
    pass


class ParseError(InputError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class EvaluationError(InputError):
    def __init__(self, message, s=None):
        text = message if s is None else f"{message} at s={s!r}"
        super().__init__(text)
        self.s = s


class FamilyError(InputError):
    pass


class DomainError(InputError):
    """Parameters outside the declared ranges."""


class PreconditionError(InputError):
    pass


class PatternError(InputError):
    """Matrix does not have the bicomplex (Q) pattern."""


class FrameError(DegeneracyError):
    pass


class ReparametrizationError(DegeneracyError):
    pass


class InversionError(DegeneracyError):
    """Bicomplex zero divisor."""
