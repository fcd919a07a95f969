"""Exception types shared across the library.

Arithmetic preconditions (zero denominators, division by zero) reuse the
builtin ZeroDivisionError; everything domain-specific derives from QlfError
so callers can catch the whole family at once.
"""


class QlfError(Exception):
    pass


class ModulusMismatch(QlfError):
    """Operands belong to prime fields with different characteristics."""


class TowerMismatch(QlfError):
    """Operands belong to different field towers."""


class NotAPthPower(QlfError):
    """A polynomial p-th root was requested but some term obstructs it.

    The offending monomial (exponent tuple) is stored in `term`.
    """

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class AlreadyPthPower(QlfError):
    """Radicand is a p-th power, so the adjunction would be degree 1."""


class DuplicateName(QlfError):
    """Variable or root name already used in this tower."""


class ZeroForm(QlfError):
    """Operation undefined for the form with no nonzero coefficient."""


class IsotropicInput(QlfError):
    """Operation requires anisotropic input forms."""


class PthPowerRadicand(QlfError):
    """The element a must lie outside K^p for K(a^(1/p)) to be proper."""


class CompletelySplit(QlfError):
    """Form has a one-dimensional anisotropic part; no function field."""


class DimensionOne(QlfError):
    """Operation requires (anisotropic) dimension at least two."""


class ResourceCap(QlfError):
    """A configured presentation-size cap was exceeded.

    `cap` names the limit ("max_vars" or "max_roots"), `limit` its value and
    `needed` the size the computation asked for.
    """

    def __init__(self, cap, limit, needed):
        super().__init__(f"{cap} exceeded: need {needed}, cap is {limit}")
        self.cap = cap
        self.limit = limit
        self.needed = needed


class ParseError(QlfError):
    """Input text rejected by the expression grammar.

    Carries the position (line, column) and the token set that would have
    been accepted there.
    """

    def __init__(self, message, line, column, expected=()):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
        self.expected = tuple(expected)


class UnknownVariable(QlfError):
    """Expression references a name not declared in the field."""


class NonPrimeModulus(QlfError):
    """The characteristic must be a prime number."""
