"""Exception hierarchy shared by every layer of the package."""


class MockRadialError(Exception):
    """Base class for all package errors."""

    code = "error"


class DomainError(MockRadialError, ValueError):
    """Argument outside the domain of a function (e.g. Im(tau) <= 0)."""

    code = "domain"


class PoleError(MockRadialError, ArithmeticError):
    """A theta/eta denominator vanishes or an argument sits on the period lattice."""

    code = "pole"

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class PoleProximityError(PoleError):
    """A series denominator factor is numerically indistinguishable from zero."""

    code = "pole_proximity"

    def __init__(self, message, index=None, term=None):
        super().__init__(message, term=term)
        self.index = index


class TruncationError(MockRadialError, ArithmeticError):
    """A series did not reach its tail tolerance within the term budget."""

    code = "truncation"


class ClassificationError(MockRadialError):
    """A closed-form sum was asked for at a cusp where its hypotheses fail."""

    code = "classification"


class InsufficientDataError(MockRadialError):
    """Too few usable radial samples survived to extrapolate."""

    code = "insufficient_data"


class ParseError(MockRadialError, ValueError):
    """Malformed textual input; ``position`` is the 0-based column of the problem."""

    code = "parse"

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")

    def annotated(self):
        return f"{self}\n  {self.text}\n  {' ' * self.position}^"
