"""Exception hierarchy shared by the fuzzdep library and its command line."""

from typing import Optional


class FuzzDepError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidInterval(FuzzDepError):
    """An interval whose lower bound exceeds its upper bound."""


class CellSyntaxError(FuzzDepError):
    """A cell string that does not follow the cell grammar."""

    def __init__(self, text: str, column: int, message: str):
        self.text = text
        self.column = column
        super().__init__(f"{message} at column {column} of cell {text!r}")


class DocumentSyntaxError(FuzzDepError):
    """A relation or dependency document that cannot be read."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class InvalidDomain(FuzzDepError):
    """Attribute domain bounds or scope constants out of range."""


class DomainViolation(FuzzDepError):
    """A cell that leaves the domain of its attribute."""

    def __init__(self, attribute: str, tuple_index: int, message: str):
        self.attribute = attribute
        self.tuple_index = tuple_index
        super().__init__(f"tuple {tuple_index}, attribute {attribute!r}: {message}")


class DuplicateAttribute(FuzzDepError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate attribute {name!r}")


class UnknownAttribute(FuzzDepError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown attribute {name!r}")


class EmptyAttributeSet(FuzzDepError):
    """Proximity over an empty attribute set was requested directly."""


class TrapezoidNeedsAlpha(FuzzDepError):
    """A trapezoidal cell was used where only interval numbers are accepted."""


class AlphaOutOfRange(FuzzDepError):
    def __init__(self, alpha: float):
        self.alpha = alpha
        super().__init__(f"cut degree {alpha} outside [0, 1]")


class EmptyOperand(FuzzDepError):
    """An empty interval was passed to a measure that needs two intervals."""


class NonPositiveMax(FuzzDepError):
    """The relative difference of two bounds has a non-positive maximum."""


class SchemaOverlapInvalid(FuzzDepError):
    """Join operands whose shared attributes do not match the join set."""


class UniverseTooLarge(FuzzDepError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"universe of {size} attributes exceeds the limit of {limit}")


class MalformedQuery(FuzzDepError):
    """A dependency statement that cannot be read or does not fit the universe."""


class InvalidConfiguration(FuzzDepError):
    """A proximity or join setting outside its documented range."""

    def __init__(self, message: str, option: Optional[str] = None):
        self.option = option
        super().__init__(message)
