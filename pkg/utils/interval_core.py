"""Interval numbers, fuzzy cells and their alpha-cuts.

A cell of a fuzzy relation is one of four shapes:

    3.6             crisp point
    null            unknown value, the whole attribute domain
    [1,9]/0.8       interval number with a confidence degree (``/p`` optional)
    tz(1,2,3,4)     trapezoidal fuzzy number

Every shape can be turned into a closed interval, either directly
(``to_interval``) or at a cut degree (``alpha_cut``). All values here are
immutable and all functions are pure.
"""

import math
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from utils.errors import (AlphaOutOfRange, CellSyntaxError, InvalidDomain,
                          InvalidInterval, TrapezoidNeedsAlpha)

# delta and epsilon default to theta / SCOPE_DIVISOR
SCOPE_DIVISOR = 10000.0


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise InvalidInterval("interval bounds must be numbers")
        if self.lower > self.upper:
            raise InvalidInterval(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def is_degenerate(self) -> bool:
        return self.lower == self.upper

    @property
    def is_bounded(self) -> bool:
        return not (math.isinf(self.lower) or math.isinf(self.upper))

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def __str__(self) -> str:
        return f"[{format_number(self.lower)},{format_number(self.upper)}]"


class EmptyInterval:
    """The empty interval. Use the module constant ``EMPTY``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return 'Empty'

    __str__ = __repr__


EMPTY = EmptyInterval()

Cut = Union[Interval, EmptyInterval]


@dataclass(frozen=True)
class Crisp:
    x: float


@dataclass(frozen=True)
class Null:
    pass


@dataclass(frozen=True)
class ConfidenceInterval:
    interval: Interval
    p: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInterval(f"confidence degree {self.p} outside [0, 1]")


@dataclass(frozen=True)
class Trapezoid:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise InvalidInterval(
                f"trapezoid requires a <= b <= c <= d, got "
                f"({self.a}, {self.b}, {self.c}, {self.d})"
            )


FuzzyValue = Union[Crisp, Null, ConfidenceInterval, Trapezoid]


@dataclass(frozen=True)
class AttributeDomain:
    """Universe bounds of one attribute plus its scope constants.

    ``theta`` defaults to ``upper - lower``; ``delta`` (degenerate modular for
    interval-number measures) is always ``theta / 10000``; ``epsilon``
    (degenerate modular at a cut degree) defaults to the same value.
    """

    lower: float
    upper: float
    theta: Optional[float] = None
    epsilon: Optional[float] = None
    delta: float = field(init=False)

    def __post_init__(self):
        for name in ('lower', 'upper', 'theta', 'epsilon'):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise InvalidDomain(f"domain {name} {value} is not a finite number")
        if self.lower < 0:
            raise InvalidDomain(f"domain lower bound {self.lower} is negative")
        if not self.lower < self.upper:
            raise InvalidDomain(f"domain [{self.lower}, {self.upper}] is empty or degenerate")
        theta = self.upper - self.lower if self.theta is None else float(self.theta)
        if theta < self.upper - self.lower:
            raise InvalidDomain(f"theta {theta} is smaller than the domain width {self.upper - self.lower}")
        epsilon = theta / SCOPE_DIVISOR if self.epsilon is None else float(self.epsilon)
        if epsilon <= 0:
            raise InvalidDomain(f"epsilon {epsilon} must be positive")
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'epsilon', epsilon)
        object.__setattr__(self, 'delta', theta / SCOPE_DIVISOR)

    @property
    def universe(self) -> Interval:
        return Interval(self.lower, self.upper)

    @property
    def epsilon_overridden(self) -> bool:
        return self.epsilon != self.theta / SCOPE_DIVISOR


def to_interval(v: FuzzyValue, dom: AttributeDomain) -> Interval:
    """Convert a crisp, NULL or confidence-interval cell into an interval number.

    Args:
        v: Cell to convert
        dom: Domain of the cell's attribute

    Returns:
        [x, x] for crisp values, the whole domain for NULL, the carried interval otherwise
    """
    if isinstance(v, Crisp):
        return Interval(v.x, v.x)
    if isinstance(v, Null):
        return dom.universe
    if isinstance(v, ConfidenceInterval):
        return v.interval
    if isinstance(v, Trapezoid):
        raise TrapezoidNeedsAlpha("trapezoidal values need a cut degree; use the extended measure")
    raise TypeError(f"not a fuzzy value: {v!r}")


def check_alpha(alpha: float) -> float:
    if math.isnan(alpha) or not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange(alpha)
    return alpha


def alpha_cut(v: FuzzyValue, alpha: float, dom: AttributeDomain) -> Cut:
    """Crisp interval of the values whose membership in ``v`` is at least ``alpha``.

    Args:
        v: Cell to cut
        alpha: Cut degree in [0, 1]
        dom: Domain of the cell's attribute

    Returns:
        The cut interval, or EMPTY when a confidence interval's degree is below alpha
    """
    check_alpha(alpha)
    if isinstance(v, Trapezoid):
        if alpha == 1.0:
            return Interval(v.b, v.c)
        # Clamped so cuts stay nested under rounding
        lower = min(v.a + alpha * (v.b - v.a), v.b)
        upper = max(v.d - alpha * (v.d - v.c), v.c)
        return Interval(lower, upper)
    if isinstance(v, ConfidenceInterval):
        return v.interval if alpha <= v.p else EMPTY
    return to_interval(v, dom)


def membership(v: FuzzyValue, u: float, dom: AttributeDomain) -> float:
    """Membership degree of the real ``u`` in the fuzzy set denoted by ``v``."""
    if isinstance(v, Crisp):
        return 1.0 if u == v.x else 0.0
    if isinstance(v, Null):
        return 1.0 if dom.lower <= u <= dom.upper else 0.0
    if isinstance(v, ConfidenceInterval):
        return v.p if v.interval.lower <= u <= v.interval.upper else 0.0
    if v.b <= u <= v.c:
        return 1.0
    if v.a < u < v.b:
        return (u - v.a) / (v.b - v.a)
    if v.c < u < v.d:
        return (v.d - u) / (v.d - v.c)
    return 0.0


def modular(h: Cut, dom: AttributeDomain, extended: bool = False) -> float:
    """Length measure of an interval with the special cases for empty,
    degenerate and unbounded intervals.

    Degenerate intervals measure ``dom.delta``, or ``dom.epsilon`` when
    ``extended`` is set (cut-degree measure).
    """
    if h is EMPTY:
        return 0.0
    if not h.is_bounded:
        return dom.theta
    if h.is_degenerate:
        return dom.epsilon if extended else dom.delta
    return abs(h.upper - h.lower)


def intersect(a: Cut, b: Cut) -> Cut:
    if a is EMPTY or b is EMPTY:
        return EMPTY
    lower = max(a.lower, b.lower)
    upper = min(a.upper, b.upper)
    if lower > upper:
        return EMPTY
    return Interval(lower, upper)


def union_hull(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lower, b.lower), max(a.upper, b.upper))


def contains(outer: Cut, inner: Cut) -> bool:
    """True when ``inner`` is a subset of ``outer``."""
    if inner is EMPTY:
        return True
    if outer is EMPTY:
        return False
    return outer.lower <= inner.lower and inner.upper <= outer.upper


def within_domain(v: FuzzyValue, dom: AttributeDomain) -> bool:
    """Whether every bound carried by ``v`` lies inside the attribute domain."""
    if isinstance(v, Null):
        return True
    if isinstance(v, Crisp):
        bounds = (v.x,)
    elif isinstance(v, ConfidenceInterval):
        bounds = (v.interval.lower, v.interval.upper)
    else:
        bounds = (v.a, v.d)
    return all(dom.lower <= value <= dom.upper for value in bounds)


# ---------------------------------------------------------------------------
# Cell grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<word>[A-Za-z]+)|(?P<punct>[\[\](),/]))"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        match = _TOKEN.match(text, pos)
        if not match:
            column = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise CellSyntaxError(text, column, "unexpected character")
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append((kind, value, match.start(kind) + 1))
        pos = match.end()
    return tokens


class _CellParser:
    """Recursive-descent reader for a single cell string."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _column(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text) + 1

    def _expect(self, value: str) -> None:
        token = self._peek()
        if token is None or token[1] != value:
            raise CellSyntaxError(self.text, self._column(), f"expected {value!r}")
        self.index += 1

    def _number(self) -> float:
        token = self._peek()
        if token is None or token[0] != 'num':
            raise CellSyntaxError(self.text, self._column(), "expected a number")
        self.index += 1
        return float(token[1])

    def parse(self) -> FuzzyValue:
        token = self._peek()
        if token is None:
            raise CellSyntaxError(self.text, 1, "empty cell")
        kind, value, column = token
        if kind == 'num':
            result = Crisp(self._number())
        elif kind == 'word' and value.lower() == 'null':
            self.index += 1
            result = Null()
        elif kind == 'word' and value.lower() == 'tz':
            result = self._trapezoid()
        elif value == '[':
            result = self._interval()
        else:
            raise CellSyntaxError(self.text, column, f"unexpected {value!r}")
        if self._peek() is not None:
            raise CellSyntaxError(self.text, self._column(), "trailing input")
        return result

    def _interval(self) -> FuzzyValue:
        start = self._column()
        self._expect('[')
        lower = self._number()
        self._expect(',')
        upper = self._number()
        self._expect(']')
        p = 1.0
        p_column = start
        if self._peek() is not None and self._peek()[1] == '/':
            self.index += 1
            p_column = self._column()
            p = self._number()
        if lower > upper:
            raise CellSyntaxError(self.text, start, "interval lower bound exceeds upper bound")
        if not 0.0 <= p <= 1.0:
            raise CellSyntaxError(self.text, p_column, "confidence degree outside [0, 1]")
        return ConfidenceInterval(Interval(lower, upper), p)

    def _trapezoid(self) -> Trapezoid:
        start = self._column()
        self.index += 1
        self._expect('(')
        points = [self._number()]
        for _ in range(3):
            self._expect(',')
            points.append(self._number())
        self._expect(')')
        if not (points[0] <= points[1] <= points[2] <= points[3]):
            raise CellSyntaxError(self.text, start, "trapezoid points must be non-decreasing")
        return Trapezoid(*points)


def parse_cell(text: str) -> FuzzyValue:
    """Parse one cell string of the cell grammar.

    Raises:
        CellSyntaxError: with the 1-based column of the offending token
    """
    return _CellParser(text).parse()


def format_number(x: float) -> str:
    """Shortest text that reads back to exactly ``x``."""
    text = repr(float(x))
    return text[:-2] if text.endswith('.0') else text


def format_cell(v: FuzzyValue) -> str:
    if isinstance(v, Crisp):
        return format_number(v.x)
    if isinstance(v, Null):
        return 'null'
    if isinstance(v, ConfidenceInterval):
        text = str(v.interval)
        return text if v.p == 1.0 else f"{text}/{format_number(v.p)}"
    return f"tz({','.join(format_number(x) for x in (v.a, v.b, v.c, v.d))})"
