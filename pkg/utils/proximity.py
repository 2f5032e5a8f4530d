"""Semantic proximity between fuzzy cells and between tuples.

Four measures are available:

    liu         intersection/hull ratio of interval numbers, optionally minus
                the intersection's share of the universe scope (two_term)
    improved    one minus the relative differences of the bounds, zero on
                disjoint operands, clamped at 0
    complement  the same bound-difference measure without the disjointness guard
    extended    liu's construction applied to alpha-cuts, with epsilon as the
                degenerate length (ratio by default)
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Dict, Iterable, Optional, Sequence

from config import Config
from utils.errors import EmptyAttributeSet, EmptyOperand, InvalidConfiguration, NonPositiveMax
from utils.interval_core import (EMPTY, AttributeDomain, Cut, FuzzyValue, Interval, alpha_cut,
                                 check_alpha, intersect, modular, to_interval, union_hull)

if TYPE_CHECKING:
    from utils.relation import Schema

logger = logging.getLogger(__name__)


class Measure(str, Enum):
    LIU = 'liu'
    IMPROVED = 'improved'
    EXTENDED = 'extended'
    COMPLEMENT = 'complement'


class Form(str, Enum):
    TWO_TERM = 'two_term'
    RATIO = 'ratio'


_DEFAULT_FORMS = {
    Measure.LIU: Form.TWO_TERM,
    Measure.EXTENDED: Form.RATIO,
}


def parse_form(text: Optional[str]) -> Optional[Form]:
    """Accept ``two-term``/``two_term``/``ratio`` (or None for the measure default)."""
    if text is None:
        return None
    return Form(text.replace('-', '_'))


@dataclass(frozen=True)
class ProximityConfig:
    """Which measure to use and how.

    ``form`` only matters for liu and extended; ``None`` picks the measure's
    default (liu: two_term, extended: ratio). ``vacuity_threshold`` is the
    beta at or below which a tuple pair cannot violate an FMVD.
    """

    measure: Measure = Measure(Config.DEFAULT_MEASURE)
    form: Optional[Form] = None
    alpha: float = Config.DEFAULT_ALPHA
    vacuity_threshold: float = Config.DEFAULT_BETA_MIN
    clamp: bool = True

    def __post_init__(self):
        try:
            object.__setattr__(self, 'measure', Measure(self.measure))
            if self.form is not None:
                object.__setattr__(self, 'form', parse_form(str(getattr(self.form, 'value', self.form))))
        except ValueError as e:
            raise InvalidConfiguration(str(e))
        check_alpha(self.alpha)
        if not 0.0 <= self.vacuity_threshold < 1.0:
            raise InvalidConfiguration(
                f"vacuity threshold {self.vacuity_threshold} outside [0, 1)", option='beta_min')

    @property
    def effective_form(self) -> Optional[Form]:
        if self.measure in (Measure.IMPROVED, Measure.COMPLEMENT):
            return None
        return self.form or _DEFAULT_FORMS[self.measure]

    def describe(self) -> str:
        form = self.effective_form
        text = self.measure.value if form is None else f"{self.measure.value}/{form.value}"
        if self.measure is Measure.EXTENDED:
            text += f" at alpha={self.alpha}"
        return text


def _clamp(value: float) -> float:
    return max(0.0, min(1.0, value))


def _relative_difference(x: float, y: float) -> float:
    if x == y:
        return 0.0
    largest = max(x, y)
    if largest <= 0:
        raise NonPositiveMax(f"relative difference of {x} and {y} has no positive maximum")
    return abs(x - y) / largest


def _ratio_terms(inter_length: float, hull_length: float, theta: float, form: Form,
                 clamp: bool) -> float:
    ratio = inter_length / hull_length
    if form is Form.RATIO:
        return _clamp(ratio) if clamp else ratio
    value = ratio - inter_length / theta
    return _clamp(value) if clamp else value


def sp_liu(f1: Interval, f2: Interval, dom: AttributeDomain,
           form: Form = Form.TWO_TERM, clamp: bool = True) -> float:
    """Proximity of two interval numbers from their intersection and hull.

    Args:
        f1, f2: Non-empty intervals inside ``dom``
        dom: Attribute domain supplying theta and delta
        form: ``two_term`` subtracts the intersection's share of theta
        clamp: Keep the result inside [0, 1]

    Returns:
        0 for disjoint operands, otherwise the ratio (minus the scope term)
    """
    if f1 is EMPTY or f2 is EMPTY:
        raise EmptyOperand("liu proximity needs two non-empty intervals")
    inter = intersect(f1, f2)
    if inter is EMPTY:
        return 0.0
    hull = union_hull(f1, f2)
    return _ratio_terms(modular(inter, dom), modular(hull, dom), dom.theta, Form(form), clamp)


def sp_complement(f1: Interval, f2: Interval, clamp: bool = True) -> float:
    """One minus the relative differences of both bounds, with no disjointness guard."""
    if f1 is EMPTY or f2 is EMPTY:
        raise EmptyOperand("proximity needs two non-empty intervals")
    value = 1.0 - (_relative_difference(f1.lower, f2.lower)
                   + _relative_difference(f1.upper, f2.upper))
    return _clamp(value) if clamp else value


def sp_improved(f1: Interval, f2: Interval) -> float:
    """Bound-difference proximity that is exactly 0 on disjoint operands.

    Overlapping operands far apart in scale can drive the raw value below 0;
    the result is clamped there.
    """
    if f1 is EMPTY or f2 is EMPTY:
        raise EmptyOperand("improved proximity needs two non-empty intervals")
    if intersect(f1, f2) is EMPTY:
        return 0.0
    return sp_complement(f1, f2, clamp=True)


def sp_extended(v1: FuzzyValue, v2: FuzzyValue, alpha: float, dom: AttributeDomain,
                form: Form = Form.RATIO, clamp: bool = True) -> float:
    """Proximity of two fuzzy cells compared through their alpha-cuts.

    Args:
        v1, v2: Cells of the same attribute
        alpha: Cut degree in [0, 1]
        dom: Attribute domain supplying theta and epsilon
        form: ``ratio`` (default) or ``two_term``
        clamp: Keep the result inside [0, 1]

    Returns:
        0 when either cut or their intersection is empty
    """
    check_alpha(alpha)
    g = alpha_cut(v1, alpha, dom)
    h = alpha_cut(v2, alpha, dom)
    inter = intersect(g, h)
    if inter is EMPTY:
        return 0.0
    hull = union_hull(g, h)
    return _ratio_terms(modular(inter, dom, extended=True), modular(hull, dom, extended=True),
                        dom.theta, Form(form), clamp)


def semantic_distance(sp: float) -> float:
    return 1.0 - sp


def sp_cells(v1: FuzzyValue, v2: FuzzyValue, dom: AttributeDomain, cfg: ProximityConfig) -> float:
    """Proximity of two cells of one attribute under ``cfg``."""
    if cfg.measure is Measure.EXTENDED:
        return sp_extended(v1, v2, cfg.alpha, dom, cfg.effective_form, cfg.clamp)
    f1 = to_interval(v1, dom)
    f2 = to_interval(v2, dom)
    if cfg.measure is Measure.LIU:
        return sp_liu(f1, f2, dom, cfg.effective_form, cfg.clamp)
    if cfg.measure is Measure.IMPROVED:
        return sp_improved(f1, f2)
    return sp_complement(f1, f2, cfg.clamp)


def sp_tuple(t1: Sequence[FuzzyValue], t2: Sequence[FuzzyValue], attrs: Iterable[str],
             cfg: ProximityConfig, schema: 'Schema') -> float:
    """Tuple proximity on an attribute set: the minimum over its attributes.

    Raises:
        EmptyAttributeSet: if ``attrs`` is empty
        UnknownAttribute: if an attribute is not in ``schema``
    """
    names = list(attrs)
    if not names:
        raise EmptyAttributeSet("proximity over an empty attribute set")
    value = 1.0
    for name in names:
        index = schema.index_of(name)
        value = min(value, sp_cells(t1[index], t2[index], schema.domain(name), cfg))
    return value


@dataclass(frozen=True)
class ProximityBreakdown:
    """Intermediate quantities of one cell comparison."""

    measure: str
    form: Optional[str]
    alpha: Optional[float]
    cut1: Cut
    cut2: Cut
    intersection: Cut
    hull: Optional[Interval]
    modular_intersection: float
    modular_hull: Optional[float]
    value: float

    @property
    def distance(self) -> float:
        return semantic_distance(self.value)

    def to_dict(self) -> Dict:
        def text(cut):
            return None if cut is None else str(cut)

        return {
            'measure': self.measure,
            'form': self.form,
            'alpha': self.alpha,
            'cut1': text(self.cut1),
            'cut2': text(self.cut2),
            'intersection': text(self.intersection),
            'hull': text(self.hull),
            'modular_intersection': self.modular_intersection,
            'modular_hull': self.modular_hull,
            'value': self.value,
            'distance': self.distance,
        }


def explain(v1: FuzzyValue, v2: FuzzyValue, dom: AttributeDomain,
            cfg: ProximityConfig) -> ProximityBreakdown:
    """Compute the proximity of two cells together with its intermediate quantities."""
    extended = cfg.measure is Measure.EXTENDED
    if extended:
        cut1 = alpha_cut(v1, cfg.alpha, dom)
        cut2 = alpha_cut(v2, cfg.alpha, dom)
    else:
        cut1 = to_interval(v1, dom)
        cut2 = to_interval(v2, dom)
    inter = intersect(cut1, cut2)
    hull = union_hull(cut1, cut2) if cut1 is not EMPTY and cut2 is not EMPTY else None
    value = sp_cells(v1, v2, dom, cfg)
    form = cfg.effective_form
    logger.debug(f"{cfg.describe()}: {cut1} vs {cut2} -> {value}")
    return ProximityBreakdown(
        measure=cfg.measure.value,
        form=None if form is None else form.value,
        alpha=cfg.alpha if extended else None,
        cut1=cut1,
        cut2=cut2,
        intersection=inter,
        hull=hull,
        modular_intersection=modular(inter, dom, extended=extended),
        modular_hull=None if hull is None else modular(hull, dom, extended=extended),
        value=value,
    )
