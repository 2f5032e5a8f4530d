import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from config import Config
from utils.dependency import DependencyChecker, DependencyStatement
from utils.errors import InvalidConfiguration, SchemaOverlapInvalid
from utils.interval_core import format_cell
from utils.proximity import ProximityConfig, sp_cells, sp_tuple
from utils.relation import Relation, Row, Schema, complement_set, project

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JoinConfig:
    """Proximity settings plus the threshold two tuples must reach to join."""

    cfg: ProximityConfig = field(default_factory=ProximityConfig)
    beta_join: float = Config.DEFAULT_BETA_JOIN

    def __post_init__(self):
        if not 0.0 < self.beta_join <= 1.0:
            raise InvalidConfiguration(f"join threshold {self.beta_join} outside (0, 1]", option='beta_join')


def _pool_map(fn, rows: range) -> List:
    if Config.MAX_WORKERS <= 1 or len(rows) < 2:
        return [fn(i) for i in rows]
    with ThreadPoolExecutor(max_workers=Config.MAX_WORKERS) as executor:
        return list(executor.map(fn, rows))


def alpha_join(r1: Relation, r2: Relation, on: Iterable[str], jc: Optional[JoinConfig] = None) -> Relation:
    """Join two relations on their shared attributes by proximity.

    Tuples t1, t2 join when their proximity on ``on`` reaches
    ``jc.beta_join``. A joined tuple takes t1's values on ``on`` and on
    r1's other attributes, and t2's values on r2's other attributes.

    Args:
        r1: Left operand
        r2: Right operand
        on: Exactly the attributes the two schemas share
        jc: Join configuration

    Returns:
        Relation over r1's attributes followed by r2's remaining ones, in
        (t1 index, t2 index) order without exact duplicates

    Raises:
        SchemaOverlapInvalid: if ``on`` differs from the shared attributes or
            a shared attribute has different domains on the two sides
    """
    jc = jc or JoinConfig()
    on = frozenset(on)
    shared = frozenset(r1.schema.names) & frozenset(r2.schema.names)
    if on != shared:
        raise SchemaOverlapInvalid(
            f"join attributes {sorted(on)} differ from the shared attributes {sorted(shared)}")
    if not on:
        raise SchemaOverlapInvalid("the operands share no attributes")
    for name in on:
        if r1.schema.domain(name) != r2.schema.domain(name):
            raise SchemaOverlapInvalid(f"attribute {name!r} has different domains in the operands")

    keys = r1.schema.ordered(on)
    left = [r1.schema.index_of(name) for name in keys]
    right = [r2.schema.index_of(name) for name in keys]
    domains = [r1.schema.domain(name) for name in keys]
    extra = [a for a in r2.schema if a.name not in on]
    extra_positions = [r2.schema.index_of(a.name) for a in extra]
    floor = jc.beta_join - Config.TOLERANCE

    def row(i: int) -> List[Row]:
        t1 = r1.tuples[i]
        joined = []
        for t2 in r2.tuples:
            value = min(sp_cells(t1[p], t2[q], dom, jc.cfg) for p, q, dom in zip(left, right, domains))
            if value >= floor:
                joined.append(t1 + tuple(t2[p] for p in extra_positions))
        return joined

    seen = set()
    rows = []
    for joined in _pool_map(row, range(len(r1))):
        for t in joined:
            if t not in seen:
                seen.add(t)
                rows.append(t)
    schema = Schema(r1.schema.attributes + tuple(extra))
    logger.debug(f"Joined {len(r1)} x {len(r2)} tuples on {keys} into {len(rows)}")
    return Relation(schema, tuple(rows))


@dataclass(frozen=True)
class LosslessReport:
    lossless: bool
    extra: Tuple[Row, ...]
    missing: Tuple[Row, ...]
    joined_count: int
    beta_join: float

    def to_dict(self) -> Dict:
        return {
            'lossless': self.lossless,
            'extra': [[format_cell(v) for v in t] for t in self.extra],
            'missing': [[format_cell(v) for v in t] for t in self.missing],
            'joined_count': self.joined_count,
            'beta_join': self.beta_join,
        }


def lossless_check(r: Relation, x: Iterable[str], y: Iterable[str],
                   jc: Optional[JoinConfig] = None) -> LosslessReport:
    """Split ``r`` into XY and XZ (Z = U - XY), join back on X and compare.

    Tuples are matched by beta-closeness over every attribute rather than by
    equality.
    """
    jc = jc or JoinConfig()
    schema = r.schema
    x = schema.attribute_set(x)
    y = schema.attribute_set(y) - x
    z = complement_set(schema, x, y)
    joined = alpha_join(project(r, x | y), project(r, x | z), x, jc).columns(schema.names)

    floor = jc.beta_join - Config.TOLERANCE
    names = schema.names
    close = [[sp_tuple(a, b, names, jc.cfg, schema) >= floor for b in r.tuples] for a in joined.tuples]
    extra = tuple(t for t, row in zip(joined.tuples, close) if not any(row))
    missing = tuple(t for k, t in enumerate(r.tuples) if not any(row[k] for row in close))
    report = LosslessReport(not extra and not missing, extra, missing, len(joined), jc.beta_join)
    logger.info(f"Decomposition on {sorted(x)} | {sorted(y)}: "
                f"{'lossless' if report.lossless else 'lossy'} "
                f"({len(joined)} joined, {len(extra)} extra, {len(missing)} missing)")
    return report


@dataclass(frozen=True)
class ProbeReport:
    fmvd: bool
    lossless: bool
    beta: float

    @property
    def agree(self) -> bool:
        return self.fmvd == self.lossless

    def to_dict(self) -> Dict:
        return {'fmvd': self.fmvd, 'lossless': self.lossless, 'agree': self.agree, 'beta': self.beta}


def theorem1_probe(r: Relation, x: Iterable[str], y: Iterable[str],
                   cfg: Optional[ProximityConfig] = None) -> ProbeReport:
    """Compare the FMVD X ->> Y with losslessness of the XY / XZ split.

    The join threshold is the smallest non-vacuous pair beta seen by the FMVD
    check, or 1 when every pair is vacuous.
    """
    cfg = cfg or ProximityConfig()
    x = frozenset(x)
    y = frozenset(y)
    check = DependencyChecker(r, cfg).check_fmvd(DependencyStatement.fmvd(x, y))
    beta = check.min_beta if check.min_beta is not None else 1.0
    lossless = lossless_check(r, x, y, JoinConfig(cfg, beta))
    report = ProbeReport(check.holds, lossless.lossless, beta)
    if not report.agree:
        logger.warning(f"FMVD verdict {report.fmvd} and lossless verdict {report.lossless} "
                       f"disagree at beta={beta}")
    return report
