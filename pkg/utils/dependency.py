import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config import Config
from utils.errors import MalformedQuery, TrapezoidNeedsAlpha
from utils.proximity import Form, Measure, ProximityConfig, sp_cells
from utils.relation import AttributeSet, Relation, complement_set

# Witness conditions in the order they are reported
CONDITIONS = ('x_i', 'x_j', 'y_i', 'z_j')


class Kind(str, Enum):
    FFD = 'ffd'
    FMVD = 'fmvd'

    @property
    def arrow(self) -> str:
        return '->' if self is Kind.FFD else '->>'


def format_attribute_set(names: Iterable[str], order: Optional[Sequence[str]] = None) -> str:
    """Comma-joined names (in ``order`` when given), ``{}`` for the empty set."""
    members = set(names)
    if not members:
        return '{}'
    ordered = [n for n in order if n in members] if order is not None else sorted(members)
    return ','.join(ordered)


@dataclass(frozen=True)
class DependencyStatement:
    """An FFD ``lhs -> rhs`` or an FMVD ``lhs ->> rhs``."""

    kind: Kind
    lhs: FrozenSet[str]
    rhs: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, 'kind', Kind(self.kind))
        object.__setattr__(self, 'lhs', frozenset(self.lhs))
        object.__setattr__(self, 'rhs', frozenset(self.rhs))
        if not self.lhs:
            raise MalformedQuery("a dependency needs a non-empty left-hand side")

    @classmethod
    def ffd(cls, lhs: Iterable[str], rhs: Iterable[str]) -> 'DependencyStatement':
        return cls(Kind.FFD, frozenset(lhs), frozenset(rhs))

    @classmethod
    def fmvd(cls, lhs: Iterable[str], rhs: Iterable[str]) -> 'DependencyStatement':
        return cls(Kind.FMVD, frozenset(lhs), frozenset(rhs))

    @property
    def is_trivial(self) -> bool:
        return self.rhs <= self.lhs

    def format(self, order: Optional[Sequence[str]] = None) -> str:
        return (f"{format_attribute_set(self.lhs, order)} {self.kind.arrow} "
                f"{format_attribute_set(self.rhs, order)}")

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Witness:
    """Best candidate tuple found for a violating pair."""

    tuple_index: int
    failing_condition: Optional[str]
    achieved: float

    def to_dict(self) -> Dict:
        return {
            'tuple_index': self.tuple_index,
            'failing_condition': self.failing_condition,
            'achieved': self.achieved,
        }


@dataclass(frozen=True)
class Violation:
    pair: Tuple[int, int]
    beta: float
    rhs_proximity: Optional[float] = None
    best_witness: Optional[Witness] = None

    def to_dict(self) -> Dict:
        return {
            'pair': list(self.pair),
            'beta': self.beta,
            'rhs_proximity': self.rhs_proximity,
            'best_witness': None if self.best_witness is None else self.best_witness.to_dict(),
        }


@dataclass(frozen=True)
class CheckReport:
    """Outcome of checking one dependency on one relation."""

    statement: DependencyStatement
    measure: str
    violations: Tuple[Violation, ...]
    vacuous_pairs: int
    pairs_checked: int
    min_beta: Optional[float]
    order: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict:
        return {
            'dependency': self.statement.format(self.order or None),
            'kind': self.statement.kind.value,
            'measure': self.measure,
            'holds': self.holds,
            'violations': [v.to_dict() for v in self.violations],
            'vacuous_pairs': self.vacuous_pairs,
            'pairs_checked': self.pairs_checked,
            'min_beta': self.min_beta,
        }


@dataclass(frozen=True)
class ReplicationReport:
    ffd_holds: bool
    fmvd_holds: bool

    @property
    def inconsistent(self) -> bool:
        """An FFD that holds while the FMVD it replicates to does not."""
        return self.ffd_holds and not self.fmvd_holds

    def to_dict(self) -> Dict:
        return {'ffd_holds': self.ffd_holds, 'fmvd_holds': self.fmvd_holds,
                'inconsistent': self.inconsistent}


class DependencyChecker:
    """Decides FFDs and FMVDs on one relation under one proximity configuration.

    Pairwise cell proximities are computed once per attribute and shared by
    every check, so many statements can be tested against the same relation
    cheaply. Rows of tuple pairs are evaluated on a thread pool; results are
    collected in row order, so reports do not depend on scheduling.
    """

    def __init__(self, relation: Relation, cfg: Optional[ProximityConfig] = None,
                 max_workers: Optional[int] = None, tolerance: Optional[float] = None):
        self.relation = relation
        self.cfg = cfg or ProximityConfig()
        self.max_workers = Config.MAX_WORKERS if max_workers is None else max_workers
        self.tolerance = Config.TOLERANCE if tolerance is None else tolerance
        self.logger = logging.getLogger(__name__)
        self._tables: Dict[str, List[List[float]]] = {}

    def _table(self, name: str) -> List[List[float]]:
        """Pairwise proximities of one attribute's cells, computed on first use."""
        table = self._tables.get(name)
        if table is None:
            column = self.relation.schema.index_of(name)
            domain = self.relation.schema.domain(name)
            cells = [row[column] for row in self.relation.tuples]
            table = [[sp_cells(a, b, domain, self.cfg) for b in cells] for a in cells]
            self._tables[name] = table
        return table

    def _prepare(self, *attribute_sets: AttributeSet) -> None:
        """Fill the proximity tables of every attribute in ``attribute_sets``."""
        # Tables are filled before any worker thread reads them
        for attrs in attribute_sets:
            for name in self.relation.schema.ordered(attrs):
                self._table(name)

    def proximity(self, i: int, j: int, attrs: AttributeSet) -> float:
        """Tuple proximity on ``attrs``; 1 on the empty set."""
        value = 1.0
        for name in attrs:
            value = min(value, self._table(name)[i][j])
        return value

    def _map(self, fn: Callable[[int], List], rows: range) -> List:
        """Apply ``fn`` to every row index, on the thread pool when it has more than one worker.

        Returns:
            Results in row order
        """
        if self.max_workers <= 1 or len(rows) < 2:
            return [fn(i) for i in rows]
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(fn, rows))

    def _resolve(self, d: DependencyStatement, kind: Kind) -> Tuple[AttributeSet, AttributeSet]:
        """Check the statement kind and resolve both sides against the schema."""
        if d.kind is not kind:
            raise MalformedQuery(f"expected an {kind.value.upper()}, got {d}")
        schema = self.relation.schema
        return schema.attribute_set(d.lhs), schema.attribute_set(d.rhs)

    def _report(self, d: DependencyStatement, rows: List[Tuple[List[Violation], int, int, Optional[float]]]
                ) -> CheckReport:
        """Merge per-row (violations, vacuous, checked, lowest beta) results and log the verdict."""
        violations =tuple(v for row in rows for v in row[0])
        betas = [row[3] for row in rows if row[3] is not None]
        report = CheckReport(
            statement=d,
            measure=self.cfg.describe(),
            violations=violations,
            vacuous_pairs=sum(row[1] for row in rows),
            pairs_checked=sum(row[2] for row in rows),
            min_beta=min(betas) if betas else None,
            order=self.relation.schema.names,
        )
        self.logger.info(
            f"{d.format(report.order)} under {report.measure}: "
            f"{'holds' if report.holds else 'violated'} ({report.pairs_checked} pairs, "
            f"{len(violations)} violations, {report.vacuous_pairs} vacuous)")
        return report

    def check_ffd(self, d: DependencyStatement) -> CheckReport:
        """Check an FFD over every unordered tuple pair.

        A pair violates ``X -> Y`` when its proximity on X exceeds its
        proximity on Y by more than the tolerance.
        """
        x, y = self._resolve(d, Kind.FFD)
        self._prepare(x, y)
        n = len(self.relation)

        def row(i: int):
            violations = []
            lowest = None
            for j in range(i + 1, n):
                beta = self.proximity(i, j, x)
                rhs = self.proximity(i, j, y)
                lowest = beta if lowest is None else min(lowest, beta)
                if beta > rhs + self.tolerance:
                    violations.append(Violation((i, j), beta, rhs_proximity=rhs))
            return violations, 0, n - i - 1, lowest

        return self._report(d, self._map(row, range(n)))

    def _best_witness(self, i: int, j: int, beta: float, x: AttributeSet, y: AttributeSet,
                      z: AttributeSet) -> Tuple[bool, Optional[Witness]]:
        """Search every tuple for a witness of the pair (i, j).

        Returns:
            (True, None) as soon as a witness is found, otherwise (False, the
            tuple with the highest minimum condition and its first failing condition)
        """
        best = None
        best_score = -1.0
        floor = beta - self.tolerance
        for t in range(len(self.relation)):
            values = [self.proximity(t, i, x), self.proximity(t, j, x)]
            values.append(self.proximity(t, i, y) if y else None)
            values.append(self.proximity(t, j, z) if z else None)
            present = [v for v in values if v is not None]
            score = min(present)
            if score >= floor:
                return True, None
            if score > best_score:
                best_score = score
                failing = next(k for k, v in enumerate(values) if v is not None and v < floor)
                best = Witness(t, CONDITIONS[failing], values[failing])
        return False, best

    def check_fmvd(self, d: DependencyStatement) -> CheckReport:
        """Check an FMVD over every ordered tuple pair.

        For a pair (i, j) with beta = SP(Ti, Tj on X) above the vacuity
        threshold, some tuple T must be beta-close to both on X, to Ti on Y
        and to Tj on Z = U - XY. Y is taken as Y - X, which gives the same
        verdict. Conditions over empty sets always hold.
        """
        x, rhs = self._resolve(d, Kind.FMVD)
        y = rhs - x
        z = complement_set(self.relation.schema, x, y)
        self._prepare(x, y, z)
        n = len(self.relation)
        threshold = self.cfg.vacuity_threshold + self.tolerance

        def row(i: int):
            violations = []
            vacuous = 0
            lowest = None
            for j in range(n):
                if j == i:
                    continue
                beta = self.proximity(i, j, x)
                if beta <= threshold:
                    vacuous += 1
                    continue
                lowest = beta if lowest is None else min(lowest, beta)
                found, best = self._best_witness(i, j, beta, x, y, z)
                if not found:
                    violations.append(Violation((i, j), beta, best_witness=best))
            return violations, vacuous, n - 1, lowest

        return self._report(d, self._map(row, range(n)))

    def check(self, d: DependencyStatement) -> CheckReport:
        return self.check_ffd(d) if d.kind is Kind.FFD else self.check_fmvd(d)

    def check_replication(self, x: Iterable[str], y: Iterable[str]) -> ReplicationReport:
        ffd = self.check_ffd(DependencyStatement.ffd(x, y))
        fmvd = self.check_fmvd(DependencyStatement.fmvd(x, y))
        report = ReplicationReport(ffd.holds, fmvd.holds)
        if report.inconsistent:
            self.logger.warning(
                f"{self.cfg.describe()}: FFD holds but the replicated FMVD does not")
        return report


def check_ffd(r: Relation, d: DependencyStatement, cfg: Optional[ProximityConfig] = None) -> CheckReport:
    return DependencyChecker(r, cfg).check_ffd(d)


def check_fmvd(r: Relation, d: DependencyStatement, cfg: Optional[ProximityConfig] = None) -> CheckReport:
    return DependencyChecker(r, cfg).check_fmvd(d)


def check_replication(r: Relation, x: Iterable[str], y: Iterable[str],
                      cfg: Optional[ProximityConfig] = None) -> ReplicationReport:
    return DependencyChecker(r, cfg).check_replication(x, y)


@dataclass(frozen=True)
class DefinitionVerdict:
    definition: str
    works: bool
    reason: str
    ffd_holds: Optional[bool] = None
    fmvd_holds: Optional[bool] = None

    def to_dict(self) -> Dict:
        return {
            'definition': self.definition,
            'works': self.works,
            'reason': self.reason,
            'ffd_holds': self.ffd_holds,
            'fmvd_holds': self.fmvd_holds,
        }


def definition_configs(alpha: float) -> List[Tuple[str, ProximityConfig]]:
    return [
        ('liu', ProximityConfig(Measure.LIU, Form.TWO_TERM, alpha)),
        ('improved', ProximityConfig(Measure.IMPROVED, None, alpha)),
        ('extended', ProximityConfig(Measure.EXTENDED, Form.RATIO, alpha)),
    ]


def compare_definitions(r: Relation, x: Iterable[str], y: Iterable[str],
                        alpha: float = Config.DEFAULT_ALPHA) -> List[DefinitionVerdict]:
    """Run the replication check under each proximity definition.

    A definition does not work on ``r`` when it cannot represent some cell
    (trapezoids without a cut degree) or when the FFD holds while the
    replicated FMVD fails.

    Returns:
        One verdict per definition: liu, improved, extended
    """
    x = frozenset(x)
    y = frozenset(y)
    verdicts = []
    for name, cfg in definition_configs(alpha):
        try:
            report = check_replication(r, x, y, cfg)
        except TrapezoidNeedsAlpha:
            verdicts.append(DefinitionVerdict(name, False, 'cannot represent trapezoidal values'))
            continue
        reason = 'replication inconsistent' if report.inconsistent else 'consistent'
        verdicts.append(DefinitionVerdict(name, not report.inconsistent, reason,
                                          report.ffd_holds, report.fmvd_holds))
    logging.getLogger(__name__).info(
        "Definition comparison: " + ', '.join(f"{v.definition}={'works' if v.works else 'fails'}"
                                              for v in verdicts))
    return verdicts
