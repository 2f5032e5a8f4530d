"""Symbolic reasoning over sets of FFDs and FMVDs.

Attribute sets are bitmasks over the declared universe (bit k is
``universe[k]``). Facts are kept normalized: the right-hand side never
shares attributes with the left-hand side.

Membership is decided with the dependency basis of the left-hand side,
refined by the given FMVDs plus ``U ->> A`` for every attribute A an FFD
``U -> V`` determines outside U. Derivation traces are rebuilt from the
refinement steps, or from bounded forward saturation when a depth limit is
given, and every trace can be re-checked with ``verify_trace``.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from config import Config
from utils.dependency import DependencyStatement, Kind, format_attribute_set
from utils.errors import DocumentSyntaxError, DuplicateAttribute, MalformedQuery, UniverseTooLarge
from utils.relation import key_position, load_json_document

logger = logging.getLogger(__name__)

MAX_UNIVERSE = 30

RULES = (
    'given', 'reflexivity', 'complementation', 'augmentation', 'additivity', 'transitivity',
    'pseudo-transitivity', 'projectivity', 'replication', 'coalescence',
    'ffd-reflexivity', 'ffd-augmentation', 'ffd-transitivity',
)

# Rules tried, in order, when looking for a single-step derivation
_ONE_STEP_RULES = (
    'given', 'reflexivity', 'ffd-reflexivity', 'replication', 'complementation', 'transitivity',
    'augmentation', 'additivity', 'projectivity', 'pseudo-transitivity', 'coalescence',
    'ffd-augmentation', 'ffd-transitivity',
)

_ARITY = {
    'given': 0, 'reflexivity': 0, 'ffd-reflexivity': 0,
    'complementation': 1, 'augmentation': 1, 'replication': 1, 'ffd-augmentation': 1,
    'additivity': 2, 'transitivity': 2, 'pseudo-transitivity': 2, 'projectivity': 2,
    'coalescence': 2, 'ffd-transitivity': 2,
}

SATURATION_RULES = tuple(rule for rule in RULES
                         if rule not in ('given', 'reflexivity', 'ffd-reflexivity'))


class Fact(NamedTuple):
    kind: Kind
    lhs: int
    rhs: int


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _between(low: int, high: int) -> Iterator[int]:
    """Every mask m with low <= m <= high under inclusion (low must be inside high)."""
    for extra in _submasks(high & ~low):
        yield low | extra


def normalize(d: DependencyStatement) -> DependencyStatement:
    """Drop right-hand attributes that already appear on the left.

    An FMVD whose right-hand side becomes empty is trivially valid
    (``is_trivial`` is then true).
    """
    return DependencyStatement(d.kind, d.lhs, d.rhs - d.lhs)


@dataclass(frozen=True)
class DependencySet:
    """FFDs and FMVDs over an ordered universe of attribute names."""

    universe: Tuple[str, ...]
    ffds: Tuple[DependencyStatement, ...] = ()
    fmvds: Tuple[DependencyStatement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'universe', tuple(self.universe))
        object.__setattr__(self, 'ffds', tuple(self.ffds))
        object.__setattr__(self, 'fmvds', tuple(self.fmvds))
        seen = set()
        for name in self.universe:
            if name in seen:
                raise DuplicateAttribute(name)
            seen.add(name)
        for expected, statements in ((Kind.FFD, self.ffds), (Kind.FMVD, self.fmvds)):
            for d in statements:
                if d.kind is not expected:
                    raise MalformedQuery(f"{d} listed among the {expected.value}s")
                unknown = (d.lhs | d.rhs) - seen
                if unknown:
                    raise MalformedQuery(f"{d} uses attributes outside the universe: {sorted(unknown)}")

    @property
    def statements(self) -> Tuple[DependencyStatement, ...]:
        return self.ffds + self.fmvds

    def to_dict(self) -> Dict:
        def entry(d):
            return {'lhs': [n for n in self.universe if n in d.lhs],
                    'rhs': [n for n in self.universe if n in d.rhs]}

        return {
            'universe': list(self.universe),
            'ffds': [entry(d) for d in self.ffds],
            'fmvds': [entry(d) for d in self.fmvds],
        }


@dataclass(frozen=True)
class DerivationStep:
    rule: str
    premises: Tuple[DependencyStatement, ...]
    conclusion: DependencyStatement


@dataclass(frozen=True)
class DerivationTrace:
    steps: Tuple[DerivationStep, ...]

    @property
    def conclusion(self) -> Optional[DependencyStatement]:
        return self.steps[-1].conclusion if self.steps else None

    def to_list(self, order: Optional[Sequence[str]] = None) -> List[Dict]:
        return [{
            'rule': step.rule,
            'premises': [p.format(order) for p in step.premises],
            'conclusion': step.conclusion.format(order),
        } for step in self.steps]


@dataclass(frozen=True)
class ClosureResult:
    query: DependencyStatement
    derivable: bool
    trace: Optional[DerivationTrace]
    method: str
    order: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'query': self.query.format(self.order or None),
            'derivable': self.derivable,
            'method': self.method,
            'trace': None if self.trace is None else self.trace.to_list(self.order or None),
        }


class Provenance(NamedTuple):
    rule: str
    premises: Tuple[Fact, ...]
    depth: int


@dataclass(frozen=True)
class SaturationResult:
    facts: Dict[Fact, Provenance] = field(hash=False)
    rounds: int
    fixpoint: bool


class _TraceBuilder:
    """Accumulates derivation steps; identical steps are recorded once."""

    def __init__(self, engine: 'InferenceEngine'):
        self.engine = engine
        self.steps: List[Tuple[str, Tuple[int, ...], DependencyStatement]] = []
        self._memo: Dict[Tuple, int] = {}

    def add(self, rule: str, premises: Sequence[int], statement: DependencyStatement) -> int:
        key = (rule, tuple(premises), statement)
        if key not in self._memo:
            self.steps.append((rule, tuple(premises), statement))
            self._memo[key] = len(self.steps) - 1
        return self._memo[key]

    def given(self, d: DependencyStatement) -> int:
        return self.add('given', (), d)

    def ffd_single(self, d: DependencyStatement, attribute: int) -> int:
        """U -> A from a given FFD U -> V with A in V - U."""
        e = self.engine
        determined = e.mask(d.rhs) & ~e.mask(d.lhs)
        reflexive = self.add('ffd-reflexivity', (),
                             e.statement(Kind.FFD, determined, attribute))
        return self.add('ffd-transitivity', (self.given(d), reflexive),
                        e.statement(Kind.FFD, e.mask(d.lhs), attribute))

    def source(self, source: Tuple) -> int:
        if source[0] == 'fmvd':
            return self.given(source[1])
        _, d, attribute = source
        return self.add('replication', (self.ffd_single(d, attribute),),
                        self.engine.statement(Kind.FMVD, self.engine.mask(d.lhs), attribute))

    def split(self, x: int, block: int, block_step: int, v: int, w: int, source: Tuple) -> Tuple[int, int]:
        """Steps deriving X ->> B&W and X ->> B-W from X ->> B and V ->> W."""
        e = self.engine
        rest = e.full & ~block
        complement = self.add('complementation', (block_step,),
                              e.statement(Kind.FMVD, x, e.full & ~x & ~block))
        lifted = self.add('augmentation', (self.source(source),), e.statement(Kind.FMVD, rest, w))
        inner = self.add('transitivity', (complement, lifted), e.statement(Kind.FMVD, x, w & block))
        outer = self.add('projectivity', (block_step, inner), e.statement(Kind.FMVD, x, block & ~w))
        return inner, outer

    def trace(self, final: int) -> DerivationTrace:
        needed = set()
        pending = [final]
        while pending:
            index = pending.pop()
            if index not in needed:
                needed.add(index)
                pending.extend(self.steps[index][1])
        steps = []
        for index in sorted(needed):
            rule, premises, statement = self.steps[index]
            steps.append(DerivationStep(rule, tuple(self.steps[p][2] for p in premises), statement))
        return DerivationTrace(tuple(steps))


class InferenceEngine:
    """Closure membership, dependency bases and traces for one DependencySet.

    The engine does not change after construction and can serve queries from
    several threads.
    """

    def __init__(self, ds: DependencySet):
        if len(ds.universe) > MAX_UNIVERSE:
            raise UniverseTooLarge(len(ds.universe), MAX_UNIVERSE)
        self.ds = ds
        self.logger = logging.getLogger(__name__)
        self._bits = {name: 1 << k for k, name in enumerate(ds.universe)}
        self.full = (1 << len(ds.universe)) - 1
        self._given: Dict[Fact, DependencyStatement] = {}
        for d in ds.statements:
            self._given.setdefault(self.fact(d), d)
        # Refiners of the dependency basis: given FMVDs, then U ->> A per FFD U -> V, A in V - U
        self._refiners: List[Tuple[int, int, Tuple]] = []
        for d in ds.fmvds:
            f = self.fact(d)
            self._refiners.append((f.lhs, f.rhs, ('fmvd', d)))
        for d in ds.ffds:
            f = self.fact(d)
            for bit in self._bits_of(f.rhs):
                self._refiners.append((f.lhs, bit, ('ffd', d, bit)))
        self._producers: Dict[str, Callable] = {
            'complementation': self._produce_complementation,
            'augmentation': self._produce_augmentation,
            'replication': self._produce_replication,
            'ffd-augmentation': self._produce_ffd_augmentation,
            'additivity': self._produce_additivity,
            'projectivity': self._produce_projectivity,
            'transitivity': self._produce_transitivity,
            'pseudo-transitivity': self._produce_pseudo_transitivity,
            'coalescence': self._produce_coalescence,
            'ffd-transitivity': self._produce_ffd_transitivity,
        }

    # -- masks -------------------------------------------------------------

    def mask(self, names: Iterable[str]) -> int:
        value = 0
        for name in names:
            try:
                value |= self._bits[name]
            except KeyError:
                raise MalformedQuery(f"attribute {name!r} is not in the universe")
        return value

    def names(self, mask: int) -> FrozenSet[str]:
        return frozenset(name for name, bit in self._bits.items() if mask & bit)

    def _bits_of(self, mask: int) -> List[int]:
        """Single-attribute masks contained in ``mask``, in universe order."""
        return [bit for bit in self._bits.values() if mask & bit]

    def fact(self, d: DependencyStatement) -> Fact:
        lhs = self.mask(d.lhs)
        return Fact(d.kind, lhs, self.mask(d.rhs) & ~lhs)

    def statement(self, kind: Kind, lhs: int, rhs: int) -> DependencyStatement:
        return DependencyStatement(kind, self.names(lhs), self.names(rhs))

    def format(self, d: DependencyStatement) -> str:
        return d.format(self.ds.universe)

    def normalize(self, d: DependencyStatement) -> DependencyStatement:
        self.fact(d)
        return normalize(d)

    # -- dependency basis --------------------------------------------------

    def _refine(self, x: int, builder: Optional[_TraceBuilder] = None) -> List[Tuple[int, Optional[int]]]:
        """Split U - X into basis blocks by repeated refinement with the given FMVDs.

        Args:
            x: Mask of the left-hand side
            builder: When given, records the steps deriving X ->> block for each block

        Returns:
            (block mask, trace step index or None) pairs
        """
        rest = self.full & ~x
        if not rest:
            return []
        first = None
        if builder is not None:
            reflexive = builder.add('reflexivity', (), self.statement(Kind.FMVD, x, x))
            first = builder.add('complementation', (reflexive,), self.statement(Kind.FMVD, x, rest))
        blocks = [(rest, first)]
        changed = True
        while changed:
            changed = False
            for v, w, source in self._refiners:
                refined = []
                for block, step in blocks:
                    if block & v == 0 and block & w and block & ~w:
                        inner = outer = None
                        if builder is not None:
                            inner, outer = builder.split(x, block, step, v, w, source)
                        refined.append((block & w, inner))
                        refined.append((block & ~w, outer))
                        changed = True
                    else:
                        refined.append((block, step))
                blocks = refined
        return blocks

    def basis_masks(self, x: int) -> List[int]:
        return [block for block, _ in self._refine(x)]

    def dependency_basis(self, x: Iterable[str]) -> List[FrozenSet[str]]:
        """Coarsest partition of U - X whose unions are exactly the derivable X ->> W.

        Blocks are ordered by their sorted attribute names.
        """
        x = frozenset(x)
        blocks = [self.names(block) for block in self.basis_masks(self.mask(x))]
        blocks.sort(key=sorted)
        self.logger.debug(f"basis of {format_attribute_set(x, self.ds.universe)}: "
                          + ' | '.join('{' + format_attribute_set(b, self.ds.universe) + '}' for b in blocks))
        return blocks

    def _ffd_source(self, x: int, bit: int) -> Optional[DependencyStatement]:
        """A given FFD U -> V with the attribute in V - U, if {attribute} is a basis block."""
        if bit not in self.basis_masks(x):
            return None
        for d in self.ds.ffds:
            f = self.fact(d)
            if f.rhs & bit:
                return d
        return None

    def _derivable(self, q: Fact) -> bool:
        """Membership test read off the dependency basis of the left-hand side."""
        if q.kind is Kind.FMVD:
            return all(block & q.rhs in (0, block) for block in self.basis_masks(q.lhs))
        return all(self._ffd_source(q.lhs, bit) is not None for bit in self._bits_of(q.rhs))

    # -- traces --------------------------------------------------------------

    def _one_step(self, q: DependencyStatement) -> Optional[DerivationTrace]:
        """A trace applying one rule to the givens, if one reaches ``q``."""
        target = self.fact(q)
        givens = list(self.ds.statements)
        for rule in _ONE_STEP_RULES:
            arity = _ARITY[rule]
            if arity == 0:
                candidates = [()]
            elif arity == 1:
                candidates = [(d,) for d in givens]
            else:
                candidates = [(a, b) for a in givens for b in givens]
            for premises in candidates:
                if self._valid(rule, [self.fact(p) for p in premises], target):
                    steps = [DerivationStep('given', (), p) for p in dict.fromkeys(premises)]
                    steps.append(DerivationStep(rule, premises, q))
                    return DerivationTrace(tuple(steps))
        return None

    def _fmvd_steps(self, builder: _TraceBuilder, x: int, target: int) -> int:
        """Record the steps deriving X ->> (union of the basis blocks meeting ``target``).

        Returns:
            Index of the concluding step in ``builder``
        """
        parts = [(block, step) for block, step in self._refine(x, builder) if block & target]
        if not parts:
            return builder.add('reflexivity', (), self.statement(Kind.FMVD, x, x))
        covered, step = parts[0]
        for block, block_step in parts[1:]:
            covered |= block
            step = builder.add('additivity', (step, block_step), self.statement(Kind.FMVD, x, covered))
        return step

    def _basis_trace(self, q: DependencyStatement) -> DerivationTrace:
        """Rebuild a derivation of ``q`` from the refinement steps of its basis."""
        f = self.fact(q)
        builder = _TraceBuilder(self)
        if f.kind is Kind.FMVD:
            final = self._fmvd_steps(builder, f.lhs, f.rhs)
            if builder.steps[final][2] != q:
                final = builder.add('augmentation', (final,), q)
            return builder.trace(final)

        if not f.rhs:
            return DerivationTrace((DerivationStep('ffd-reflexivity', (), q),))
        final = None
        covered = 0
        for bit in self._bits_of(f.rhs):
            source = self._ffd_source(f.lhs, bit)
            single = builder.add('coalescence',
                                 (self._fmvd_steps(builder, f.lhs, bit), builder.ffd_single(source, bit)),
                                 self.statement(Kind.FFD, f.lhs, bit))
            if final is None:
                final = single
            else:
                widened = builder.add('ffd-augmentation', (single,),
                                      self.statement(Kind.FFD, f.lhs | covered, bit))
                final = builder.add('ffd-transitivity', (final, widened),
                                    self.statement(Kind.FFD, f.lhs, covered | bit))
            covered |= bit
        if builder.steps[final][2] != q:
            final = builder.add('ffd-augmentation', (final,), q)
        return builder.trace(final)

    def _saturation_trace(self, facts: Dict[Fact, Provenance], q: DependencyStatement) -> DerivationTrace:
        """Collect the saturation provenance of ``q`` into a trace ordered by depth."""
        needed: Dict[Fact, Provenance] = {}
        pending = [self.fact(q)]
        while pending:
            f = pending.pop()
            if f not in needed:
                needed[f] = facts[f]
                pending.extend(facts[f].premises)
        ordered = sorted(needed, key=lambda f: (needed[f].depth, f.kind.value, f.lhs, f.rhs))
        steps = []
        for f in ordered:
            provenance = needed[f]
            steps.append(DerivationStep(
                provenance.rule,
                tuple(self.statement(*p) for p in provenance.premises),
                self.statement(*f)))
        last = steps[-1].conclusion if steps else None
        if last != q:
            rule = 'augmentation' if q.kind is Kind.FMVD else 'ffd-augmentation'
            steps.append(DerivationStep(rule, (self.statement(*self.fact(q)),), q))
        return DerivationTrace(tuple(steps))

    def closure_contains(self, q: DependencyStatement, max_depth: Optional[int] = None) -> ClosureResult:
        """Decide whether ``q`` follows from the dependency set.

        Args:
            q: Query statement over the universe
            max_depth: When given, decide by forward saturation limited to
                that many rounds; otherwise use the dependency basis

        Returns:
            ClosureResult with a derivation trace when derivable

        Raises:
            MalformedQuery: if ``q`` names attributes outside the universe
            UniverseTooLarge: if saturation is requested on a large universe
        """
        f = self.fact(q)
        if max_depth is not None:
            if max_depth < 0:
                raise MalformedQuery(f"max depth {max_depth} is negative")
            saturation = self.saturate(max_depth)
            derivable = f in saturation.facts
            trace = self._saturation_trace(saturation.facts, q) if derivable else None
            method = 'saturation'
        else:
            derivable = self._derivable(f)
            trace = None
            if derivable:
                trace = self._one_step(q) or self._basis_trace(q)
            method = 'basis'
        self.logger.info(f"{self.format(q)}: {'derivable' if derivable else 'not derivable'} ({method}"
                         + (f", {len(trace.steps)} steps)" if trace else ")"))
        return ClosureResult(q, derivable, trace, method, self.ds.universe)

    # -- rule checking -----------------------------------------------------

    def _valid(self, rule: str, ps: Sequence[Fact], c: Fact) -> bool:
        if _ARITY.get(rule) != len(ps):
            return False
        full = self.full
        FMVD, FFD = Kind.FMVD, Kind.FFD
        if rule == 'given':
            return c in self._given
        if rule == 'reflexivity':
            return c.kind is FMVD and c.rhs == 0
        if rule == 'ffd-reflexivity':
            return c.kind is FFD and c.rhs == 0
        if len(ps) == 1:
            p = ps[0]
            if rule == 'complementation':
                return (p.kind is FMVD and c.kind is FMVD and c.lhs == p.lhs
                        and c.rhs == full & ~p.lhs & ~p.rhs)
            if rule == 'replication':
                return p.kind is FFD and c.kind is FMVD and (c.lhs, c.rhs) == (p.lhs, p.rhs)
            kind = FMVD if rule == 'augmentation' else FFD
            return (p.kind is kind and c.kind is kind and p.lhs & ~c.lhs == 0
                    and c.rhs == p.rhs & ~c.lhs)
        p, s = ps
        if rule == 'coalescence':
            return (p.kind is FMVD and s.kind is FFD and c.kind is FFD and c.lhs == p.lhs
                    and s.rhs & ~p.rhs == 0 and s.lhs & p.rhs == 0 and c.rhs == s.rhs)
        kind = FFD if rule == 'ffd-transitivity' else FMVD
        if not (p.kind is kind and s.kind is kind and c.kind is kind):
            return False
        if rule in ('additivity', 'projectivity'):
            if not (p.lhs == s.lhs == c.lhs):
                return False
            if rule == 'additivity':
                return c.rhs == p.rhs | s.rhs
            return c.rhs in (p.rhs & s.rhs, p.rhs & ~s.rhs, s.rhs & ~p.rhs)
        if rule == 'pseudo-transitivity':
            return (p.rhs & ~s.lhs == 0 and p.lhs & ~c.lhs == 0 and c.lhs & ~(p.lhs | s.lhs) == 0
                    and (s.lhs & ~p.rhs) & ~c.lhs == 0 and c.rhs == s.rhs & ~c.lhs)
        # transitivity and ffd-transitivity: Y <= V <= Y u X
        if not (c.lhs == p.lhs and p.rhs & ~s.lhs == 0 and s.lhs & ~(p.rhs | p.lhs) == 0):
            return False
        if rule == 'transitivity':
            return c.rhs == s.rhs & ~p.lhs
        low = s.rhs & ~p.lhs
        high = (s.rhs | p.rhs) & ~p.lhs
        return low & ~c.rhs == 0 and c.rhs & ~high == 0

    def verify_trace(self, trace: DerivationTrace, query: Optional[DependencyStatement] = None) -> bool:
        """Check every step of ``trace`` against its rule.

        Premises must be given statements or earlier conclusions; statements
        are compared after normalization. With ``query``, the last conclusion
        must equal it.
        """
        known = set(self._given)
        for position, step in enumerate(trace.steps):
            try:
                premises = [self.fact(p) for p in step.premises]
                conclusion = self.fact(step.conclusion)
            except MalformedQuery:
                return False
            if any(p not in known for p in premises) or not self._valid(step.rule, premises, conclusion):
                self.logger.debug(f"step {position} ({step.rule}) does not check")
                return False
            known.add(conclusion)
        if query is not None:
            return bool(trace.steps) and trace.steps[-1].conclusion == query
        return True

    # -- saturation ----------------------------------------------------------

    def _produce_complementation(self, f: Fact):
        if f.kind is Kind.FMVD:
            yield (f,), Fact(Kind.FMVD, f.lhs, self.full & ~f.lhs & ~f.rhs)

    def _augmented(self, f: Fact, kind: Kind):
        if f.kind is kind:
            for lhs in _between(f.lhs, self.full):
                yield (f,), Fact(kind, lhs, f.rhs & ~lhs)

    def _produce_augmentation(self, f: Fact):
        return self._augmented(f, Kind.FMVD)

    def _produce_ffd_augmentation(self, f: Fact):
        return self._augmented(f, Kind.FFD)

    def _produce_replication(self, f: Fact):
        if f.kind is Kind.FFD:
            yield (f,), Fact(Kind.FMVD, f.lhs, f.rhs)

    def _produce_additivity(self, f: Fact, g: Fact):
        if f.kind is g.kind is Kind.FMVD and f.lhs == g.lhs:
            yield (f, g), Fact(Kind.FMVD, f.lhs, f.rhs | g.rhs)

    def _produce_projectivity(self, f: Fact, g: Fact):
        if f.kind is g.kind is Kind.FMVD and f.lhs == g.lhs:
            for rhs in (f.rhs & g.rhs, f.rhs & ~g.rhs, g.rhs & ~f.rhs):
                yield (f, g), Fact(Kind.FMVD, f.lhs, rhs)

    def _chains(self, f: Fact, g: Fact, kind: Kind) -> bool:
        return (f.kind is g.kind is kind and f.rhs & ~g.lhs == 0
                and g.lhs & ~(f.rhs | f.lhs) == 0)

    def _produce_transitivity(self, f: Fact, g: Fact):
        if self._chains(f, g, Kind.FMVD):
            yield (f, g), Fact(Kind.FMVD, f.lhs, g.rhs & ~f.lhs)

    def _produce_pseudo_transitivity(self, f: Fact, g: Fact):
        if f.kind is g.kind is Kind.FMVD and f.rhs & ~g.lhs == 0:
            for lhs in _between(f.lhs | (g.lhs & ~f.rhs), f.lhs | g.lhs):
                yield (f, g), Fact(Kind.FMVD, lhs, g.rhs & ~lhs)

    def _produce_coalescence(self, f: Fact, g: Fact):
        if (f.kind is Kind.FMVD and g.kind is Kind.FFD
                and g.rhs & ~f.rhs == 0 and g.lhs & f.rhs == 0):
            yield (f, g), Fact(Kind.FFD, f.lhs, g.rhs)

    def _produce_ffd_transitivity(self, f: Fact, g: Fact):
        if self._chains(f, g, Kind.FFD):
            for rhs in _between(g.rhs & ~f.lhs, (g.rhs | f.rhs) & ~f.lhs):
                yield (f, g), Fact(Kind.FFD, f.lhs, rhs)

    def saturate(self, max_depth: Optional[int] = None,
                 rule_order: Optional[Sequence[str]] = None) -> SaturationResult:
        """Forward saturation over normalized facts.

        Round 0 holds the given statements and the reflexive facts ``L ->> {}``
        and ``L -> {}`` for every non-empty L. Each round applies every rule
        to pairs involving at least one fact new in the previous round.

        Args:
            max_depth: Number of rounds to run, or None for the fixpoint
            rule_order: Order in which rules are applied within a round

        Raises:
            UniverseTooLarge: above Config.SATURATION_MAX_ATTRIBUTES attributes
        """
        size = len(self.ds.universe)
        if size > Config.SATURATION_MAX_ATTRIBUTES:
            raise UniverseTooLarge(size, Config.SATURATION_MAX_ATTRIBUTES)
        order = tuple(rule_order) if rule_order is not None else SATURATION_RULES
        unknown = set(order) - set(SATURATION_RULES)
        if unknown:
            raise MalformedQuery(f"unknown saturation rules: {sorted(unknown)}")

        facts: Dict[Fact, Provenance] = {}
        for f in self._given:
            facts[f] = Provenance('given', (), 0)
        for lhs in range(1, self.full + 1):
            facts.setdefault(Fact(Kind.FMVD, lhs, 0), Provenance('reflexivity', (), 0))
            facts.setdefault(Fact(Kind.FFD, lhs, 0), Provenance('ffd-reflexivity', (), 0))

        delta = list(facts)
        rounds = 0
        while delta and (max_depth is None or rounds < max_depth):
            rounds += 1
            fresh: Dict[Fact, Provenance] = {}
            known = list(facts)
            for rule in order:
                producer = self._producers[rule]
                binary = _ARITY[rule] == 2
                for f in delta:
                    if binary:
                        results = (r for g in known for pair in ((f, g), (g, f)) for r in producer(*pair))
                    else:
                        results = producer(f)
                    for premises, conclusion in results:
                        if conclusion.lhs and conclusion not in facts and conclusion not in fresh:
                            fresh[conclusion] = Provenance(rule, premises, rounds)
            facts.update(fresh)
            delta = list(fresh)
            self.logger.debug(f"saturation round {rounds}: {len(fresh)} new facts")
        self.logger.info(f"Saturation stopped after {rounds} rounds with {len(facts)} facts"
                         + (" (fixpoint)" if not delta else ""))
        return SaturationResult(facts, rounds, not delta)

    def saturated_statements(self, result: SaturationResult) -> FrozenSet[DependencyStatement]:
        return frozenset(self.statement(*f) for f in result.facts)


def closure_contains(ds: DependencySet, q: DependencyStatement,
                     max_depth: Optional[int] = None) -> ClosureResult:
    return InferenceEngine(ds).closure_contains(q, max_depth)


def dependency_basis(ds: DependencySet, x: Iterable[str]) -> List[FrozenSet[str]]:
    return InferenceEngine(ds).dependency_basis(x)


def saturate(ds: DependencySet, max_depth: Optional[int] = None,
             rule_order: Optional[Sequence[str]] = None) -> SaturationResult:
    return InferenceEngine(ds).saturate(max_depth, rule_order)


def verify_trace(ds: DependencySet, trace: DerivationTrace,
                 query: Optional[DependencyStatement] = None) -> bool:
    return InferenceEngine(ds).verify_trace(trace, query)


# ---------------------------------------------------------------------------
# Text forms
# ---------------------------------------------------------------------------

_STATEMENT = re.compile(r'^\s*(?P<lhs>.*?)\s*(?P<arrow>->>|->)\s*(?P<rhs>.*?)\s*$')


def parse_attribute_list(text: str, universe: Sequence[str]) -> FrozenSet[str]:
    """``A,B`` or ``{A,B}`` or ``{}``; every name must be in ``universe``."""
    body = text.strip()
    if body.startswith('{') and body.endswith('}'):
        body = body[1:-1]
    names = [name.strip() for name in body.split(',') if name.strip()]
    unknown = [name for name in names if name not in universe]
    if unknown:
        raise MalformedQuery(f"unknown attributes {unknown} in {text!r}")
    return frozenset(names)


def parse_statement(text: str, universe: Sequence[str]) -> DependencyStatement:
    """Read ``A,B ->> C`` (FMVD) or ``A -> B`` (FFD)."""
    match = _STATEMENT.match(text)
    if not match:
        raise MalformedQuery(f"expected 'X -> Y' or 'X ->> Y', got {text!r}")
    kind = Kind.FMVD if match.group('arrow') == '->>' else Kind.FFD
    lhs = parse_attribute_list(match.group('lhs'), universe)
    rhs = parse_attribute_list(match.group('rhs'), universe)
    return DependencyStatement(kind, lhs, rhs)


def parse_dependency_document(document) -> DependencySet:
    """Read a dependency document::

        {"universe": ["A", "B", "C"],
         "ffds": [{"lhs": ["A"], "rhs": ["B"]}],
         "fmvds": [{"lhs": ["A"], "rhs": ["B"]}]}
    """
    text, data = load_json_document(document)
    if not isinstance(data, dict) or not isinstance(data.get('universe'), list):
        raise DocumentSyntaxError(1, 1, "expected an object with a 'universe' list")
    universe = data['universe']
    if not all(isinstance(name, str) and name for name in universe):
        raise DocumentSyntaxError(*key_position(text, 'universe'), "universe entries must be non-empty strings")
    if len(universe) > MAX_UNIVERSE:
        raise UniverseTooLarge(len(universe), MAX_UNIVERSE)

    def statements(key: str, kind: Kind) -> List[DependencyStatement]:
        entries = data.get(key, [])
        if not isinstance(entries, list):
            raise DocumentSyntaxError(*key_position(text, key), f"'{key}' must be a list")
        result = []
        for entry in entries:
            if (not isinstance(entry, dict) or not isinstance(entry.get('lhs'), list)
                    or not isinstance(entry.get('rhs'), list)):
                raise DocumentSyntaxError(*key_position(text, key), f"'{key}' entries need lhs and rhs lists")
            result.append(DependencyStatement(kind, frozenset(entry['lhs']), frozenset(entry['rhs'])))
        return result

    ds = DependencySet(tuple(universe), tuple(statements('ffds', Kind.FFD)),
                       tuple(statements('fmvds', Kind.FMVD)))
    logger.debug(f"Parsed {len(ds.ffds)} FFDs and {len(ds.fmvds)} FMVDs over {len(ds.universe)} attributes")
    return ds


def load_dependency_set(path: str) -> DependencySet:
    with open(path, 'rb') as f:
        ds = parse_dependency_document(f.read())
    logger.info(f"Loaded dependency set {path}: {len(ds.ffds)} FFDs, {len(ds.fmvds)} FMVDs")
    return ds
