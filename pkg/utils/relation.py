"""Schemas, fuzzy relations and their JSON documents.

Relation document::

    {"attributes": [{"name": "Z", "domain": {"lower": 0, "upper": 100}, "theta": 100}],
     "tuples": [["3.6"], ["[1,9]/0.8"], ["tz(1,2,3,4)"], ["null"]]}
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

from utils.errors import (CellSyntaxError, DocumentSyntaxError, DomainViolation, DuplicateAttribute,
                          InvalidDomain, UnknownAttribute)
from utils.interval_core import AttributeDomain, FuzzyValue, format_cell, parse_cell, within_domain

logger = logging.getLogger(__name__)

AttributeSet = FrozenSet[str]
Row = Tuple[FuzzyValue, ...]


@dataclass(frozen=True)
class Attribute:
    name: str
    domain: AttributeDomain


@dataclass(frozen=True)
class Schema:
    """Ordered attributes of a relation with unique names."""

    attributes: Tuple[Attribute, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'attributes', tuple(self.attributes))
        index = {}
        for position, attribute in enumerate(self.attributes):
            if not attribute.name:
                raise InvalidDomain("attribute names must be non-empty")
            if attribute.name in index:
                raise DuplicateAttribute(attribute.name)
            index[attribute.name] = position
        object.__setattr__(self, '_index', index)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(attribute.name for attribute in self.attributes)

    def __len__(self) -> int:
        return len(self.attributes)

    def __iter__(self) -> Iterator[Attribute]:
        return iter(self.attributes)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAttribute(name)

    def domain(self, name: str) -> AttributeDomain:
        return self.attributes[self.index_of(name)].domain

    def attribute_set(self, names: Iterable[str]) -> AttributeSet:
        """Resolve names against the schema."""
        resolved = frozenset(names)
        for name in resolved:
            self.index_of(name)
        return resolved

    def ordered(self, names: Iterable[str]) -> List[str]:
        """Names of ``names`` in schema order."""
        wanted = self.attribute_set(names)
        return [name for name in self.names if name in wanted]

    def restrict(self, names: Sequence[str]) -> 'Schema':
        return Schema(tuple(self.attributes[self.index_of(name)] for name in names))


@dataclass(frozen=True)
class Relation:
    """A schema plus ordered tuples of cells, validated against the domains."""

    schema: Schema
    tuples: Tuple[Row, ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.tuples)
        object.__setattr__(self, 'tuples', rows)
        for position, row in enumerate(rows):
            if len(row) != len(self.schema):
                raise DomainViolation(
                    '*', position, f"tuple has {len(row)} cells, schema has {len(self.schema)}")
            for attribute, value in zip(self.schema, row):
                if not within_domain(value, attribute.domain):
                    raise DomainViolation(
                        attribute.name, position,
                        f"{format_cell(value)} outside [{attribute.domain.lower}, {attribute.domain.upper}]")

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.tuples)

    def value(self, index: int, name: str) -> FuzzyValue:
        return self.tuples[index][self.schema.index_of(name)]

    def columns(self, names: Sequence[str]) -> 'Relation':
        """Restrict and re-order columns, keeping every tuple."""
        positions = [self.schema.index_of(name) for name in names]
        return Relation(self.schema.restrict(names),
                        tuple(tuple(row[p] for p in positions) for row in self.tuples))


def project(r: Relation, attrs: Iterable[str]) -> Relation:
    """Projection onto ``attrs`` (schema order), dropping exact duplicate tuples.

    The first occurrence of each distinct tuple keeps its place.
    """
    names = r.schema.ordered(attrs)
    narrowed = r.columns(names)
    seen = set()
    rows = []
    for row in narrowed.tuples:
        if row not in seen:
            seen.add(row)
            rows.append(row)
    return Relation(narrowed.schema, tuple(rows))


def complement_set(schema: Schema, x: Iterable[str], y: Iterable[str]) -> AttributeSet:
    """U - (X u Y) over the schema's attributes."""
    return frozenset(schema.names) - (schema.attribute_set(x) | schema.attribute_set(y))


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count('\n', 0, offset) + 1
    col = offset - (text.rfind('\n', 0, offset) + 1) + 1
    return line, col


def key_position(text: str, key: str) -> Tuple[int, int]:
    offset = text.find(json.dumps(key))
    return _position(text, offset) if offset >= 0 else (1, 1)


def load_json_document(document: Union[str, bytes]) -> Tuple[str, object]:
    """Decode a UTF-8 JSON document, mapping failures to DocumentSyntaxError."""
    if isinstance(document, bytes):
        try:
            document = document.decode('utf-8')
        except UnicodeDecodeError as e:
            raise DocumentSyntaxError(1, e.start + 1, "document is not valid UTF-8")
    try:
        return document, json.loads(document)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.lineno, e.colno, e.msg)


def _parse_domain(text: str, entry: Dict) -> AttributeDomain:
    name = entry.get('name')
    domain = entry.get('domain')
    if not isinstance(domain, dict) or 'lower' not in domain or 'upper' not in domain:
        raise DocumentSyntaxError(*key_position(text, name or 'attributes'),
                                  f"attribute {name!r} needs a domain with lower and upper")
    values = [domain['lower'], domain['upper'], entry.get('theta'), entry.get('epsilon')]
    if not all(v is None or (isinstance(v, (int, float)) and not isinstance(v, bool)) for v in values):
        raise DocumentSyntaxError(*key_position(text, name), f"attribute {name!r} has non-numeric bounds")
    try:
        return AttributeDomain(float(values[0]), float(values[1]),
                               theta=None if values[2] is None else float(values[2]),
                               epsilon=None if values[3] is None else float(values[3]))
    except InvalidDomain as e:
        raise InvalidDomain(f"attribute {name!r}: {e}")


def parse_relation(document: Union[str, bytes]) -> Relation:
    """Read a relation document.

    Args:
        document: JSON text or UTF-8 bytes

    Returns:
        A validated Relation

    Raises:
        DocumentSyntaxError: malformed JSON, structure or cell, with line and column
        DomainViolation: a cell outside its attribute domain
        DuplicateAttribute: two attributes with one name
        InvalidDomain: negative or empty domain bounds
    """
    text, data = load_json_document(document)
    if not isinstance(data, dict) or not isinstance(data.get('attributes'), list):
        raise DocumentSyntaxError(1, 1, "expected an object with an 'attributes' list")
    if not isinstance(data.get('tuples'), list):
        raise DocumentSyntaxError(*key_position(text, 'tuples'), "expected a 'tuples' list")

    attributes = []
    for entry in data['attributes']:
        if not isinstance(entry, dict) or not isinstance(entry.get('name'), str):
            raise DocumentSyntaxError(*key_position(text, 'attributes'), "attribute entries need a string name")
        attributes.append(Attribute(entry['name'], _parse_domain(text, entry)))
    schema = Schema(tuple(attributes))

    # Cells are located in document order after the "tuples" key
    cursor = max(text.find('"tuples"'), 0)
    rows = []
    for position, raw_row in enumerate(data['tuples']):
        if not isinstance(raw_row, list) or len(raw_row) != len(schema):
            line, col = _position(text, cursor)
            raise DocumentSyntaxError(line, col, f"tuple {position} must list {len(schema)} cells")
        row = []
        for raw in raw_row:
            if not isinstance(raw, str):
                line, col = _position(text, cursor)
                raise DocumentSyntaxError(line, col, f"tuple {position}: cells must be strings")
            found = text.find(json.dumps(raw), cursor)
            if found >= 0:
                cursor = found + len(json.dumps(raw))
            try:
                row.append(parse_cell(raw))
            except CellSyntaxError as e:
                line, col = _position(text, found + 1 if found >= 0 else cursor)
                raise DocumentSyntaxError(line, col + e.column - 1, str(e))
        rows.append(tuple(row))

    relation = Relation(schema, tuple(rows))
    logger.debug(f"Parsed relation with {len(schema)} attributes and {len(relation)} tuples")
    return relation


def relation_to_dict(r: Relation) -> Dict:
    attributes = []
    for attribute in r.schema:
        entry = {
            'name': attribute.name,
            'domain': {'lower': attribute.domain.lower, 'upper': attribute.domain.upper},
            'theta': attribute.domain.theta,
        }
        if attribute.domain.epsilon_overridden:
            entry['epsilon'] = attribute.domain.epsilon
        attributes.append(entry)
    return {
        'attributes': attributes,
        'tuples': [[format_cell(value) for value in row] for row in r.tuples],
    }


def serialize_relation(r: Relation) -> str:
    return json.dumps(relation_to_dict(r), indent=2, sort_keys=True)


def load_relation(path: str) -> Relation:
    """Read and parse a relation file."""
    with open(path, 'rb') as f:
        relation = parse_relation(f.read())
    logger.info(f"Loaded relation {path}: {len(relation.schema)} attributes, {len(relation)} tuples")
    return relation
