#!/usr/bin/env python3
"""
Tests for schemas, relation documents and projection
"""

import os
import random
import sys

import pytest

# Add current directory to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from sample_data import crisp_relation, make_relation, random_mixed_relation, sample_path, shared_key_relation
from utils.errors import DocumentSyntaxError, DomainViolation, DuplicateAttribute, InvalidDomain, UnknownAttribute
from utils.interval_core import ConfidenceInterval, Crisp, Interval, Null, Trapezoid, to_interval
from utils.relation import (Attribute, Schema, complement_set, load_relation, parse_relation, project,
                            serialize_relation)


def document(cells, domain='{"lower": 0, "upper": 10}', extra=''):
    rows = ', '.join('[' + ', '.join(f'"{c}"' for c in row) + ']' for row in cells)
    width = len(cells[0]) if cells else 1
    attributes = ', '.join(f'{{"name": "{chr(65 + k)}", "domain": {domain}{extra}}}' for k in range(width))
    return f'{{"attributes": [{attributes}],\n "tuples": [{rows}]}}'


def test_load_sample_relation():
    r = load_relation(sample_path('shared_key.json'))
    assert r.schema.names == ('X', 'Y', 'Z')
    assert len(r) == 2
    assert r.value(0, 'X') == Crisp(5)
    assert r.value(1, 'Z') == ConfidenceInterval(Interval(1, 8))
    assert r.schema.domain('Z').theta == 100
    assert r == shared_key_relation()


def test_cell_shapes_in_documents():
    r = parse_relation(document([['3.6'], ['[1,9]/0.8'], ['tz(1,2,3,4)'], ['null']]))
    assert r.tuples[0][0] == Crisp(3.6)
    assert r.tuples[1][0] == ConfidenceInterval(Interval(1, 9), 0.8)
    assert r.tuples[2][0] == Trapezoid(1, 2, 3, 4)
    assert r.tuples[3][0] == Null()
    assert to_interval(r.tuples[3][0], r.schema.domain('A')) == Interval(0, 10)


def test_bad_cell_reports_document_position():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_relation(document([['[9,1]']]))
    assert (info.value.line, info.value.col) == (2, 15)


def test_structural_errors():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_relation('{"attributes": [\n  {"name": "A"')
    assert info.value.line == 2

    with pytest.raises(DocumentSyntaxError):
        parse_relation('[]')
    with pytest.raises(DocumentSyntaxError):
        parse_relation(document([['1', '2']]).replace('"name": "B"', '"nam": "B"'))
    with pytest.raises(DocumentSyntaxError):
        parse_relation('{"attributes": [{"name": "A", "domain": {"lower": 0, "upper": 10}}], "tuples": [["1", "2"]]}')
    with pytest.raises(DocumentSyntaxError):
        parse_relation('{"attributes": [{"name": "A", "domain": {"lower": 0, "upper": 10}}], "tuples": [[1]]}')
    with pytest.raises(DocumentSyntaxError):
        parse_relation(b'\xff\xfe')


def test_schema_and_domain_errors():
    with pytest.raises(DuplicateAttribute):
        parse_relation('{"attributes": [{"name": "A", "domain": {"lower": 0, "upper": 10}},'
                       ' {"name": "A", "domain": {"lower": 0, "upper": 10}}], "tuples": []}')
    with pytest.raises(InvalidDomain):
        parse_relation(document([['1']], domain='{"lower": -1, "upper": 10}'))
    with pytest.raises(InvalidDomain):
        parse_relation(document([['1']], domain='{"lower": 0, "upper": Infinity}'))
    with pytest.raises(InvalidDomain):
        parse_relation(document([['1']], extra=', "theta": Infinity'))
    with pytest.raises(DomainViolation) as info:
        parse_relation(document([['1'], ['11']]))
    assert info.value.attribute == 'A'
    assert info.value.tuple_index == 1


def test_serialize_reads_back():
    rng = random.Random(7)
    for _ in range(50):
        r = random_mixed_relation(rng)
        assert parse_relation(serialize_relation(r)) == r
        assert parse_relation(serialize_relation(r).encode('utf-8')) == r

    odd = make_relation('AB', [('0.30000000000000004', 'null'), ('[1,9]/0.8', 'tz(1,2,3.5,4)')])
    assert parse_relation(serialize_relation(odd)) == odd
    assert '"epsilon"' not in serialize_relation(odd)

    overridden = parse_relation(document([['1']], extra=', "theta": 20, "epsilon": 0.5'))
    text = serialize_relation(overridden)
    assert '"epsilon": 0.5' in text
    assert parse_relation(text) == overridden


def test_project():
    r = shared_key_relation()
    xy = project(r, {'X', 'Y'})
    assert xy.schema.names == ('X', 'Y')
    assert xy.tuples == ((Crisp(5), Crisp(7)),)

    duplicated = crisp_relation('AB', [(1, 2), (1, 2), (3, 4)])
    assert project(duplicated, {'A', 'B'}).tuples == duplicated.tuples[1:]
    assert len(project(crisp_relation('AB', [(1, 2), (3, 2)]), {'A'})) == 2

    with pytest.raises(UnknownAttribute):
        project(r, {'W'})


def test_project_composes():
    rng = random.Random(3)
    for _ in range(100):
        r = random_mixed_relation(rng, max_attributes=4, min_attributes=3)
        outer = set(r.schema.names[:3])
        inner = set(r.schema.names[1:3])
        assert project(project(r, outer), inner) == project(r, inner)
        assert len(project(r, outer)) <= len(r)


def test_projection_keeps_schema_order():
    r = make_relation('ABC', [('1', '2', '3')])
    assert project(r, ['C', 'A']).schema.names == ('A', 'C')
    assert r.columns(['C', 'A']).schema.names == ('C', 'A')
    assert r.columns(['C', 'A']).tuples == ((Crisp(3), Crisp(1)),)


def test_complement_set():
    domain = make_relation('A', [('1',)]).schema.domain('A')
    schema = Schema(tuple(Attribute(name, domain) for name in 'ABCD'))
    assert complement_set(schema, {'A'}, {'B'}) == {'C', 'D'}
    assert complement_set(schema, {'A'}, {'B', 'C', 'D'}) == frozenset()
    assert complement_set(schema, set(), set()) == set('ABCD')
    with pytest.raises(UnknownAttribute):
        complement_set(schema, {'E'}, set())


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
