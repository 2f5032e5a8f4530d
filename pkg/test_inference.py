#!/usr/bin/env python3
"""
Tests for dependency inference: closure membership, dependency bases,
saturation and derivation traces
"""

import os
import random
import sys

import pytest

# Add current directory to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import Config
from sample_data import all_subsets, attribute_names, random_dependency_set, random_mixed_relation, sample_path
from utils.dependency import DependencyChecker, DependencyStatement, Kind
from utils.errors import DocumentSyntaxError, DuplicateAttribute, MalformedQuery, UniverseTooLarge
from utils.inference import (SATURATION_RULES, DependencySet, DerivationStep, DerivationTrace, InferenceEngine,
                             closure_contains, dependency_basis, load_dependency_set, normalize,
                             parse_dependency_document, parse_statement, saturate, verify_trace)
from utils.proximity import Form, Measure, ProximityConfig

FMVD = DependencyStatement.fmvd
FFD = DependencyStatement.ffd
EXTENDED = ProximityConfig(Measure.EXTENDED, Form.RATIO)


def deps(universe, ffds=(), fmvds=()):
    return DependencySet(tuple(universe), tuple(FFD(*d) for d in ffds), tuple(FMVD(*d) for d in fmvds))


def all_queries(universe):
    """Every normalized FFD and FMVD with a non-empty left-hand side."""
    for lhs in all_subsets(universe, nonempty=True):
        for rhs in all_subsets([n for n in universe if n not in lhs]):
            yield FMVD(lhs, rhs)
            yield FFD(lhs, rhs)


def test_normalize():
    assert normalize(FMVD('A', 'AB')) == FMVD('A', 'B')
    trivial = normalize(FMVD('A', 'A'))
    assert trivial.rhs == frozenset()
    assert trivial.is_trivial
    assert normalize(FMVD('A', 'B')) == FMVD('A', 'B')
    assert normalize(FFD('AB', 'BC')) == FFD('AB', 'C')


def test_complementation_example():
    ds = deps('ABCD', fmvds=[('A', 'B')])
    result = closure_contains(ds, FMVD('A', 'CD'))
    assert result.derivable
    assert result.method == 'basis'
    assert [step.rule for step in result.trace.steps] == ['given', 'complementation']
    assert verify_trace(ds, result.trace, FMVD('A', 'CD'))


def test_transitivity_example():
    ds = load_dependency_set(sample_path('deps_chain.json'))
    result = closure_contains(ds, FMVD('A', 'C'))
    assert result.derivable
    assert result.trace.steps[-1].rule == 'transitivity'
    assert result.trace.conclusion == FMVD('A', 'C')
    assert verify_trace(ds, result.trace, FMVD('A', 'C'))
    assert result.to_dict()['trace'] == [
        {'rule': 'given', 'premises': [], 'conclusion': 'A ->> B'},
        {'rule': 'given', 'premises': [], 'conclusion': 'B ->> C'},
        {'rule': 'transitivity', 'premises': ['A ->> B', 'B ->> C'], 'conclusion': 'A ->> C'},
    ]


def test_replication_example():
    ds = deps('ABC', ffds=[('A', 'B')])
    result = closure_contains(ds, FMVD('A', 'B'))
    assert result.derivable
    assert result.trace.steps[-1].rule == 'replication'


def test_non_derivable_example():
    ds = deps('ABC', fmvds=[('A', 'B')])
    result = closure_contains(ds, FMVD('B', 'A'))
    assert not result.derivable
    assert result.trace is None
    assert result.to_dict()['derivable'] is False


def test_basis_examples():
    assert dependency_basis(deps('ABCD', fmvds=[('A', 'B')]), {'A'}) == [{'B'}, {'C', 'D'}]
    assert dependency_basis(deps('ABC'), {'A'}) == [{'B', 'C'}]
    assert dependency_basis(deps('ABCD', fmvds=[('A', 'B'), ('A', 'C')]), {'A'}) == [{'B'}, {'C'}, {'D'}]
    assert dependency_basis(deps('ABC', ffds=[('A', 'BC')]), 'A') == [{'B'}, {'C'}]


def test_basis_is_a_partition():
    rng = random.Random(17)
    for _ in range(100):
        universe = attribute_names(rng.randint(2, 6))
        engine = InferenceEngine(random_dependency_set(rng, universe))
        x = rng.choice(all_subsets(universe, nonempty=True))
        blocks = engine.dependency_basis(x)
        assert all(blocks)
        union = frozenset().union(*blocks)
        assert union == frozenset(universe) - x
        assert sum(len(b) for b in blocks) == len(union)


def test_queries_agree_with_their_normal_form():
    rng = random.Random(23)
    for _ in range(100):
        universe = attribute_names(rng.randint(2, 5))
        ds = random_dependency_set(rng, universe)
        engine = InferenceEngine(ds)
        normalized = DependencySet(ds.universe, tuple(normalize(d) for d in ds.ffds),
                                   tuple(normalize(d) for d in ds.fmvds))
        x = rng.choice(all_subsets(universe, nonempty=True))
        assert engine.dependency_basis(x) == dependency_basis(normalized, x)
        for _ in range(5):
            q = DependencyStatement(rng.choice(list(Kind)), x, rng.choice(all_subsets(universe)))
            assert engine.closure_contains(q).derivable == engine.closure_contains(normalize(q)).derivable


def test_membership_matches_basis_and_traces_check():
    rng = random.Random(31)
    for _ in range(100):
        universe = attribute_names(rng.randint(2, 6))
        engine = InferenceEngine(random_dependency_set(rng, universe, max_statements=4))
        x = rng.choice(all_subsets(universe, nonempty=True))
        blocks = engine.dependency_basis(x)
        for w in all_subsets(universe):
            q = FMVD(x, w)
            result = engine.closure_contains(q)
            expected = all(not (b & w) or b <= w for b in blocks)
            assert result.derivable == expected, engine.format(q)
            if result.derivable:
                assert engine.verify_trace(result.trace, q), engine.format(q)
            f = FFD(x, w)
            ffd_result = engine.closure_contains(f)
            if ffd_result.derivable:
                assert engine.verify_trace(ffd_result.trace, f), engine.format(f)


def test_saturation_agrees_with_basis():
    rng = random.Random(37)
    for _ in range(20):
        universe = attribute_names(rng.randint(2, 4))
        engine = InferenceEngine(random_dependency_set(rng, universe))
        result = engine.saturate()
        assert result.fixpoint
        derived = engine.saturated_statements(result)
        for q in all_queries(universe):
            assert (q in derived) == engine.closure_contains(q).derivable, engine.format(q)


def test_saturation_is_confluent():
    rng = random.Random(41)
    for _ in range(5):
        universe = attribute_names(rng.randint(2, 4))
        ds = random_dependency_set(rng, universe)
        forward = saturate(ds)
        backward = saturate(ds, rule_order=tuple(reversed(SATURATION_RULES)))
        assert set(forward.facts) == set(backward.facts)


def test_bounded_saturation_traces():
    ds = load_dependency_set(sample_path('deps_chain.json'))
    engine = InferenceEngine(ds)
    assert not engine.closure_contains(FMVD('A', 'C'), max_depth=0).derivable
    result = engine.closure_contains(FMVD('A', 'AC'), max_depth=2)
    assert result.derivable
    assert result.method == 'saturation'
    assert engine.verify_trace(result.trace, FMVD('A', 'AC'))

    rng = random.Random(43)
    for _ in range(10):
        universe = attribute_names(3)
        engine = InferenceEngine(random_dependency_set(rng, universe))
        for q in all_queries(universe):
            bounded = engine.closure_contains(q, max_depth=2)
            if bounded.derivable:
                assert engine.closure_contains(q).derivable
                assert engine.verify_trace(bounded.trace, q), engine.format(q)


def satisfying_models(rng, ds, count=20, attempts=100):
    models = []
    for _ in range(attempts):
        r = random_mixed_relation(rng, names=ds.universe)
        checker = DependencyChecker(r, EXTENDED, max_workers=1)
        if all(checker.check(d).holds for d in ds.statements):
            models.append(checker)
            if len(models) == count:
                break
    return models


def test_derivable_statements_hold_on_models():
    rng = random.Random(47)
    checked = 0
    for _ in range(200):
        universe = attribute_names(rng.randint(2, 4))
        engine = InferenceEngine(random_dependency_set(rng, universe))
        derivable = [q for q in all_queries(universe) if engine.closure_contains(q).derivable]
        sample = rng.sample(derivable, min(20, len(derivable)))
        for checker in satisfying_models(rng, engine.ds):
            for q in sample:
                assert checker.check(q).holds, engine.format(q)
                checked += 1
    assert checked > 1000


def test_saturated_statements_hold_on_models():
    rng = random.Random(53)
    for _ in range(10):
        universe = attribute_names(3)
        engine = InferenceEngine(random_dependency_set(rng, universe))
        derived = engine.saturated_statements(engine.saturate(max_depth=4))
        for checker in satisfying_models(rng, engine.ds, count=5):
            for q in derived:
                assert checker.check(q).holds, engine.format(q)


def test_verify_trace_rejects_bad_steps():
    ds = deps('ABCD', fmvds=[('A', 'B'), ('B', 'C')])
    forged = DerivationTrace((DerivationStep('transitivity', (FMVD('A', 'B'), FMVD('B', 'C')), FMVD('A', 'D')),))
    assert not verify_trace(ds, forged)
    unsupported = DerivationTrace((DerivationStep('complementation', (FMVD('C', 'D'),), FMVD('C', 'AB')),))
    assert not verify_trace(ds, unsupported)
    good = closure_contains(ds, FMVD('A', 'C')).trace
    assert verify_trace(ds, good)
    assert not verify_trace(ds, good, FMVD('A', 'D'))


def test_limits_and_bad_queries():
    wide = DependencySet(tuple(f'A{k}' for k in range(31)))
    with pytest.raises(UniverseTooLarge):
        InferenceEngine(wide)
    too_wide = deps(attribute_names(Config.SATURATION_MAX_ATTRIBUTES + 1))
    with pytest.raises(UniverseTooLarge):
        saturate(too_wide)

    ds = deps('ABC', fmvds=[('A', 'B')])
    with pytest.raises(MalformedQuery):
        closure_contains(ds, FMVD('A', 'E'))
    with pytest.raises(MalformedQuery):
        closure_contains(ds, FMVD('A', 'B'), max_depth=-1)
    with pytest.raises(MalformedQuery):
        saturate(ds, rule_order=['given'])


def test_dependency_set_validation():
    with pytest.raises(DuplicateAttribute):
        DependencySet(('A', 'A'))
    with pytest.raises(MalformedQuery):
        DependencySet(('A', 'B'), ffds=(FMVD('A', 'B'),))
    with pytest.raises(MalformedQuery):
        DependencySet(('A', 'B'), fmvds=(FMVD('A', 'C'),))


def test_parse_statements():
    universe = ('A', 'B', 'C')
    assert parse_statement('A,B ->> C', universe) == FMVD('AB', 'C')
    assert parse_statement('{A} -> {}', universe) == FFD('A', '')
    assert parse_statement(' A->B ', universe) == FFD('A', 'B')
    with pytest.raises(MalformedQuery):
        parse_statement('A => B', universe)
    with pytest.raises(MalformedQuery):
        parse_statement('A ->> E', universe)
    with pytest.raises(MalformedQuery):
        parse_statement('-> B', universe)


def test_parse_dependency_documents():
    ds = parse_dependency_document('{"universe": ["A", "B"], "ffds": [{"lhs": ["A"], "rhs": ["B"]}]}')
    assert ds.ffds == (FFD('A', 'B'),)
    assert ds.to_dict() == {'universe': ['A', 'B'], 'ffds': [{'lhs': ['A'], 'rhs': ['B']}], 'fmvds': []}

    for text in ('{"universe": "A"}', '{"universe": ["A"], "fmvds": {}}',
                 '{"universe": ["A"],\n "fmvds": [{"lhs": ["A"]}]}', '{"universe": [""]}', 'nope'):
        with pytest.raises(DocumentSyntaxError):
            parse_dependency_document(text)
    with pytest.raises(UniverseTooLarge):
        parse_dependency_document('{"universe": [%s]}' % ', '.join(f'"A{k}"' for k in range(31)))


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
