"""
Builders, random generators and classical oracles shared by the test scripts
"""

import itertools
import os
import random
from typing import List, Optional, Sequence, Tuple

from utils.dependency import DependencyStatement
from utils.inference import DependencySet
from utils.interval_core import AttributeDomain, ConfidenceInterval, Crisp, Interval, parse_cell
from utils.relation import Attribute, Relation, Schema

SAMPLES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'samples')


def sample_path(name: str) -> str:
    return os.path.join(SAMPLES_DIR, name)


def make_relation(names: Sequence[str], rows: Sequence[Sequence[str]],
                  lower: float = 0, upper: float = 100, theta: Optional[float] = None) -> Relation:
    """Relation over ``names`` sharing one domain, cells given in the cell grammar."""
    domain = AttributeDomain(lower, upper, theta)
    schema = Schema(tuple(Attribute(name, domain) for name in names))
    return Relation(schema, tuple(tuple(parse_cell(cell) for cell in row) for row in rows))


def shared_key_relation() -> Relation:
    """Two tuples agreeing on crisp X and Y, with Z intervals [1,9] and [1,8]."""
    return make_relation('XYZ', [('5', '7', '[1,9]'), ('5', '7', '[1,8]')], theta=100)


def crisp_relation(names: Sequence[str], rows: Sequence[Sequence[float]], upper: float = 10) -> Relation:
    domain = AttributeDomain(0, upper)
    schema = Schema(tuple(Attribute(name, domain) for name in names))
    return Relation(schema, tuple(tuple(Crisp(float(v)) for v in row) for row in rows))


def attribute_names(count: int) -> List[str]:
    return [chr(ord('A') + k) for k in range(count)]


def random_crisp_rows(rng: random.Random, max_tuples: int = 5, max_attributes: int = 4,
                      values: int = 3, min_attributes: int = 2) -> Tuple[List[str], List[Tuple[int, ...]]]:
    width = rng.randint(min_attributes, max_attributes)
    height = rng.randint(1, max_tuples)
    rows = [tuple(rng.randrange(values) for _ in range(width)) for _ in range(height)]
    return attribute_names(width), rows


def random_mixed_relation(rng: random.Random, max_tuples: int = 5, max_attributes: int = 4,
                          min_attributes: int = 2, names: Optional[Sequence[str]] = None) -> Relation:
    """Crisp points and interval numbers on a small integer grid of [0, 10].

    The attributes are ``names`` when given, otherwise a random number of them.
    """
    if names is None:
        names = attribute_names(rng.randint(min_attributes, max_attributes))
    height = rng.randint(1, max_tuples)

    def cell():
        if rng.random() < 0.4:
            return Crisp(float(rng.randint(0, 4)))
        lower = rng.randint(0, 4)
        return ConfidenceInterval(Interval(float(lower), float(lower + rng.randint(0, 3))))

    domain = AttributeDomain(0, 10)
    schema = Schema(tuple(Attribute(name, domain) for name in names))
    return Relation(schema, tuple(tuple(cell() for _ in names) for _ in range(height)))


def all_subsets(names: Sequence[str], nonempty: bool = False) -> List[frozenset]:
    subsets = [frozenset(c) for k in range(len(names) + 1) for c in itertools.combinations(names, k)]
    return [s for s in subsets if s] if nonempty else subsets


def random_dependency_set(rng: random.Random, universe: Sequence[str], max_statements: int = 3,
                          ffd_share: float = 0.3) -> DependencySet:
    ffds, fmvds = [], []
    nonempty = all_subsets(universe, nonempty=True)
    for _ in range(rng.randint(0, max_statements)):
        lhs = rng.choice(nonempty)
        rhs = rng.choice(nonempty)
        if rng.random() < ffd_share:
            ffds.append(DependencyStatement.ffd(lhs, rhs))
        else:
            fmvds.append(DependencyStatement.fmvd(lhs, rhs))
    return DependencySet(tuple(universe), tuple(ffds), tuple(fmvds))


# ---------------------------------------------------------------------------
# Classical oracles (equality semantics, written independently of utils/)
# ---------------------------------------------------------------------------

def classical_mvd_holds(names: Sequence[str], rows: Sequence[Sequence], lhs, rhs) -> bool:
    """Brute-force MVD check: every pair agreeing on X has a tuple mixing t1's Y with t2's Z."""
    x = [k for k, n in enumerate(names) if n in lhs]
    y = [k for k, n in enumerate(names) if n in rhs and n not in lhs]
    z = [k for k, n in enumerate(names) if n not in lhs and n not in rhs]

    def part(row, positions):
        return tuple(row[k] for k in positions)

    for t1 in rows:
        for t2 in rows:
            if part(t1, x) != part(t2, x):
                continue
            if not any(part(t, x) == part(t1, x) and part(t, y) == part(t1, y) and part(t, z) == part(t2, z)
                       for t in rows):
                return False
    return True


def classical_natural_join(names1: Sequence[str], rows1: Sequence[Sequence],
                           names2: Sequence[str], rows2: Sequence[Sequence]) -> List[Tuple]:
    """Equality join, output over names1 then names2's other attributes, no duplicates, (i, j) order."""
    shared = [n for n in names1 if n in names2]
    others = [k for k, n in enumerate(names2) if n not in shared]
    result = []
    for t1 in rows1:
        for t2 in rows2:
            if all(t1[names1.index(n)] == t2[names2.index(n)] for n in shared):
                row = tuple(t1) + tuple(t2[k] for k in others)
                if row not in result:
                    result.append(row)
    return result


def crisp_rows(r: Relation) -> List[Tuple[float, ...]]:
    return [tuple(cell.x for cell in row) for row in r.tuples]
