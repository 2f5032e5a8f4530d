import functools
import json
import logging
import sys
from typing import Dict, Iterable, List, Optional

import click

from config import Config
from utils.decomposition import JoinConfig, lossless_check, theorem1_probe
from utils.dependency import DependencyChecker, DependencyStatement, Kind, compare_definitions
from utils.errors import DomainViolation, FuzzDepError
from utils.inference import InferenceEngine, load_dependency_set, parse_attribute_list, parse_statement
from utils.interval_core import AttributeDomain, parse_cell, within_domain
from utils.proximity import Measure, ProximityConfig, explain, parse_form
from utils.relation import load_relation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def reports_errors(fn):
    """Turn the command's return value into the exit code; library and file errors exit 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (FuzzDepError, OSError) as e:
            logger.error(f"{fn.__name__} failed: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(code or EXIT_OK)
    return wrapper


def output_option(fn):
    return click.option('--output', type=click.Choice(['text', 'json']), default=Config.OUTPUT,
                        envvar='FUZZDEP_OUTPUT', show_default=True, show_envvar=True,
                        help='Report format.')(fn)


def alpha_option(fn):
    return click.option('--alpha', type=float, default=Config.DEFAULT_ALPHA, show_default=True,
                        help='Cut degree used by the extended measure.')(fn)


def proximity_options(fn):
    """Measure selection flags shared by the relation commands."""
    fn = output_option(fn)
    fn = click.option('--beta-min', type=float, default=Config.DEFAULT_BETA_MIN, show_default=True,
                      help='Pairs with X-proximity at or below this never violate an FMVD.')(fn)
    fn = click.option('--form', type=click.Choice(['two-term', 'ratio']), default=None,
                      help='Liu/extended form; defaults to two-term for liu, ratio for extended.')(fn)
    fn = click.option('--measure', type=click.Choice([m.value for m in Measure]),
                      default=Config.DEFAULT_MEASURE, show_default=True, help='Proximity measure.')(fn)
    return alpha_option(fn)


def proximity_config(alpha: float, measure: str, form: Optional[str], beta_min: float) -> ProximityConfig:
    return ProximityConfig(measure=Measure(measure), form=parse_form(form), alpha=alpha,
                           vacuity_threshold=beta_min)


def attribute_names(text: str) -> List[str]:
    return [name.strip() for name in text.split(',') if name.strip()]


def number(value: Optional[float]) -> str:
    return '-' if value is None else format(value, '.4g')


def braces(names: Iterable[str]) -> str:
    return '{' + ','.join(sorted(names)) + '}'


def emit(output: str, payload: Dict, lines: List[str]) -> None:
    if output == 'json':
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            click.echo(line)


@click.command('sp')
@click.argument('value1')
@click.argument('value2')
@click.option('--lower', type=float, default=Config.DOMAIN_LOWER, show_default=True, help='Domain lower bound.')
@click.option('--upper', type=float, default=Config.DOMAIN_UPPER, show_default=True, help='Domain upper bound.')
@click.option('--theta', type=float, default=None, help='Universe scope (defaults to upper - lower).')
@click.option('--epsilon', type=float, default=None, help='Degenerate cut length (defaults to theta / 10000).')
@proximity_options
@reports_errors
def sp(value1, value2, lower, upper, theta, epsilon, alpha, measure, form, beta_min, output):
    """Semantic proximity of two cells, e.g. sp "[1,9]" "[1,8]"."""
    cfg = proximity_config(alpha, measure, form, beta_min)
    domain = AttributeDomain(lower, upper, theta, epsilon)
    values = [parse_cell(value1), parse_cell(value2)]
    for position, value in enumerate(values):
        if not within_domain(value, domain):
            raise DomainViolation('value', position, f"outside [{lower}, {upper}]")
    breakdown = explain(values[0], values[1], domain, cfg)
    emit(output, breakdown.to_dict(), [
        f"sp: {number(breakdown.value)}",
        f"distance: {number(breakdown.distance)}",
        f"measure: {cfg.describe()}",
        f"cuts: {breakdown.cut1} {breakdown.cut2}",
        f"intersection: {breakdown.intersection} (modular {number(breakdown.modular_intersection)})",
        f"hull: {breakdown.hull} (modular {number(breakdown.modular_hull)})",
    ])
    return EXIT_OK


@click.command('check')
@click.argument('kind', type=click.Choice([k.value for k in Kind]))
@click.argument('relation_file', type=click.Path(dir_okay=False))
@click.option('--lhs', required=True, help='Comma-separated left-hand attributes.')
@click.option('--rhs', required=True, help='Comma-separated right-hand attributes.')
@proximity_options
@reports_errors
def check(kind, relation_file, lhs, rhs, alpha, measure, form, beta_min, output):
    """Check an FFD or FMVD on a relation file; exit 0 when it holds, 1 when violated."""
    cfg = proximity_config(alpha, measure, form, beta_min)
    relation = load_relation(relation_file)
    statement = DependencyStatement(Kind(kind), attribute_names(lhs), attribute_names(rhs))
    report = DependencyChecker(relation, cfg).check(statement)

    lines = [f"{kind.upper()} {statement.format(relation.schema.names)} "
             f"{'holds' if report.holds else 'violated'} under {report.measure} "
             f"({report.pairs_checked} pairs checked, {report.vacuous_pairs} vacuous)"]
    for v in report.violations:
        line = f"  pair {v.pair}: beta={number(v.beta)}"
        if v.rhs_proximity is not None:
            line += f" > rhs proximity {number(v.rhs_proximity)}"
        if v.best_witness is not None:
            w = v.best_witness
            line += (f", best witness t{w.tuple_index} fails {w.failing_condition} "
                     f"at {number(w.achieved)}")
        lines.append(line)
    emit(output, report.to_dict(), lines)
    return EXIT_OK if report.holds else EXIT_FAILED


@click.command('closure')
@click.argument('deps_file', type=click.Path(dir_okay=False))
@click.option('--query', required=True, help="Statement such as 'A ->> C' or 'A,B -> C'.")
@click.option('--max-depth', type=click.IntRange(min=0), default=None,
              help='Decide by forward saturation limited to this many rounds.')
@output_option
@reports_errors
def closure(deps_file, query, max_depth, output):
    """Decide whether a statement follows from a dependency file; exit 0 when derivable."""
    ds = load_dependency_set(deps_file)
    engine = InferenceEngine(ds)
    result = engine.closure_contains(parse_statement(query, ds.universe), max_depth)

    lines = [f"{engine.format(result.query)}: {'derivable' if result.derivable else 'not derivable'}"]
    if result.trace is not None:
        for position, step in enumerate(result.trace.steps, 1):
            premises = '; '.join(engine.format(p) for p in step.premises)
            lines.append(f"  {position}. {step.rule}: "
                         + (f"{premises} => " if premises else '') + engine.format(step.conclusion))
    emit(output, result.to_dict(), lines)
    return EXIT_OK if result.derivable else EXIT_FAILED


@click.command('basis')
@click.argument('deps_file', type=click.Path(dir_okay=False))
@click.option('--set', 'attribute_set', required=True, help='Comma-separated attribute set X.')
@output_option
@reports_errors
def basis(deps_file, attribute_set, output):
    """Dependency basis of X: the blocks whose unions are the derivable X ->> W."""
    ds = load_dependency_set(deps_file)
    x = parse_attribute_list(attribute_set, ds.universe)
    blocks = InferenceEngine(ds).dependency_basis(x)
    payload = {'set': sorted(x), 'blocks': [sorted(block) for block in blocks]}
    emit(output, payload, [' | '.join(braces(block) for block in blocks) or '{}'])
    return EXIT_OK


@click.command('decompose')
@click.argument('relation_file', type=click.Path(dir_okay=False))
@click.option('--on', 'on', required=True, help='Comma-separated attributes X to join on.')
@click.option('--split', required=True, help='Comma-separated attributes Y of the XY component.')
@click.option('--beta-join', type=float, default=Config.DEFAULT_BETA_JOIN, show_default=True,
              help='Proximity two tuples need on X to join.')
@proximity_options
@reports_errors
def decompose(relation_file, on, split, beta_join, alpha, measure, form, beta_min, output):
    """Split a relation into XY and XZ, join back and report; exit 0 when lossless."""
    cfg = proximity_config(alpha, measure, form, beta_min)
    relation = load_relation(relation_file)
    report = lossless_check(relation, attribute_names(on), attribute_names(split), JoinConfig(cfg, beta_join))

    payload = report.to_dict()
    lines = [f"{'lossless' if report.lossless else 'lossy'}: {report.joined_count} joined tuples "
             f"at beta={number(report.beta_join)}"]
    lines += [f"  extra: ({', '.join(t)})" for t in payload['extra']]
    lines += [f"  missing: ({', '.join(t)})" for t in payload['missing']]
    emit(output, payload, lines)
    return EXIT_OK if report.lossless else EXIT_FAILED


@click.command('compare')
@click.argument('relation_file', type=click.Path(dir_okay=False))
@click.option('--lhs', required=True, help='Comma-separated attributes X.')
@click.option('--rhs', required=True, help='Comma-separated attributes Y.')
@alpha_option
@output_option
@reports_errors
def compare(relation_file, lhs, rhs, alpha, output):
    """Replication check of X -> Y / X ->> Y under each proximity definition; exit 0 when all work."""
    relation = load_relation(relation_file)
    verdicts = compare_definitions(relation, attribute_names(lhs), attribute_names(rhs), alpha)
    lines = [f"{v.definition:<9} {'works' if v.works else 'does not work':<14} {v.reason}" for v in verdicts]
    emit(output, {'definitions': [v.to_dict() for v in verdicts]}, lines)
    return EXIT_OK if all(v.works for v in verdicts) else EXIT_FAILED


@click.command('probe')
@click.argument('relation_file', type=click.Path(dir_okay=False))
@click.option('--on', 'on', required=True, help='Comma-separated attributes X.')
@click.option('--split', required=True, help='Comma-separated attributes Y.')
@proximity_options
@reports_errors
def probe(relation_file, on, split, alpha, measure, form, beta_min, output):
    """Compare the FMVD X ->> Y with losslessness of the XY / XZ split; exit 0 when they agree."""
    cfg = proximity_config(alpha, measure, form, beta_min)
    relation = load_relation(relation_file)
    report = theorem1_probe(relation, attribute_names(on), attribute_names(split), cfg)
    emit(output, report.to_dict(), [
        f"fmvd: {'holds' if report.fmvd else 'violated'}",
        f"lossless: {'yes' if report.lossless else 'no'} (beta={number(report.beta)})",
        f"agree: {'yes' if report.agree else 'no'}",
    ])
    return EXIT_OK if report.agree else EXIT_FAILED


COMMANDS = (sp, check, closure, basis, decompose, compare, probe)
