"""
Fixture Replay

Runs the worked computations stored under fixtures/ and diffs every
expected value against what the modules compute. A fixture is a problem
file with an `id:` header, a pipeline after `steps:` and expectations:

    W = blowup of=equation center=x,z,t chart=t labels=E,F
    expect W.strict = u*z^2*t + x*y + z^3*t^2 + t^2   [REFERENCE]

Step arguments are key=value pairs split with shell quoting, so values
with spaces go in double quotes. Arguments may name problem polys, ideals
and lines, or earlier results as STEP.key. Polynomials compare up to term
order, ideals up to generator order and scaling.
"""

import logging
import os
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from .blowup import (Chart, CoordinateCenter, TwoGeneratorIdeal, WeightedPoint, blowup,
                     discrepancy_smooth_center, exceptional_divisors, strict_transform_of_divisor)
from .classifier import classify_duval
from .config import get_settings
from .decider import D5NormalForm, case_split, reduce_to_normal_form
from .errors import DuvalError, FixtureNotFound, FixtureParseError, ParseError
from .grammar import parse_generators, parse_poly, parse_rational, parse_weights
from .ideals import Ideal, ParamCurve, curve_in_locus, hypersurface_singular_ideal, milnor_number
from .intersection import (IndexComputation, LineInChart, Relation, an_index_fixture, d5_index_fixture,
                           line_length, solve_discrepancy, solve_ledger)
from .poly import JetBound, Poly, VarSet
from .problem import ProblemFile, decide_problem, parse_line_images, parse_problem
from .replay import generic_normal_form, replay_theorem_charts
from .resolution import curve_position, minimal_resolution_dual_graph, surface_crepant_count
from .sympy_bridge import solve_points

logger = logging.getLogger(__name__)

SUFFIX = '.fixture'
TAGS = ('REFERENCE', 'TRIVIAL', 'DERIVED')


@dataclass(frozen=True)
class Step:
    """One pipeline line: NAME = op key=value ..."""

    name: str
    op: str
    args: Dict[str, str]
    text: str


@dataclass(frozen=True)
class Expectation:
    """Expected value of STEP.key with its provenance tag"""

    step: str
    key: str
    value: str
    tag: str

    @property
    def path(self) -> str:
        return f"{self.step}.{self.key}"


@dataclass
class Fixture:
    id: str
    problem: ProblemFile
    steps: List[Step]
    expectations: List[Expectation]

    @property
    def title(self) -> str:
        return self.problem.header.get('title', '')


@dataclass
class StepResult:
    """Values a step exposes to expectations and later steps"""

    values: Dict[str, Any] = field(default_factory=dict)
    chart: Optional[Chart] = None


@dataclass
class FixtureResult:
    """Outcome of one replay: PASS, or FAIL with the first divergence"""

    id: str
    passed: bool
    checked: int = 0
    divergence: Optional[str] = None

    @property
    def status(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def describe(self) -> dict:
        out = {'id': self.id, 'status': self.status, 'checked': self.checked}
        if self.divergence:
            out['divergence'] = self.divergence
        return out


# Parsing

def parse_step(text: str) -> Step:
    name, sep, rest = text.partition('=')
    name = name.strip()
    if not sep or not name.isidentifier():
        raise FixtureParseError(f"step {text!r} must read NAME = op key=value ...")
    try:
        words = shlex.split(rest)
    except ValueError as e:
        raise FixtureParseError(f"step {text!r}: {e}") from e
    if not words:
        raise FixtureParseError(f"step {text!r} names no operation")
    op, args = words[0], {}
    for word in words[1:]:
        key, sep, value = word.partition('=')
        if not sep:
            raise FixtureParseError(f"argument {word!r} of step {name} has no '='")
        args[key] = value
    if op not in OPS:
        raise FixtureParseError(f"unknown operation {op!r} in step {name}")
    return Step(name, op, args, text)


def parse_expectation(text: str) -> Expectation:
    body, tag = text.strip(), 'DERIVED'
    if body.endswith(']') and '[' in body:
        body, _, tag = body[:-1].rpartition('[')
        body, tag = body.strip(), tag.strip()
    if tag not in TAGS:
        raise FixtureParseError(f"unknown provenance tag [{tag}] in {text!r}")
    path, sep, value = body.partition('=')
    step, dot, key = path.strip().partition('.')
    if not sep or not dot or not key:
        raise FixtureParseError(f"expectation {text!r} must read STEP.key = value [TAG]")
    return Expectation(step, key.strip(), value.strip(), tag)


def parse_fixture(text: str, fixture_id: Optional[str] = None) -> Fixture:
    """
    Parse fixture text

    Raises:
        FixtureParseError: bad header, step or expectation, or an
            expectation naming a step that does not exist
    """
    try:
        problem = parse_problem(text)
    except ParseError as e:
        raise FixtureParseError(str(e)) from e
    fid = problem.header.get('id', fixture_id)
    if not fid:
        raise FixtureParseError("fixture has no 'id:' header")
    steps = [parse_step(line) for line in problem.steps]
    expectations = [parse_expectation(line) for line in problem.expects]
    names = [s.name for s in steps]
    if len(set(names)) != len(names):
        raise FixtureParseError(f"fixture {fid} defines a step twice")
    for e in expectations:
        if e.step not in names:
            raise FixtureParseError(f"expectation {e.path} refers to an unknown step")
    return Fixture(fid, problem, steps, expectations)


def fixture_path(fixture_id: str, fixture_dir: Optional[str] = None) -> str:
    return os.path.join(fixture_dir or get_settings().fixture_dir, fixture_id + SUFFIX)


def list_fixtures(fixture_dir: Optional[str] = None) -> List[str]:
    directory = fixture_dir or get_settings().fixture_dir
    if not os.path.isdir(directory):
        raise FixtureNotFound(f"fixture directory {directory} does not exist")
    return sorted(f[:-len(SUFFIX)] for f in os.listdir(directory) if f.endswith(SUFFIX))


def load_fixture(fixture_id: str, fixture_dir: Optional[str] = None) -> Fixture:
    path = fixture_path(fixture_id, fixture_dir)
    if not os.path.exists(path):
        raise FixtureNotFound(f"no fixture {fixture_id!r} ({path})")
    with open(path, 'r') as f:
        return parse_fixture(f.read(), fixture_id)


# Evaluation context

class Context:
    """Problem definitions plus the results of the steps run so far"""

    def __init__(self, problem: ProblemFile):
        self.problem = problem
        self.results: Dict[str, StepResult] = {}

    def value(self, ref: str) -> Any:
        step, _, key = ref.partition('.')
        if step not in self.results:
            raise FixtureParseError(f"{ref} refers to a step that has not run")
        values = self.results[step].values
        if key not in values:
            raise FixtureParseError(f"step {step} has no value {key!r} (has {sorted(values)})")
        return values[key]

    def _is_ref(self, text: str) -> bool:
        return '.' in text and text.partition('.')[0] in self.results

    def poly(self, ref: str) -> Poly:
        value = self.value(ref) if self._is_ref(ref) else self.problem.poly(ref)
        if not isinstance(value, Poly):
            raise FixtureParseError(f"{ref} is not a polynomial")
        return value

    def ideal(self, ref: str) -> Ideal:
        if self._is_ref(ref):
            value = self.value(ref)
        elif ref in self.results:
            value = self.results[ref].values.get('ideal')
        else:
            value = self.problem.ideal(ref)
        if not isinstance(value, Ideal):
            raise FixtureParseError(f"{ref} is not an ideal")
        return value

    def chart(self, ref: str) -> Chart:
        result = self.results.get(ref)
        if result is None or result.chart is None:
            raise FixtureParseError(f"{ref} is not a blow-up step")
        return result.chart

    def rational(self, text: str) -> Fraction:
        if self._is_ref(text):
            return Fraction(self.value(text))
        return parse_rational(text)

    def line(self, name: str, varset: VarSet) -> ParamCurve:
        if name not in self.problem.lines:
            raise ParseError(f"line {name!r} is not defined")
        return parse_line_images(self.problem.lines[name], varset)

    def varset(self, args: Dict[str, str]) -> VarSet:
        if 'in' in args:
            return self.chart(args['in']).varset
        return self.problem.varset


# Operations

OPS: Dict[str, Callable[[Context, Dict[str, str]], StepResult]] = {}


def op(name: str):
    def register(fn):
        OPS[name] = fn
        return fn
    return register


def _names(text: str) -> List[str]:
    return [n.strip() for n in text.split(',') if n.strip()]


def _bound(args: Dict[str, str]) -> Optional[JetBound]:
    return JetBound(int(args['jet'])) if 'jet' in args else None


@op('blowup')
def op_blowup(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Blow up a coordinate center, weighted point or two-generator ideal"""
    f = ctx.poly(args['of'])
    if 'center' in args:
        spec = CoordinateCenter(tuple(_names(args['center'])))
    elif 'weights' in args:
        spec = WeightedPoint(tuple(parse_weights(args['weights'], f.varset).items()))
    elif 'ideal' in args:
        g1, g2 = parse_generators(args['ideal'], f.varset)
        spec = TwoGeneratorIdeal(g1, g2)
    else:
        raise FixtureParseError("blowup needs center=, weights= or ideal=")
    chart = blowup(f, spec, args['chart'], args.get('ratio', 'u'))
    values = {
        'strict': chart.strict_transform,
        'total': chart.total_transform,
        'm': chart.multiplicity,
    }
    if chart.ambient_relations:
        values['relation'] = chart.ambient_relations[0]
    if isinstance(spec, CoordinateCenter):
        values['discrepancy'] = discrepancy_smooth_center(len(spec.variables), chart.multiplicity)
    if 'labels' in args:
        divisors = exceptional_divisors(chart, _names(args['labels']))
        values['components'] = len(divisors)
        for d in divisors:
            values[f"divisor.{d.label}"] = d.ideal
    return StepResult(values, chart)


@op('transform')
def op_transform(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Strict transform of a divisor ideal in a blow-up chart"""
    chart = ctx.chart(args['chart'])
    return StepResult({'ideal': strict_transform_of_divisor(ctx.ideal(args['divisor']), chart)})


@op('ideal')
def op_ideal(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Ideal over the problem variables, or over a chart with in=STEP"""
    return StepResult({'ideal': Ideal(tuple(parse_generators(args['gens'], ctx.varset(args))))})


@op('exceptional')
def op_exceptional(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Exceptional divisor of a blow-up step: its generator, the relations and the strict transform"""
    chart = ctx.chart(args['chart'])
    return StepResult({'ideal': chart.exceptional_ideal(), 'generator': chart.exceptional_generator})


@op('substitute')
def op_substitute(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Substitute into a polynomial; vars= names the target variables"""
    f = ctx.poly(args['of'])
    target = VarSet(tuple(_names(args['vars']))) if 'vars' in args else f.varset
    mapping = {}
    for part in args.get('map', '').split(','):
        if part.strip():
            name, _, image = part.partition('=')
            mapping[name.strip()] = parse_poly(image, target)
    for name in f.varset.names:
        if name not in mapping:
            if name not in target:
                raise FixtureParseError(f"{name} is neither substituted nor a target variable")
            mapping[name] = Poly.variable(target, name)
    return StepResult({'poly': f.substitute(mapping, target)})


@op('singular')
def op_singular(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Singular ideal of a hypersurface; line= checks a line against it"""
    ideal = hypersurface_singular_ideal(ctx.poly(args['of']))
    values = {'ideal': ideal}
    if 'line' in args:
        values['contains'] = curve_in_locus(ctx.line(args['line'], ideal.varset), ideal)
    return StepResult(values)


@op('points')
def op_points(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Singular points of a hypersurface over the algebraic closure"""
    ideal = hypersurface_singular_ideal(ctx.poly(args['of']))
    points = solve_points(ideal.generators, ideal.varset)
    return StepResult({
        'count': len(points.rational) + points.irrational,
        'rational': len(points.rational),
        'positive_dimensional': points.positive_dimensional,
    })


@op('classify')
def op_classify(ctx: Context, args: Dict[str, str]) -> StepResult:
    """DuVal type, Milnor number and crepant count of a surface germ"""
    f = ctx.poly(args['of'])
    kind = classify_duval(f)
    values = {'type': str(kind)}
    if kind.is_duval:
        values['mu'] = milnor_number(f, candidate=kind.subscript)
        values['crepant'] = surface_crepant_count(f)
    return StepResult(values)


@op('position')
def op_position(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Dual graph of a D-type germ and where a curve meets it"""
    f, curve = ctx.poly(args['of']), ctx.ideal(args['curve'])
    graph = minimal_resolution_dual_graph(f, curve)
    return StepResult({
        'nodes': len(graph.nodes),
        'attachment': graph.curve_attachment,
        'position': curve_position(f, curve),
    })


@op('length')
def op_length(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Intersection length of a line lying on a chart with an ideal"""
    chart = ctx.chart(args['chart'])
    line = LineInChart(ctx.line(args['line'], chart.varset), chart, args.get('divisor', 'F'))
    at = ctx.rational(args['at']) if 'at' in args else None
    return StepResult({'length': line_length(line, ctx.ideal(args['ideal']), at)})


@op('ledger')
def op_ledger(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Solve relations 'E + F = -1; 2*E = L.length' for the intersection numbers"""
    relations = []
    for text in args['relations'].split(';'):
        if not text.strip():
            continue
        lhs, _, rhs = text.partition('=')
        relations.append(Relation.parse(f"{lhs} = {ctx.rational(rhs.strip())}"))
    ledger = solve_ledger(relations)
    return StepResult(dict(ledger.entries))


@op('discrepancy')
def op_discrepancy(ctx: Context, args: Dict[str, str]) -> StepResult:
    """a = (l.K_Z - l.p*K_W) / l.F and the index"""
    solution = solve_discrepancy(ctx.rational(args['kz']), ctx.rational(args['lf']),
                                 ctx.rational(args.get('kw', '0')))
    return StepResult({'a': solution.a, 'index': solution.index})


def _normal_form_values(nf: D5NormalForm) -> Dict[str, Any]:
    values = {'psi': nf.psi, 'a': nf.a, 'k': nf.k, 'b': nf.b, 'case': case_split(nf).value,
              'equation': nf.to_poly()}
    for (i, j, k), c in nf.phi.items():
        values[f"a{i}{j}{k}"] = c
    return values


@op('normal_form')
def op_normal_form(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Reduce an equation and a curve to the D5 normal form"""
    nf = reduce_to_normal_form(ctx.poly(args['of']), ctx.ideal(args['curve']), _bound(args))
    return StepResult(_normal_form_values(nf))


@op('decide')
def op_decide(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Verdict on the existence of a terminal contraction"""
    decision = decide_problem(ctx.poly(args['of']), ctx.ideal(args['curve']), _bound(args))
    verdict = decision.verdict
    values: Dict[str, Any] = {'verdict': str(verdict), 'tag': verdict.tag}
    if verdict.index is not None:
        values['index'] = verdict.index
    if verdict.violated is not None:
        values['violated'] = verdict.violated
    if decision.report is not None:
        values['holds_i'] = decision.report.holds_i
        values['holds_ii'] = decision.report.holds_ii
        values['flags'] = ','.join(decision.report.flags)
    if decision.normal_form is not None:
        values['case'] = case_split(decision.normal_form).value
    return StepResult(values)


@op('replay')
def op_replay(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Replay the W, W1, W2 charts on a numeric or symbolic Case 2 normal form"""
    if 'of' in args:
        source = reduce_to_normal_form(ctx.poly(args['of']), ctx.ideal(args['curve']), _bound(args))
    else:
        source = generic_normal_form(int(args.get('k', '1')))
    trace = replay_theorem_charts(source)
    w, w1, w2 = (trace.step(n) for n in ('W', 'W1', 'W2'))
    values: Dict[str, Any] = {
        'W': w.chart.strict_transform,
        'W1': w1.chart.strict_transform,
        'G': trace.generator,
        'W2': w2.chart.strict_transform,
        'relation': w2.chart.ambient_relations[0],
        'C': Ideal(tuple(trace.curve_equations)),
        'point': trace.system.point_equation,
        'equations': len(trace.system.equations),
        'system': Ideal(tuple(trace.displayed)),
        'conditions': len(trace.elimination.conditions),
        'locus': ','.join(trace.locus),
    }
    values.update({f"dict.{label}": p for label, p in trace.dictionary.items()})
    for step in (w, w1):
        for d in step.divisors:
            values[f"{step.name}.{d.label}"] = d.ideal
    if trace.solvable is not None:
        values['solvable'] = trace.solvable
    return StepResult(values)


def _index_values(computation: IndexComputation) -> Dict[str, Any]:
    values = dict(computation.ledger.entries)
    values.update({
        'multiple': computation.multiple,
        'length': computation.length,
        'a': computation.solution.a,
        'index': computation.index,
    })
    return values


@op('d5_index')
def op_d5_index(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Index from the local A4 model of the D5 contraction"""
    return StepResult(_index_values(d5_index_fixture()))


@op('an_index')
def op_an_index(ctx: Context, args: Dict[str, str]) -> StepResult:
    """Index of the contraction over an A_(n-1) curve"""
    computation = an_index_fixture(int(args['n']))
    result = StepResult(_index_values(computation), computation.chart)
    result.values['section'] = computation.notes['section']
    return result


# Comparison

def matches(expected: str, actual: Any) -> bool:
    """Compare expected text with a computed value"""
    if isinstance(actual, bool):
        return expected.lower() == str(actual).lower()
    if isinstance(actual, Poly):
        return parse_poly(expected, actual.varset) == actual
    if isinstance(actual, Ideal):
        gens = parse_generators(expected, actual.varset)
        return {g.normalized() for g in gens} == {g.normalized() for g in actual.generators}
    if isinstance(actual, (int, Fraction)):
        return parse_rational(expected) == actual
    return expected == str(actual)


def run_fixture(fixture: Fixture) -> FixtureResult:
    """
    Execute a fixture's pipeline and check its expectations in order

    Returns:
        PASS when every expectation holds, otherwise FAIL with the first
        divergence (a mismatch or an error raised by a step)
    """
    ctx = Context(fixture.problem)
    for step in fixture.steps:
        logger.debug("%s: %s", fixture.id, step.text)
        try:
            ctx.results[step.name] = OPS[step.op](ctx, step.args)
        except KeyError as e:
            return FixtureResult(fixture.id, False, divergence=f"step {step.name}: missing argument {e}")
        except (DuvalError, ValueError, ZeroDivisionError) as e:
            return FixtureResult(fixture.id, False, divergence=f"step {step.name}: {type(e).__name__}: {e}")

    checked = 0
    for e in fixture.expectations:
        try:
            actual = ctx.value(e.path)
            ok = matches(e.value, actual)
        except DuvalError as err:
            return FixtureResult(fixture.id, False, checked, f"{e.path}: {err}")
        if not ok:
            return FixtureResult(fixture.id, False, checked,
                                 f"{e.path}: expected {e.value} [{e.tag}], got {actual}")
        checked += 1
    return FixtureResult(fixture.id, True, checked)


def replay(fixture_id: str, fixture_dir: Optional[str] = None) -> FixtureResult:
    """Load and run one fixture"""
    result = run_fixture(load_fixture(fixture_id, fixture_dir))
    logger.info("%s: %s (%d checks)", fixture_id, result.status, result.checked)
    return result


def replay_all(fixture_dir: Optional[str] = None) -> List[FixtureResult]:
    return [replay(fid, fixture_dir) for fid in list_fixtures(fixture_dir)]
