"""
DuVal Toolkit Command Line

Runs blow-ups, DuVal classification, the terminal-contraction decision, the
chart replay behind it and fixture replays on problem files.

Exit codes: 0 success, 1 failed replay or unexpected error, 2 usage or
parse error, 3 mathematical precondition failure.
"""

import argparse
import json
import logging
import os
import sys

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.duval.blowup import (CoordinateCenter, TwoGeneratorIdeal, WeightedPoint, blowup,
                              discrepancy_smooth_center, exceptional_divisors)
from src.duval.classifier import classify_duval
from src.duval.config import get_settings
from src.duval.decider import NOT_APPLICABLE, reduce_to_normal_form
from src.duval.errors import DuvalError, ParseError
from src.duval.fixtures import list_fixtures, replay
from src.duval.grammar import parse_generators, parse_weights
from src.duval.ideals import milnor_number
from src.duval.poly import JetBound
from src.duval.problem import ProblemFile, decide_problem, load_problem
from src.duval.replay import generic_normal_form, replay_theorem_charts
from src.duval.resolution import curve_position, minimal_resolution_dual_graph, surface_crepant_count

SCHEMA = 1

logger = logging.getLogger('duval')


def emit(args, document: dict):
    """Print a JSON report when --json is set"""
    if args.json:
        print(json.dumps({'schema': SCHEMA, 'command': args.command, **document}, indent=2))


def say(args, line: str):
    if not args.json:
        print(line)


def _equation(problem: ProblemFile, name: str):
    if name == 'equation' and problem.equation is None:
        raise ParseError("the problem file has no 'equation:' line")
    return problem.poly(name)


def _names(text: str):
    return tuple(n.strip() for n in text.split(',') if n.strip())


def cmd_blowup(args) -> int:
    """Blow up the equation and report one chart"""
    problem = load_problem(args.file)
    f = _equation(problem, args.of)
    if args.center:
        center = _names(args.center)
        if args.chart not in center:
            print(f"[ERROR] chart variable {args.chart} is not in the center {','.join(center)}")
            return 2
        spec = CoordinateCenter(center)
    elif args.weights:
        spec = WeightedPoint(tuple(parse_weights(args.weights, f.varset).items()))
    else:
        g1, g2 = parse_generators(args.ideal, f.varset)
        spec = TwoGeneratorIdeal(g1, g2)

    say(args, f"[*] Blowing up {f} (chart {args.chart})...")
    chart = blowup(f, spec, args.chart, args.ratio)
    report = chart.describe()
    if isinstance(spec, CoordinateCenter):
        report['discrepancy'] = discrepancy_smooth_center(len(spec.variables), chart.multiplicity)
    if args.labels:
        report['divisors'] = [d.describe() for d in exceptional_divisors(chart, _names(args.labels))]

    say(args, f"[OK] Chart {chart.name}")
    say(args, f"   - strict: {chart.strict_transform} = 0")
    say(args, f"   - total: {chart.total_transform}")
    say(args, f"   - m: {chart.multiplicity}")
    for relation in chart.ambient_relations:
        say(args, f"   - relation: {relation} = 0")
    if 'discrepancy' in report:
        say(args, f"   - discrepancy: {report['discrepancy']}")
    for d in report.get('divisors', []):
        say(args, f"   - {d['label']}: {d['ideal']}")
    emit(args, {'chart': report})
    return 0


def cmd_classify(args) -> int:
    """Classify a surface germ and describe its resolution graph"""
    problem = load_problem(args.file)
    f = _equation(problem, args.of)
    if f.varset.arity != 3:
        raise ParseError(f"classify needs a surface in three variables, got {f.varset}")

    say(args, f"[*] Classifying {f}...")
    kind = classify_duval(f)
    report = {'type': str(kind)}
    if kind.is_duval:
        bound = JetBound(args.jet_bound) if args.jet_bound else None
        report['mu'] = milnor_number(f, bound, candidate=kind.subscript)
        report['crepant'] = surface_crepant_count(f)
        report['graph'] = minimal_resolution_dual_graph(f, problem.curve).describe()
        if kind.tag == 'D' and problem.curve is not None:
            report['position'] = curve_position(f, problem.curve)

    line = f"[OK] {kind}"
    if 'mu' in report:
        line += f", mu={report['mu']}"
    if 'position' in report:
        line += f", position={report['position']}"
    say(args, line)
    if 'graph' in report:
        for node, neighbors in report['graph']['adjacency'].items():
            say(args, f"   - {node}: {' '.join(neighbors) or '-'}")
    emit(args, report)
    return 0


def cmd_decide(args) -> int:
    """Decide whether a terminal contraction onto the curve exists"""
    problem = load_problem(args.file)
    f = _equation(problem, 'equation')
    if problem.curve is None:
        raise ParseError("the problem file has no 'curve:' line")

    say(args, f"[*] Deciding {f} along {problem.curve}...")
    bound = JetBound(args.jet_bound) if args.jet_bound else None
    decision = decide_problem(f, problem.curve, bound)
    if decision.normal_form is not None:
        nf = decision.normal_form.describe()
        say(args, f"   - psi: {nf['psi']}, a: {nf['a']}, k: {nf['k']}, b: {nf['b']}")
        for key, value in nf['phi'].items():
            say(args, f"   - {key}: {value}")
    if decision.report is not None:
        report = decision.report.describe()
        say(args, f"   - condition (i): {', '.join(report['condition_i'])} -> {report['holds_i']}")
        say(args, f"   - condition (ii): {', '.join(report['condition_ii'])} -> {report['holds_ii']}")
        if report['flags']:
            say(args, f"   - flags: {', '.join(report['flags'])}")

    verdict = decision.verdict
    if verdict.tag == NOT_APPLICABLE:
        say(args, f"[!] {verdict}")
        emit(args, decision.describe())
        return 3
    say(args, f"[OK] {verdict}")
    emit(args, decision.describe())
    return 0


def cmd_charts(args) -> int:
    """Replay the W, W1, W2 charts on a Case 2 normal form"""
    if args.generic:
        source = generic_normal_form(args.generic)
        say(args, f"[*] Replaying charts on the generic normal form (k={args.generic})...")
    elif args.file:
        problem = load_problem(args.file)
        f = _equation(problem, 'equation')
        if problem.curve is None:
            raise ParseError("the problem file has no 'curve:' line")
        say(args, f"[*] Replaying charts on {f} along {problem.curve}...")
        bound = JetBound(args.jet_bound) if args.jet_bound else None
        source = reduce_to_normal_form(f, problem.curve, bound)
    else:
        print("[ERROR] give a problem file or --generic K")
        return 2

    trace = replay_theorem_charts(source)
    frame = trace.to_frame()
    say(args, frame.to_string(index=False))
    for label, value in trace.dictionary.items():
        say(args, f"   - {label}: {value}")
    say(args, f"   - system: {', '.join(str(p) for p in trace.displayed)}")
    say(args, f"   - conditions after eliminating x0: {len(trace.elimination.conditions)}")
    if trace.locus:
        say(args, f"[OK] conditions vanish on components {', '.join(trace.locus)}")
    if trace.solvable is not None:
        say(args, f"[OK] singular curves on W2: {'yes' if trace.solvable else 'no'}")
    report = trace.describe()
    report['charts'] = json.loads(frame.to_json(orient='records'))
    del report['steps']
    emit(args, report)
    return 0


def cmd_replay(args) -> int:
    """Replay one fixture or all of them"""
    if args.all:
        ids = list_fixtures(args.fixture_dir)
    elif args.id:
        ids = [args.id]
    else:
        print("[ERROR] give a fixture id or --all")
        return 2

    results = []
    for fixture_id in ids:
        result = replay(fixture_id, args.fixture_dir)
        results.append(result)
        line = f"[OK] {fixture_id}: PASS ({result.checked} checks)" if result.passed else \
            f"[ERROR] {fixture_id}: FAIL at {result.divergence}"
        say(args, line)

    failed = [r.id for r in results if not r.passed]
    say(args, f"\n[*] {len(results) - len(failed)}/{len(results)} fixtures passed")
    emit(args, {'results': [r.describe() for r in results]})
    return 1 if failed else 0


COMMANDS = {
    'blowup': cmd_blowup,
    'charts': cmd_charts,
    'classify': cmd_classify,
    'decide': cmd_decide,
    'replay': cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(description='Blow-ups, DuVal classification and D5 contraction decisions')
    parser.add_argument('--verbose', action='store_true', help='Log debug output')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p):
        p.add_argument('--json', action='store_true', help='Print a JSON report instead of text')
        p.add_argument('--jet-bound', type=int, default=None, help='Jet bound for Milnor numbers and reductions')

    p = sub.add_parser('blowup', help='Blow up the equation of a problem file')
    p.add_argument('file', type=str, help='Problem file')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--center', type=str, help='Coordinate center, e.g. x,z,t')
    group.add_argument('--weights', type=str, help='Weights of a weighted point blow-up, e.g. x=2,y=1,z=1,t=1')
    group.add_argument('--ideal', type=str, help='Two generators, e.g. "x, t^2"')
    p.add_argument('--chart', type=str, required=True, help='Chart variable, or a/b for two generators')
    p.add_argument('--ratio', type=str, default='u', help='Name of the new coordinate of a two-generator chart')
    p.add_argument('--labels', type=str, default=None, help='Labels of the exceptional components, e.g. E,F')
    p.add_argument('--of', type=str, default='equation', help='Polynomial of the file to blow up')
    common(p)

    p = sub.add_parser('classify', help='Classify a surface germ')
    p.add_argument('file', type=str, help='Problem file')
    p.add_argument('--of', type=str, default='equation', help='Polynomial of the file to classify')
    common(p)

    p = sub.add_parser('decide', help='Decide the existence of a terminal contraction')
    p.add_argument('file', type=str, help='Problem file with equation and curve')
    common(p)

    p = sub.add_parser('charts', help='Replay the W, W1, W2 charts behind the decision')
    p.add_argument('file', type=str, nargs='?', help='Problem file with a Case 2 equation and curve')
    p.add_argument('--generic', type=int, default=None, metavar='K',
                   help='Use the normal form with symbolic coefficients and x t^K term instead of a file')
    common(p)

    p = sub.add_parser('replay', help='Replay fixtures')
    p.add_argument('id', type=str, nargs='?', help='Fixture id')
    p.add_argument('--all', action='store_true', help='Replay every fixture')
    p.add_argument('--fixture-dir', type=str, default=settings.fixture_dir, help='Fixture directory')
    common(p)
    return parser


def main(argv=None) -> int:
    """Parse arguments, run a subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    level = logging.DEBUG if args.verbose else getattr(logging, get_settings().log_level, logging.WARNING)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    try:
        return COMMANDS[args.command](args)
    except DuvalError as e:
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("unexpected failure")
        print(f"[ERROR] {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
