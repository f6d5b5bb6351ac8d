"""
Problem Files

Reads the plain-text problem format used by the command line and the
fixture corpus:

    # comment
    vars: x y z t
    equation: x^2 + y^2*z + x*z^2 + t^3
    curve: (x, y, t)
    poly f2 = x*y + z^3
    ideal E = (x, t)
    line l = x=s, z=s^2
    steps:
    W = blowup of=equation center=x,z,t chart=t

Everything after `steps:` is kept as raw pipeline lines; `expect` lines
may appear anywhere and are kept raw as well.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .decider import ConditionReport, D5NormalForm, Verdict, decide_terminal, reduce_to_normal_form
from .errors import DFlPosition, NotD5, ParseError
from .grammar import parse_generators, parse_poly, parse_varset
from .ideals import Ideal, ParamCurve
from .poly import JetBound, Poly, VarSet

logger = logging.getLogger(__name__)

PARAMETER = 's'


@dataclass
class ProblemFile:
    """Parsed problem file"""

    varset: VarSet
    polys: Dict[str, Poly] = field(default_factory=dict)
    ideals: Dict[str, Ideal] = field(default_factory=dict)
    lines: Dict[str, str] = field(default_factory=dict)
    header: Dict[str, str] = field(default_factory=dict)
    steps: List[str] = field(default_factory=list)
    expects: List[str] = field(default_factory=list)

    @property
    def equation(self) -> Optional[Poly]:
        return self.polys.get('equation')

    @property
    def curve(self) -> Optional[Ideal]:
        return self.ideals.get('curve')

    def poly(self, name: str) -> Poly:
        if name not in self.polys:
            raise ParseError(f"polynomial {name!r} is not defined")
        return self.polys[name]

    def ideal(self, name: str) -> Ideal:
        if name not in self.ideals:
            raise ParseError(f"ideal {name!r} is not defined")
        return self.ideals[name]


def parse_line_images(text: str, varset: VarSet) -> ParamCurve:
    """
    Parse a parametrized line 'x=s, z=s^2' over a VarSet

    Coordinates that are not listed map to 0; images are polynomials in s.
    """
    line = VarSet((PARAMETER,))
    images = {}
    for part in (p.strip() for p in text.split(',')):
        if not part:
            continue
        if '=' not in part:
            raise ParseError(f"line entry {part!r} has no '='")
        name, image = (s.strip() for s in part.split('=', 1))
        if name not in varset:
            raise ParseError(f"line entry for unknown variable {name!r} ({varset})")
        images[name] = parse_poly(image, line)
    try:
        return ParamCurve.build(varset, images, PARAMETER)
    except ValueError as e:
        raise ParseError(f"bad line {text!r}: {e}") from e


def _definition(body: str) -> Tuple[str, str]:
    if '=' not in body:
        raise ParseError(f"definition {body!r} has no '='")
    name, value = (s.strip() for s in body.split('=', 1))
    if not name.isidentifier():
        raise ParseError(f"bad name {name!r}")
    return name, value


def parse_problem(text: str) -> ProblemFile:
    """
    Parse problem file text

    Args:
        text: File contents

    Returns:
        ProblemFile with every definition parsed over the declared VarSet

    Raises:
        ParseError: missing vars header, unknown directive or bad polynomial
    """
    problem: Optional[ProblemFile] = None
    header: Dict[str, str] = {}
    in_steps = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith('expect '):
                problem_or_fail(problem, number).expects.append(line[len('expect '):].strip())
                continue
            if in_steps:
                problem.steps.append(line)
                continue
            if line.startswith('vars:'):
                problem = ProblemFile(parse_varset(line))
                continue
            key, _, rest = line.partition(' ')
            if key.endswith(':'):
                key, value = key[:-1], line[len(key):].strip()
                if key == 'steps':
                    problem_or_fail(problem, number)
                    in_steps = True
                elif key == 'equation':
                    current = problem_or_fail(problem, number)
                    current.polys['equation'] = parse_poly(value, current.varset)
                elif key == 'curve':
                    current = problem_or_fail(problem, number)
                    current.ideals['curve'] = Ideal(tuple(parse_generators(value, current.varset)))
                else:
                    # plain headers such as id: and title: may precede vars:
                    header[key] = value
            elif key == 'poly':
                current = problem_or_fail(problem, number)
                name, value = _definition(rest)
                current.polys[name] = parse_poly(value, current.varset)
            elif key == 'ideal':
                current = problem_or_fail(problem, number)
                name, value = _definition(rest)
                current.ideals[name] = Ideal(tuple(parse_generators(value, current.varset)))
            elif key == 'line':
                current = problem_or_fail(problem, number)
                name, value = _definition(rest)
                current.lines[name] = value
            else:
                raise ParseError(f"unknown directive {key!r}")
        except ParseError as e:
            raise ParseError(f"line {number}: {e}") from e
    if problem is None:
        raise ParseError("problem file has no 'vars:' header")
    problem.header.update(header)
    logger.debug("parsed problem: %d polys, %d ideals, %d steps",
                 len(problem.polys), len(problem.ideals), len(problem.steps))
    return problem


def problem_or_fail(problem: Optional[ProblemFile], number: int) -> ProblemFile:
    if problem is None:
        raise ParseError(f"line {number} comes before the 'vars:' header")
    return problem


def load_problem(path: str) -> ProblemFile:
    """Read and parse a problem file"""
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    return parse_problem(text)


@dataclass
class Decision:
    """Verdict for a problem together with everything computed on the way"""

    verdict: Verdict
    normal_form: Optional[D5NormalForm] = None
    report: Optional[ConditionReport] = None

    def describe(self) -> dict:
        return {
            'verdict': self.verdict.describe(),
            'normal_form': self.normal_form.describe() if self.normal_form else None,
            'conditions': self.report.describe() if self.report else None,
        }


def decide_problem(f: Poly, curve: Ideal, bound: Optional[JetBound] = None) -> Decision:
    """
    Run the terminal-contraction decision on an equation and a curve

    A DF_l curve gives NoTerminalContraction{DFl} and a non-D5 section gives
    NotApplicable; other failures propagate.
    """
    try:
        nf = reduce_to_normal_form(f, curve, bound)
    except DFlPosition as e:
        logger.info("DF_l position: %s", e)
        return Decision(Verdict.no_contraction('DFl'))
    except NotD5 as e:
        logger.info("not applicable: %s", e)
        return Decision(Verdict.not_applicable(str(e)))
    verdict, report = decide_terminal(nf)
    return Decision(verdict, nf, report)
