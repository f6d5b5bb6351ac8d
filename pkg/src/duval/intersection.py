"""
Intersection Calculator

Intersection lengths of parametrized lines with divisor ideals in a chart,
the affine ledger of intersection numbers l.E, l.F, and the discrepancy
a with the index it forces.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .blowup import Chart, blowup_coordinate_center, blowup_two_generator_ideal
from .classifier import classify_duval
from .errors import CurveInsideDivisor, Inconsistent, NotApplicable, Underdetermined
from .grammar import parse_poly, parse_rational
from .ideals import Ideal, ParamCurve
from .poly import Poly, VarSet
from .sympy_bridge import gcd, rref, root_multiplicity

logger = logging.getLogger(__name__)

LABEL = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')


@dataclass(frozen=True)
class LineInChart:
    """A parametrized line lying on a chart of a blow-up, inside a named divisor"""

    curve: ParamCurve
    chart: Chart
    divisor: str = 'F'

    def __post_init__(self):
        for equation in [self.chart.strict_transform] + list(self.chart.ambient_relations):
            if not self.curve.pullback(equation).is_zero():
                raise NotApplicable(f"the line does not lie on {equation} = 0")


def curve_divisor_length(curve: ParamCurve, divisor: Ideal, at: Optional[Fraction] = None) -> int:
    """
    Length of the intersection of a parametrized curve with a divisor ideal

    The pulled-back generators generate the ideal of their gcd in Q[s]; the
    length is its degree, or its order at one parameter value.

    Args:
        curve: Parametrized curve over the divisor's VarSet
        divisor: Generators of the divisor (or any ideal)
        at: Parameter value for a local length; the total length when omitted

    Raises:
        CurveInsideDivisor: every generator vanishes along the curve
    """
    pulled = [curve.pullback(g) for g in divisor.generators]
    nonzero = [p for p in pulled if not p.is_zero()]
    if not nonzero:
        raise CurveInsideDivisor(f"the curve lies inside {divisor}")
    common = nonzero[0]
    for p in nonzero[1:]:
        common = gcd(common, p)
    if at is None:
        return max(common.total_degree, 0)
    return root_multiplicity(common, curve.parameter, Fraction(at))


def line_length(line: LineInChart, divisor: Ideal, at: Optional[Fraction] = None) -> int:
    """Length of a chart line with a divisor ideal (see curve_divisor_length)"""
    return curve_divisor_length(line.curve, divisor, at)


# Ledger

@dataclass(frozen=True)
class Relation:
    """Affine relation sum(c_D * l.D) = value"""

    coefficients: Tuple[Tuple[str, Fraction], ...]
    value: Fraction

    @classmethod
    def of(cls, coefficients: Mapping[str, Fraction], value) -> 'Relation':
        kept = tuple((k, Fraction(v)) for k, v in coefficients.items() if v)
        return cls(kept, Fraction(value))

    @classmethod
    def parse(cls, text: str) -> 'Relation':
        """Parse 'E + 2*F = -1'"""
        if text.count('=') != 1:
            raise ValueError(f"relation {text!r} needs exactly one '='")
        lhs, rhs = text.split('=')
        labels = sorted(set(LABEL.findall(lhs)))
        varset = VarSet(tuple(labels))
        p = parse_poly(lhs, varset)
        if p.total_degree != 1 or p.constant_term:
            raise ValueError(f"relation {text!r} is not linear in the divisor labels")
        return cls.of({n: p.coefficient({n: 1}) for n in labels}, parse_rational(rhs))

    def labels(self) -> List[str]:
        return [k for k, _ in self.coefficients]

    def holds(self, entries: Mapping[str, Fraction]) -> bool:
        return sum(c * entries[k] for k, c in self.coefficients) == self.value

    def __str__(self) -> str:
        terms = ' + '.join(f"{c}*{k}" if c != 1 else k for k, c in self.coefficients)
        return f"l.({terms}) = {self.value}"


@dataclass
class IntersectionLedger:
    """Solved intersection numbers of one line with divisor classes"""

    entries: Dict[str, Fraction] = field(default_factory=dict)
    relations: List[Relation] = field(default_factory=list)

    def __getitem__(self, label: str) -> Fraction:
        return self.entries[label]

    def describe(self) -> dict:
        return {
            'entries': {k: str(v) for k, v in sorted(self.entries.items())},
            'relations': [str(r) for r in self.relations],
        }


def solve_ledger(relations: Sequence[Relation], query: Optional[Sequence[str]] = None) -> IntersectionLedger:
    """
    Solve affine relations among intersection numbers

    Args:
        relations: The relations
        query: Labels that must be determined (default: every label)

    Raises:
        Inconsistent: the relations have no solution
        Underdetermined: a queried label is not fixed by the relations
    """
    labels = sorted({k for r in relations for k in r.labels()})
    index = {k: i for i, k in enumerate(labels)}
    n = len(labels)
    rows = []
    for r in relations:
        row = {index[k]: c for k, c in r.coefficients}
        if r.value:
            row[n] = r.value
        rows.append(row)
    reduced, pivots = rref(rows, n + 1)
    if n in pivots:
        raise Inconsistent(f"relations {[str(r) for r in relations]} have no solution")

    free = set(range(n)) - set(pivots)
    entries = {}
    for row, pivot in zip(reduced, pivots):
        if not free & set(row):
            entries[labels[pivot]] = row.get(n, Fraction(0))
    missing = [k for k in (query or labels) if k not in entries]
    if missing:
        raise Underdetermined(f"relations do not determine {missing}")
    ledger = IntersectionLedger(entries, list(relations))
    logger.debug("ledger: %s", ledger.describe())
    return ledger


# Discrepancy

@dataclass(frozen=True)
class DiscrepancySolution:
    """Discrepancy of the exceptional divisor and the index it forces"""

    a: Fraction
    index: int

    def describe(self) -> dict:
        return {'a': str(self.a), 'index': self.index}


def solve_discrepancy(l_kz: Fraction, l_f: Fraction, l_pullback_kw: Fraction = Fraction(0)) -> DiscrepancySolution:
    """
    Solve K_Z = p^*K_W + a F against a line l

    Args:
        l_kz: l.K_Z
        l_f: l.F
        l_pullback_kw: l.p^*K_W; zero when l is contracted by p

    Returns:
        a = (l.K_Z - l.p^*K_W) / l.F and the index, the denominator of a
    """
    if not l_f:
        raise ZeroDivisionError("l.F = 0: the line does not see the exceptional divisor")
    a = (Fraction(l_kz) - Fraction(l_pullback_kw)) / Fraction(l_f)
    return DiscrepancySolution(a, a.denominator)


# Index fixtures

@dataclass
class IndexComputation:
    """Every intermediate value of an index fixture"""

    chart: Optional[Chart]
    multiple: int
    length: int
    ledger: IntersectionLedger
    solution: DiscrepancySolution
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def index(self) -> int:
        return self.solution.index

    def describe(self) -> dict:
        return {
            'chart': self.chart.describe() if self.chart else None,
            'multiple': self.multiple,
            'length': self.length,
            'ledger': self.ledger.describe(),
            'discrepancy': self.solution.describe(),
            'notes': dict(self.notes),
        }


def d5_index_fixture() -> IndexComputation:
    """
    Index of the contraction over a D5 curve, from its local A4 model

    On xy - z^5 the divisor 5E is cut out by the mu_5-invariant function
    y - 5z^4 + 10xz^3 - 10x^2z^2 + 5x^3z - x^4; its local length against
    F = (x - z^2, y - z^3) at the origin gives l.E.
    """
    varset = VarSet.of('x', 'y', 'z')
    f = parse_poly('x*y - z^5', varset)
    fifth = parse_poly('y - 5*z^4 + 10*x*z^3 - 10*x^2*z^2 + 5*x^3*z - x^4', varset)
    s = Poly.variable(VarSet(('s',)), 's')
    line = ParamCurve.build(varset, {'x': s ** 2, 'y': s ** 3, 'z': s})
    if not line.pullback(f).is_zero():
        raise NotApplicable("F does not lie on the A4 model")
    length = curve_divisor_length(line, Ideal.of(fifth), at=Fraction(0))
    ledger = solve_ledger([
        Relation.of({'E': 1, 'F': 2}, -1),
        Relation.of({'E': 1}, Fraction(length, 5)),
    ])
    solution = solve_discrepancy(-1, ledger['F'])
    logger.info("D5 model: length(5E, F) = %d, l.F = %s, a = %s", length, ledger['F'], solution.a)
    return IndexComputation(None, 5, length, ledger, solution,
                            notes={'model': str(f), '5E': str(fifth)})


def an_index_fixture(n: int) -> IndexComputation:
    """
    Index of the contraction over the curve (x, z, t) of xy + z^(n+1) + t^(n+2)

    Blows up the curve, reads the A_(n-1) type of W along the line from the
    slice z = 1, blows up (x, t^n) and intersects the line
    y = z = t = u = 0 with nE.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"n must be between 1 and 4, got {n}")
    varset = VarSet.of('x', 'y', 'z', 't')
    f = parse_poly(f"x*y + z^{n + 1} + t^{n + 2}", varset)
    w = blowup_coordinate_center(f, ('x', 'z', 't'), 't').strict_transform

    slice_vars = VarSet.of('x', 'y', 't')
    section = w.substitute({'x': Poly.variable(slice_vars, 'x'), 'y': Poly.variable(slice_vars, 'y'),
                            'z': Poly.constant(slice_vars, 1), 't': Poly.variable(slice_vars, 't')},
                           slice_vars)
    kind = classify_duval(section)
    multiple = kind.n + 1 if kind.tag == 'A' else 1
    if multiple != n:
        raise NotApplicable(f"W is {kind} along the line, expected A{n - 1}")

    t = Poly.variable(varset, 't')
    chart, _ = blowup_two_generator_ideal(w, Poly.variable(varset, 'x'), t ** multiple, ratio='u')
    s = Poly.variable(VarSet(('s',)), 's')
    curve = ParamCurve.build(chart.varset, {'x': s})
    line = LineInChart(curve, chart, 'F')
    length = line_length(line, chart.exceptional_ideal())
    ledger = solve_ledger([
        Relation.of({'E': 1, 'F': 1}, -1),
        Relation.of({'E': 1}, Fraction(length, multiple)),
    ])
    solution = solve_discrepancy(-1, ledger['F'])
    logger.info("A%d curve: W is %s, l.E = %s, a = %s, index %d",
                n, kind, ledger['E'], solution.a, solution.index)
    return IndexComputation(chart, multiple, length, ledger, solution,
                            notes={'W': str(w), 'section': str(kind)})
