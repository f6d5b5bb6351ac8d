"""
Chart Replay

Replays, on a Case 2 normal form, the blow-up sequence behind the
terminal-contraction decision: the curve blow-up W, the blow-up W1 of the
divisor E, and the blow-up W2 of (t^2, G) along 2E. Along the exceptional
curves C over the line l_0 the Jacobian of the two W2 equations gives a
polynomial system in the x coordinate x0; W2 is singular along some C
exactly when that system has a solution, which must agree with the
condition report.

The system is also rebuilt from the coefficient dictionary read off W1
and compared with the derived one as ideals. Eliminating x0 by a
resultant leaves conditions on the coefficients alone; on symbolic
inputs they are checked to vanish on both condition components.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from .blowup import (Chart, DivisorInChart, blowup_coordinate_center, blowup_two_generator_ideal,
                     exceptional_divisors, strict_transform_of_divisor)
from .decider import NORMAL_VARS, Case, D5NormalForm, case_split, condition_report
from .errors import ChartMismatch, NotApplicable, VarSetMismatch
from .ideals import Ideal
from .poly import Poly, Scalar, VarSet
from .sympy_bridge import exact_divide, gcd, resultant, same_ideal

logger = logging.getLogger(__name__)

CURVE_CENTER = ('x', 'y', 't')
DIVISOR_CENTER = ('x', 't')
RATIO = 'w'
JACOBIAN_COLUMNS = ('x', 'y', 'z', 't', RATIO)
ELIMINATION_PARAMETER = 's'

# label, monomial on W1, monomial in the normal form
DICTIONARY: Tuple[Tuple[str, Dict[str, int], Dict[str, int]], ...] = (
    ('f00', {'z': 2}, {'z': 2, 't': 2}),
    ('psi00', {'x': 1, 'z': 1, 't': 1}, {'x': 1, 'z': 1, 't': 1}),
    ('phi1', {'z': 1, 't': 1}, {'z': 1, 't': 3}),
    ('phi2', {'t': 2}, {'t': 4}),
    ('phi2_t', {'t': 3}, {'t': 5}),
    ('phi2_y', {'y': 1, 't': 2}, {'y': 1, 't': 3}),
    ('b', {'x': 1, 't': 2}, {'x': 1, 't': 2}),
    ('c', {'x': 1, 't': 3}, {'x': 1, 't': 3}),
)

# each condition component as images of dictionary entries
COMPONENTS: Dict[str, Callable[[Mapping[str, Poly]], Dict[str, Union[Poly, Scalar]]]] = {
    'i': lambda d: {'phi2_t': 0, 'phi2_y': 0, 'phi1': d['b'] * d['psi00'] / 2, 'phi2': d['b'] ** 2 / 4},
    'ii': lambda d: {'phi2': d['b'] * d['f00'] - d['f00'] ** 2, 'phi1': d['f00'] * d['psi00']},
}


@dataclass
class ChartStep:
    """One blow-up in the replay with its exceptional components"""

    name: str
    chart: Chart
    divisors: List[DivisorInChart] = field(default_factory=list)

    def describe(self) -> dict:
        return {
            'name': self.name,
            'chart': self.chart.describe(),
            'divisors': [d.describe() for d in self.divisors],
        }


@dataclass
class SingularitySystem:
    """Jacobian along the curves C and the equations in x0 it induces"""

    varset: VarSet
    jacobian: List[List[Poly]]
    minors: List[Poly]
    point_equation: Poly
    equations: List[Poly]

    def describe(self) -> dict:
        return {
            'vars': list(self.varset.names),
            'jacobian': [[str(p) for p in row] for row in self.jacobian],
            'minors': [str(p) for p in self.minors],
            'point_equation': str(self.point_equation),
            'equations': [str(p) for p in self.equations],
        }


@dataclass
class Elimination:
    """Conditions on the coefficients left after eliminating x0"""

    varset: VarSet
    conditions: List[Poly]

    def vanishes(self) -> bool:
        return not self.conditions

    def vanishes_at(self, values: Mapping[str, Scalar]) -> bool:
        """Whether every condition is zero at the given coefficients (missing ones are 0)"""
        point = {n: values.get(n, 0) for n in self.varset.names if n != 'x0'}
        return all(c.evaluate(point) == 0 for c in self.conditions)

    def describe(self) -> dict:
        return {'vars': list(self.varset.names), 'conditions': [str(c) for c in self.conditions]}


@dataclass
class ChartTrace:
    """Every chart of the replay plus the singularity system on the last one"""

    steps: List[ChartStep]
    generator: Poly
    curve_equations: List[Poly]
    system: SingularitySystem
    dictionary: Dict[str, Poly]
    displayed: List[Poly]
    elimination: Elimination
    solvable: Optional[bool] = None
    locus: List[str] = field(default_factory=list)

    def step(self, name: str) -> ChartStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def describe(self) -> dict:
        out = {
            'steps': [s.describe() for s in self.steps],
            'generator': str(self.generator),
            'curve_equations': [str(p) for p in self.curve_equations],
            'system': self.system.describe(),
            'dictionary': {label: str(p) for label, p in self.dictionary.items()},
            'displayed_system': [str(p) for p in self.displayed],
            'elimination': self.elimination.describe(),
        }
        if self.solvable is not None:
            out['solvable'] = self.solvable
        if self.locus:
            out['locus'] = list(self.locus)
        return out

    def to_frame(self) -> pd.DataFrame:
        """One row per chart: equation, multiplicity and exceptional components"""
        rows = []
        for s in self.steps:
            rows.append({
                'step': s.name,
                'chart': s.chart.name,
                'm': s.chart.multiplicity,
                'strict': str(s.chart.strict_transform),
                'relations': '; '.join(str(r) for r in s.chart.ambient_relations),
                'divisors': '; '.join(f"{d.label}: {d.ideal}" for d in s.divisors),
            })
        return pd.DataFrame(rows, columns=['step', 'chart', 'm', 'strict', 'relations', 'divisors'])


# Generic normal forms

def generic_normal_form(k: int = 1) -> Poly:
    """
    Case 2 normal form with symbolic coefficients

    phi carries every allowed monomial of degree 3 together with t^4,
    psi is affine in (z, t); coefficients are extra variables named after
    their monomials (a_ijk for y^i z^j t^k in phi, p_ij for z^i t^j in psi,
    and a for the x t^k term).
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    phi_keys = [(i, j, 3 - i - j) for i in range(4) for j in range(4 - i)
                if (i, j, 3 - i - j) not in ((0, 3, 0),)]
    phi_keys.append((0, 0, 4))
    psi_keys = [(0, 0), (1, 0), (0, 1)]
    params = ['a'] + [f"p{i}{j}" for i, j in psi_keys] + [f"a{i}{j}{l}" for i, j, l in phi_keys]
    varset = NORMAL_VARS.extend(*params)

    def v(name: str) -> Poly:
        return Poly.variable(varset, name)

    x, y, z, t = (v(n) for n in NORMAL_VARS.names)
    psi = Poly.zero(varset)
    for i, j in psi_keys:
        psi = psi + v(f"p{i}{j}") * z ** i * t ** j
    phi = Poly.zero(varset)
    for i, j, l in phi_keys:
        phi = phi + v(f"a{i}{j}{l}") * y ** i * z ** j * t ** l
    return x ** 2 + y ** 2 * z + x * z ** 2 + t * (x * z * psi + v('a') * x * t ** k + phi)


# Expected forms

def _variable(varset: VarSet, name: str) -> Poly:
    return Poly.variable(varset, name)


def expected_divisor_chart(f: Poly) -> Poly:
    """
    The W1 equation written directly from the normal form

    x^2 t^2 + y^2 z + x z^2 + t R_x + phi(yt, z, t) / t, where
    t (R_x + phi) is everything beyond x^2 + y^2 z + x z^2 and R_x collects
    the terms divisible by x.
    """
    varset = f.varset
    x, y, z, t = (_variable(varset, n) for n in NORMAL_VARS.names)
    head = x ** 2 + y ** 2 * z + x * z ** 2
    rest = exact_divide(f - head, t)
    if rest is None:
        raise NotApplicable(f"{f} is not x^2 + y^2 z + x z^2 modulo t")
    ix = varset.index('x')
    with_x = Poly(varset, {e: c for e, c in rest.items() if e[ix]})
    phi = rest - with_x
    shifted = exact_divide(phi.substitute({'y': y * t}, varset), t)
    if shifted is None:
        raise NotApplicable(f"phi = {phi} has a pure power of z")
    return x ** 2 * t ** 2 + y ** 2 * z + x * z ** 2 + t * with_x + shifted


def split_generator(w1: Poly) -> Poly:
    """
    The generator G with I_2E = (t^2, G) on W1

    z G collects the terms of t-degree at most one together with the terms
    x z (...); the remaining terms are t^2 times the second W2 equation.
    """
    varset = w1.varset
    ix, iz, it = (varset.index(n) for n in ('x', 'z', 't'))
    z_part = Poly(varset, {e: c for e, c in w1.items()
                           if (e[ix] == 1 and e[iz] >= 1) or (not e[ix] and e[it] <= 1)})
    g = exact_divide(z_part, _variable(varset, 'z'))
    if g is None:
        raise ChartMismatch(f"{z_part} is not divisible by z; the input is not in Case 2")
    return g


# Replay

def _check_case2(f: Poly) -> None:
    for powers in ({'y': 1, 't': 2}, {'t': 3}):
        if f.coefficient(powers):
            raise NotApplicable(f"{Poly.monomial(f.varset, powers)} occurs: Case 1, the replay needs Case 2")
    if f.coefficient({'z': 1, 't': 2}):
        raise NotApplicable("z t^2 occurs: cD4, the curves C lie over l_d with d^2 + a_011 = 0")


def singularity_system(relation: Poly, equation: Poly) -> SingularitySystem:
    """
    Jacobian of (relation, equation) along C = {y = z = t = 0, x = x0}

    Every 2x2 minor must vanish for all w; its coefficients in w together
    with the point equation of C form the system in x0.
    """
    source = equation.varset
    params = [n for n in source.names if n not in JACOBIAN_COLUMNS]
    varset = VarSet.of('x0', RATIO, *params)
    reduced = VarSet.of('x0', *params)
    on_curve = {'x': _variable(varset, 'x0'), 'y': Poly.zero(varset), 'z': Poly.zero(varset),
                't': Poly.zero(varset)}

    def at_curve(p: Poly) -> Poly:
        return p.substitute(on_curve, varset)

    leftover = at_curve(relation)
    if not leftover.is_zero():
        raise NotApplicable(f"the curves C are not over l_0: {leftover} != 0")
    jacobian = [[at_curve(p.partial(c)) for c in JACOBIAN_COLUMNS] for p in (relation, equation)]
    minors = []
    for i, j in combinations(range(len(JACOBIAN_COLUMNS)), 2):
        minor = jacobian[0][i] * jacobian[1][j] - jacobian[0][j] * jacobian[1][i]
        if not minor.is_zero():
            minors.append(minor)

    point = at_curve(equation)
    if point.degree_in(RATIO) > 0:
        raise ChartMismatch(f"point equation {point} depends on {RATIO}")
    iw = varset.index(RATIO)
    equations = [point]
    for minor in minors:
        by_power: Dict[int, Dict] = {}
        for e, c in minor.items():
            reduced_exps = e[:iw] + (0,) + e[iw + 1:]
            by_power.setdefault(e[iw], {})[reduced_exps] = c
        for power in sorted(by_power):
            coefficient = Poly(varset, by_power[power])
            if not coefficient.is_zero() and coefficient not in equations:
                equations.append(coefficient)
    equations = [_transfer(p, reduced) for p in equations]
    return SingularitySystem(varset, jacobian, minors, equations[0], equations)


def _transfer(p: Poly, target: VarSet) -> Poly:
    """Re-express a polynomial over another VarSet holding every variable it uses"""
    terms = {}
    for e, c in p.items():
        powers = {n: k for n, k in zip(p.varset.names, e) if k}
        if any(n not in target for n in powers):
            raise VarSetMismatch(f"{p} involves variables outside {target}")
        terms[tuple(powers.get(n, 0) for n in target.names)] = c
    return Poly(target, terms)


def system_has_solution(equations: Sequence[Poly]) -> bool:
    """
    Whether univariate equations in x0 share a root over the algebraic closure

    Decided by the degree of their gcd.
    """
    if not equations:
        return True
    varset = equations[0].varset
    if varset.names != ('x0',):
        raise NotApplicable(f"solvability is decided for numeric systems in x0 only, got {varset}")
    common = equations[0]
    for p in equations[1:]:
        common = gcd(common, p)
    return common.total_degree > 0


# Coefficient dictionary and elimination

def _coefficient(p: Poly, powers: Mapping[str, int], target: VarSet) -> Poly:
    """Coefficient of a monomial in (x, y, z, t), as a polynomial in the remaining variables"""
    idx = [(p.varset.index(n), powers.get(n, 0)) for n in NORMAL_VARS.names]
    picked = Poly(p.varset, {e: c for e, c in p.items() if all(e[i] == k for i, k in idx)})
    if picked.is_zero():
        return Poly.zero(target)
    return _transfer(picked.restrict({n: 1 for n in NORMAL_VARS.names}), target)


def read_dictionary(f: Poly, w1: Poly, target: VarSet) -> Dict[str, Poly]:
    """
    The coefficient dictionary of the singularity system

    Each entry is read on the W1 chart and again from the normal form;
    the two readings must agree.

    Raises:
        ChartMismatch: a W1 coefficient differs from the normal-form one
    """
    values = {}
    for label, on_chart, in_equation in DICTIONARY:
        read = _coefficient(w1, on_chart, target)
        given = _coefficient(f, in_equation, target)
        if read != given:
            raise ChartMismatch(f"{label}: W1 gives {read}, the normal form gives {given}")
        values[label] = read
    return values


def displayed_system(dictionary: Mapping[str, Poly]) -> List[Poly]:
    """
    The system in x0 written from the dictionary

    (2 x0 + b)(x0 + f00), (c x0 + phi2_t)(x0 + f00), phi2_y (x0 + f00),
    psi00 x0 + phi1 and x0^2 + b x0 + phi2.
    """
    d = dictionary
    x0 = Poly.variable(d['b'].varset, 'x0')
    shifted = x0 + d['f00']
    return [
        (2 * x0 + d['b']) * shifted,
        (d['c'] * x0 + d['phi2_t']) * shifted,
        d['phi2_y'] * shifted,
        d['psi00'] * x0 + d['phi1'],
        x0 ** 2 + d['b'] * x0 + d['phi2'],
    ]


def eliminate_x0(point: Poly, equations: Sequence[Poly]) -> Elimination:
    """
    Eliminate x0 from point = 0 and equations = 0

    Takes Res_x0(point, sum s^i g_i); it vanishes identically in s exactly
    when some root of point is a common root of every g_i. Its coefficients
    in s are the returned conditions.
    """
    varset = point.varset
    if ELIMINATION_PARAMETER in varset:
        raise VarSetMismatch(f"{ELIMINATION_PARAMETER!r} is already a variable of {varset}")
    if point.degree_in('x0') < 1:
        raise NotApplicable(f"point equation {point} does not involve x0")
    extended = varset.extend(ELIMINATION_PARAMETER)
    s = Poly.variable(extended, ELIMINATION_PARAMETER)
    combined = Poly.zero(extended)
    for i, g in enumerate(equations):
        combined = combined + g.embed(extended) * s ** i
    eliminated = resultant(point.embed(extended), combined, 'x0')
    i_s = extended.index(ELIMINATION_PARAMETER)
    by_power: Dict[int, Dict] = {}
    for e, c in eliminated.items():
        by_power.setdefault(e[i_s], {})[e[:i_s] + e[i_s + 1:]] = c
    conditions: List[Poly] = []
    for power in sorted(by_power):
        condition = Poly(varset, by_power[power]).normalized()
        if not condition.is_zero() and condition not in conditions:
            conditions.append(condition)
    return Elimination(varset, conditions)


def check_condition_locus(elimination: Elimination, dictionary: Mapping[str, Poly]) -> List[str]:
    """
    Check that every elimination condition vanishes on each condition component

    Needs the entries a component prescribes to be free coefficients.

    Returns:
        The names of the checked components

    Raises:
        NotApplicable: a prescribed entry is not a single variable
        ChartMismatch: a condition survives on a component
    """
    checked = []
    for name, images in COMPONENTS.items():
        mapping = {}
        for label, image in images(dictionary).items():
            value = dictionary[label]
            used = value.variables()
            if len(used) != 1 or value != Poly.variable(value.varset, used[0]):
                raise NotApplicable(f"{label} = {value} is not a free coefficient")
            mapping[used[0]] = image if isinstance(image, Poly) else Poly.constant(value.varset, image)
        for condition in elimination.conditions:
            rest = condition.substitute(mapping, elimination.varset)
            if not rest.is_zero():
                raise ChartMismatch(f"condition {condition} does not vanish on component ({name}): {rest}")
        checked.append(name)
    return checked


def replay_theorem_charts(source: Union[D5NormalForm, Poly]) -> ChartTrace:
    """
    Replay the blow-ups W, W1, W2 on a Case 2 normal form

    Args:
        source: A D5NormalForm, or a normal-form equation over (x, y, z, t)
            possibly extended by symbolic coefficient variables

    Returns:
        ChartTrace; solvable is filled in for numeric inputs

    Raises:
        NotApplicable: the input is in Case 1 or cD4
        ChartMismatch: a computed chart differs from the expected one, or the
            singularity system disagrees with the condition report
    """
    nf = source if isinstance(source, D5NormalForm) else None
    if nf is not None:
        if case_split(nf) is not Case.CASE2:
            raise NotApplicable("the replay needs a Case 2 normal form")
        f = nf.to_poly()
    else:
        f = source
    _check_case2(f)

    w = blowup_coordinate_center(f, CURVE_CENTER, 't')
    w_divisors = exceptional_divisors(w, ['E', 'F'])
    labels = [d.label for d in w_divisors]
    x, y, z, t = (_variable(w.varset, n) for n in NORMAL_VARS.names)
    if labels != ['E', 'F'] or w_divisors[0].ideal != Ideal.of(x, t) or w_divisors[1].ideal != Ideal.of(z, t):
        raise ChartMismatch(f"exceptional components of W are {[str(d.ideal) for d in w_divisors]}")

    w1 = blowup_coordinate_center(w.strict_transform, DIVISOR_CENTER, 't')
    expected = expected_divisor_chart(f)
    if w1.strict_transform != expected:
        raise ChartMismatch(f"W1 chart is {w1.strict_transform}, expected {expected}")
    w1_divisors = exceptional_divisors(w1, ['F1', 'EW1'])
    e_transform = strict_transform_of_divisor(w_divisors[0].ideal, w1)
    if len(w1_divisors) != 2 or w1_divisors[0].ideal != Ideal.of(z, t) or w1_divisors[1].ideal != e_transform:
        raise ChartMismatch(f"exceptional components of W1 are {[str(d.ideal) for d in w1_divisors]}")

    g = split_generator(w1.strict_transform)
    _, w2 = blowup_two_generator_ideal(w1.strict_transform, t ** 2, g, ratio=RATIO)
    w2_divisors = exceptional_divisors(w2)
    relation = w2.ambient_relations[0]
    logger.debug("W2 chart: %s = 0, %s = 0", relation, w2.strict_transform)

    v2 = w2.varset
    curve_equations = [relation.restrict({'z': 0, 't': 0}), _variable(v2, 'z'), _variable(v2, 't'),
                       w2.strict_transform.restrict({'z': 0, 't': 0})]
    system = singularity_system(relation, w2.strict_transform)

    reduced = system.point_equation.varset
    dictionary = read_dictionary(f, w1.strict_transform, reduced)
    displayed = displayed_system(dictionary)
    if not same_ideal(system.equations, displayed):
        raise ChartMismatch(f"derived system {[str(p) for p in system.equations]} differs from "
                            f"{[str(p) for p in displayed]}")
    elimination = eliminate_x0(system.point_equation, system.equations[1:])

    trace = ChartTrace(
        steps=[ChartStep('W', w, w_divisors), ChartStep('W1', w1, w1_divisors), ChartStep('W2', w2, w2_divisors)],
        generator=g,
        curve_equations=curve_equations,
        system=system,
        dictionary=dictionary,
        displayed=displayed,
        elimination=elimination,
    )
    if system.varset.names != ('x0', RATIO):
        try:
            trace.locus = check_condition_locus(elimination, dictionary)
        except NotApplicable as e:
            logger.info("condition locus not checked: %s", e)
    else:
        trace.solvable = system_has_solution(system.equations)
        if trace.solvable != elimination.vanishes():
            raise ChartMismatch(f"gcd says solvable={trace.solvable}, elimination leaves "
                                f"{[str(c) for c in elimination.conditions]}")
        if nf is not None:
            report = condition_report(nf)
            if trace.solvable != (report.holds_i or report.holds_ii):
                raise ChartMismatch(
                    f"singular curves {'exist' if trace.solvable else 'do not exist'} on W2 but the "
                    f"condition report says (i)={report.holds_i}, (ii)={report.holds_ii}")
    logger.info("replayed %d charts, %d equations in x0", len(trace.steps), len(system.equations))
    return trace
