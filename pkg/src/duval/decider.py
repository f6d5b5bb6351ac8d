"""
D5 Decider

Reduction of a cD5 germ with a marked smooth curve to the normal form

    x^2 + y^2 z + x z^2 + t (x z psi(z,t) + a x t^k + phi(y,z,t)) = 0

with the curve at (x, y, t), and the terminal-contraction decision read
off from its coefficients. The reduction works on jets: every coordinate
change and unit is applied up to the degree bound only.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .classifier import DuValType, classify_duval
from .config import get_settings
from .errors import DFlPosition, InputNotNormalForm, NotD5, ReductionDiverged, VarSetMismatch
from .ideals import Ideal, monomials_of_degree
from .poly import Exponents, JetBound, Poly, VarSet
from .resolution import curve_position
from .sympy_bridge import SparseRow, invert, solve_linear

logger = logging.getLogger(__name__)

NORMAL_VARS = VarSet.of('x', 'y', 'z', 't')
PSI_VARS = VarSet.of('z', 't')
SECTION_VARS = VarSet.of('x', 'y', 'z')

# the hyperplane section t = alpha*x + beta*y through the curve
SECTION_SLOPES = (Fraction(2, 7), Fraction(-3, 5))

D5 = DuValType('D', 5)
X2, Y2Z, XZ2 = (2, 0, 0, 0), (0, 2, 1, 0), (1, 0, 2, 0)
FIXED = (X2, Y2Z, XZ2)

MAX_VISITS_PER_DEGREE = 4

PhiKey = Tuple[int, int, int]


def _var(name: str) -> Poly:
    return Poly.variable(NORMAL_VARS, name)


def _monomial(exps: Exponents) -> Poly:
    return Poly(NORMAL_VARS, {exps: 1})


def _format_monomial(exps: Exponents) -> str:
    return str(_monomial(exps))


@dataclass
class D5NormalForm:
    """Coefficient record of the normal form"""

    psi: Poly
    a: Fraction
    k: int
    b: Fraction
    phi: Dict[PhiKey, Fraction] = field(default_factory=dict)
    degree_bound: JetBound = field(default_factory=lambda: JetBound(get_settings().reduction_jet))

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        """Coefficient of y^i z^j t^k in phi"""
        return self.phi.get((i, j, k), Fraction(0))

    @property
    def psi0(self) -> Fraction:
        return self.psi.constant_term

    def to_poly(self) -> Poly:
        """The normal-form equation over (x, y, z, t)"""
        x, y, z, t = (_var(n) for n in NORMAL_VARS.names)
        bracket = x * z * self.psi.embed(NORMAL_VARS) + x * t ** self.k * self.a
        for (i, j, k), c in self.phi.items():
            bracket = bracket + Poly.monomial(NORMAL_VARS, {'y': i, 'z': j, 't': k}, c)
        return x ** 2 + y ** 2 * z + x * z ** 2 + t * bracket

    def describe(self) -> dict:
        return {
            'psi': str(self.psi),
            'a': str(self.a),
            'k': self.k,
            'b': str(self.b),
            'phi': {f"a_{i},{j},{k}": str(c) for (i, j, k), c in sorted(self.phi.items())},
            'degree_bound': self.degree_bound.degree,
        }


class Case(Enum):
    CASE1 = 'Case1'
    CASE2 = 'Case2'


@dataclass(frozen=True)
class ConditionReport:
    """Quantities whose simultaneous vanishing obstructs a terminal contraction"""

    condition_i: Tuple[Fraction, Fraction, Fraction, Fraction]
    condition_ii: Tuple[Fraction, Fraction]
    flags: Tuple[str, ...] = ()

    @property
    def holds_i(self) -> bool:
        return not any(self.condition_i)

    @property
    def holds_ii(self) -> bool:
        return not any(self.condition_ii)

    def describe(self) -> dict:
        return {
            'condition_i': [str(v) for v in self.condition_i],
            'condition_ii': [str(v) for v in self.condition_ii],
            'holds_i': self.holds_i,
            'holds_ii': self.holds_ii,
            'flags': list(self.flags),
        }


TERMINAL_EXISTS = 'TerminalExists'
NO_TERMINAL_CONTRACTION = 'NoTerminalContraction'
NOT_APPLICABLE = 'NotApplicable'


@dataclass(frozen=True)
class Verdict:
    """Outcome of the terminal-contraction decision"""

    tag: str
    index: Optional[int] = None
    violated: Optional[str] = None
    reason: Optional[str] = None

    @classmethod
    def terminal_exists(cls, index: int = 4) -> 'Verdict':
        return cls(TERMINAL_EXISTS, index=index)

    @classmethod
    def no_contraction(cls, violated: str) -> 'Verdict':
        return cls(NO_TERMINAL_CONTRACTION, violated=violated)

    @classmethod
    def not_applicable(cls, reason: str) -> 'Verdict':
        return cls(NOT_APPLICABLE, reason=reason)

    def describe(self) -> dict:
        out = {'tag': self.tag}
        for key in ('index', 'violated', 'reason'):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def __str__(self) -> str:
        if self.tag == TERMINAL_EXISTS:
            return f"{self.tag}{{index: {self.index}}}"
        if self.tag == NO_TERMINAL_CONTRACTION:
            return f"{self.tag}{{{self.violated}}}"
        return f"{self.tag}{{{self.reason}}}"


# Curve alignment and the section check

def _linear_row(g: Poly, names: Sequence[str]) -> List[Fraction]:
    if g.is_zero() or g.homogeneous_part(1) != g:
        raise InputNotNormalForm(f"curve generator {g} is not a linear form")
    return [g.coefficient({n: 1}) for n in names]


def align_curve(f: Poly, gamma: Ideal) -> Poly:
    """
    Linear change of coordinates after which the curve is (x, y, t)

    The three generators of the curve become x, y and t in that order; the
    first input variable completing them to a basis becomes z.

    Returns:
        f over the VarSet (x, y, z, t)
    """
    if f.varset.arity != 4:
        raise VarSetMismatch(f"threefold germs need four variables, got {f.varset}")
    if gamma.varset != f.varset:
        raise VarSetMismatch(f"curve over {gamma.varset}, equation over {f.varset}")
    if len(gamma.generators) != 3:
        raise InputNotNormalForm(f"{gamma} is not cut out by three linear forms")
    names = f.varset.names
    rows = [_linear_row(g, names) for g in gamma.generators]
    inverse = None
    for j in range(4):
        try:
            inverse = invert(rows + [[Fraction(int(i == j)) for i in range(4)]])
            break
        except ValueError:
            continue
    if inverse is None:
        raise InputNotNormalForm(f"{gamma} is not a smooth curve")

    new = [_var(n) for n in ('x', 'y', 't', 'z')]
    mapping = {}
    for i, name in enumerate(names):
        image = Poly.zero(NORMAL_VARS)
        for coeff, v in zip(inverse[i], new):
            if coeff:
                image = image + v * coeff
        mapping[name] = image
    aligned = f.substitute(mapping, NORMAL_VARS)
    if not aligned.restrict({'x': 0, 'y': 0, 't': 0}).is_zero():
        raise InputNotNormalForm(f"the curve {gamma} does not lie on {f} = 0")
    return aligned


def hyperplane_section(g: Poly) -> Poly:
    """The surface t = alpha*x + beta*y through the curve, over (x, y, z)"""
    alpha, beta = SECTION_SLOPES
    x, y, z = (Poly.variable(SECTION_VARS, n) for n in SECTION_VARS.names)
    return g.substitute({'x': x, 'y': y, 'z': z, 't': x * alpha + y * beta}, SECTION_VARS)


def check_section(g: Poly) -> str:
    """
    Classify the hyperplane section through the curve (x, y, t)

    Returns:
        'DF_r'

    Raises:
        NotD5: the section is not a D5 germ
        DFlPosition: the curve meets the long arm of the D5 graph
    """
    section = hyperplane_section(g)
    kind = classify_duval(section)
    if kind != D5:
        raise NotD5(f"hyperplane section through the curve is {kind}, not D5")
    curve = Ideal.of(Poly.variable(SECTION_VARS, 'x'), Poly.variable(SECTION_VARS, 'y'))
    try:
        position = curve_position(section, curve)
    except InputNotNormalForm:
        # fork ends over a non-split cone are conjugate and carry no rational curve
        position = 'DF_l'
    logger.debug("section %s is D5 with the curve in position %s", section, position)
    if position == 'DF_l':
        raise DFlPosition(f"the curve meets the long arm of the D5 graph of {section}")
    return position


# Allowed monomials of the normal form

def _lowest_xt(g: Poly) -> Optional[int]:
    powers = [e[3] for e, _ in g.items() if e[0] == 1 and not e[1] and not e[2] and e[3] >= 2]
    return min(powers, default=None)


def _allowed(exps: Exponents, lowest_xt: Optional[int]) -> bool:
    ex, ey, ez, et = exps
    degree = sum(exps)
    if degree <= 1:
        return False
    if degree == 2:
        return exps == X2
    if exps in (Y2Z, XZ2):
        return True
    if ex >= 2:
        return False
    if ex == 1:
        if ey:
            return False
        if ez and et:
            return True
        return not ez and et >= 2 and (lowest_xt is None or et <= lowest_xt)
    if not et:
        return False
    if not ey and et == 1:
        return False
    return (ey, ez, et) not in ((2, 0, 1), (1, 1, 1))


def _dirty_degree(g: Poly) -> Optional[int]:
    """Lowest degree carrying a forbidden monomial or a wrong fixed coefficient"""
    lowest = _lowest_xt(g)
    bad = [sum(e) for e, _ in g.items() if not _allowed(e, lowest)]
    if g.coefficient(X2) != 1:
        bad.append(2)
    if g.coefficient(Y2Z) != 1 or g.coefficient(XZ2) != 1:
        bad.append(3)
    return min(bad, default=None)


# Reduction steps

def _complete_square(g: Poly, D: int) -> Poly:
    """Make the quadratic part x^2, keeping the curve at (x, y, t)"""
    quadratic = g.homogeneous_part(2)
    pivot = next((v for v in ('x', 'y', 't') if quadratic.coefficient({v: 2})), None)
    if pivot is None:
        raise ReductionDiverged(f"quadratic part {quadratic} is not a square in x, y, t")
    lam = quadratic.coefficient({pivot: 2})
    others = [v for v in ('x', 'y', 't') if v != pivot]
    ratios = {v: quadratic.coefficient({pivot: 1, v: 1}) / (2 * lam) for v in others}
    root = _var(pivot)
    for v in others:
        root = root + _var(v) * ratios[v]
    if root * root * lam != quadratic:
        raise ReductionDiverged(f"quadratic part {quadratic} has rank above one")

    swap = {pivot: 'x', 'x': pivot}
    mapping = {v: _var(swap.get(v, v)) for v in others}
    image = _var('x')
    for v in others:
        image = image - mapping[v] * ratios[v]
    mapping[pivot] = image
    return g.substitute(mapping, NORMAL_VARS, bound=D) / lam


def _cubic_stage(g: Poly, D: int) -> Poly:
    """Bring the cubic part to y^2 z + x z^2 + (x z t, x t^2, y t^2, z t^2, t^3)"""
    x, y, z, t = (_var(n) for n in NORMAL_VARS.names)

    def c(**powers) -> Fraction:
        return g.coefficient(powers)

    for powers in ({'y': 1, 'z': 2}, {'z': 2, 't': 1}):
        if c(**powers):
            raise ReductionDiverged(f"{Poly.monomial(NORMAL_VARS, powers)} survives in the cubic part",
                                    monomial=str(Poly.monomial(NORMAL_VARS, powers)))
    e_yyz = c(y=2, z=1)
    if not e_yyz:
        raise ReductionDiverged("the cubic part has no y^2*z term", monomial='y^2*z')

    shift = c(y=1, z=1, t=1) / (2 * e_yyz)
    if shift:
        g = g.substitute({'y': y - t * shift}, NORMAL_VARS, bound=D)
    tschirnhaus = (y * c(y=3) + t * c(y=2, t=1)) / e_yyz
    if not tschirnhaus.is_zero():
        g = g.substitute({'z': z - tschirnhaus}, NORMAL_VARS, bound=D)

    unit = x * c(x=3) + y * c(x=2, y=1) + z * c(x=2, z=1) + t * c(x=2, t=1)
    if not unit.is_zero():
        g = (g * (1 - unit)).truncate(D)
    cross = (y * y * c(x=1, y=2) + y * z * c(x=1, y=1, z=1) + y * t * c(x=1, y=1, t=1)) / 2
    if not cross.is_zero():
        g = g.substitute({'x': x - cross}, NORMAL_VARS, bound=D)

    c_xx, c_yyz, c_xzz = c(x=2), c(y=2, z=1), c(x=1, z=2)
    if not c_xzz:
        raise ReductionDiverged("the cubic part has no x*z^2 term", monomial='x*z^2')
    gamma = c_xx / c_yyz
    alpha = c_xzz * gamma ** 2 / c_xx
    if (alpha, gamma) != (1, 1):
        g = g.substitute({'x': x * alpha, 'y': y * alpha, 'z': z * gamma}, NORMAL_VARS, bound=D)
        g = g / (c_xx * alpha ** 2)
    return g


def _in_curve_ideal(exps: Exponents) -> bool:
    return bool(exps[0] or exps[1] or exps[3])


def _candidate_moves(d: int) -> List[Tuple[str, Exponents]]:
    """
    Coordinate changes and units whose first-order effect starts at degree d

    Moves come as (kind, m): 'x', 'y', 'z', 't' substitute v -> v - s*m and
    'u' multiplies by 1 - s*m. Moves acting from degree d first, then the
    moves whose effect starts at degree d - 1.
    """
    moves = []
    for e in monomials_of_degree(4, d - 1):
        if not e[0] and (e[1] or e[3]):
            moves.append(('x', e))
    for e in monomials_of_degree(4, d - 2):
        if _in_curve_ideal(e):
            moves += [('y', e), ('t', e)]
        moves += [('z', e), ('u', e)]

    for e in monomials_of_degree(4, d - 2):
        if not e[0] and (e[1] or e[3]):
            moves.append(('x', e))
    for e in monomials_of_degree(4, d - 3):
        moves.append(('u', e))
        if d == 4:
            # second-order terms of these would reach the cubic part
            if not e[1] and not e[2]:
                moves.append(('y', e))
            if not e[2]:
                moves.append(('z', e))
            continue
        if _in_curve_ideal(e):
            moves += [('y', e), ('t', e)]
        moves.append(('z', e))
    return moves


def _clear_degree(g: Poly, d: int, D: int) -> Poly:
    """One linear solve removing the forbidden monomials of degree d"""
    lowest = _lowest_xt(g)
    targets = [e for e in monomials_of_degree(4, d) if not _allowed(e, lowest)]
    guards = [e for e in monomials_of_degree(4, d - 1) if not _allowed(e, lowest) or e in FIXED]
    moves = _candidate_moves(d)
    base = g.truncate(d)
    partials = {v: base.partial(v) for v in NORMAL_VARS.names}

    rows: List[SparseRow] = [{} for _ in targets + guards]
    position = {e: i for i, e in enumerate(targets + guards)}
    for j, (kind, m) in enumerate(moves):
        source = base if kind == 'u' else partials[kind]
        effect = (_monomial(m) * source).truncate(d)
        for e, c in effect.items():
            i = position.get(e)
            if i is not None:
                rows[i][j] = -c
    rhs = [-g.coefficient(e) for e in targets] + [Fraction(0)] * len(guards)

    solution = solve_linear(rows, rhs, len(moves))
    if solution is None:
        survivor = next((e for e in targets if g.coefficient(e)), targets[0])
        raise ReductionDiverged(f"cannot clear the degree {d} part of {g}",
                                monomial=_format_monomial(survivor))

    shifts = {v: Poly.zero(NORMAL_VARS) for v in NORMAL_VARS.names}
    unit = Poly.zero(NORMAL_VARS)
    for (kind, m), s in zip(moves, solution):
        if not s:
            continue
        if kind == 'u':
            unit = unit + _monomial(m) * s
        else:
            shifts[kind] = shifts[kind] + _monomial(m) * s
    mapping = {v: _var(v) - shift for v, shift in shifts.items() if not shift.is_zero()}
    if mapping:
        g = g.substitute(mapping, NORMAL_VARS, bound=D)
    if not unit.is_zero():
        g = (g * (1 - unit)).truncate(D)
    return g


def _read_off(g: Poly, bound: JetBound) -> D5NormalForm:
    lowest = _lowest_xt(g)
    psi_terms: Dict[Tuple[int, int], Fraction] = {}
    phi: Dict[PhiKey, Fraction] = {}
    a = Fraction(0)
    for e, c in g.items():
        ex, ey, ez, et = e
        if e in FIXED:
            continue
        if not _allowed(e, lowest):
            raise ReductionDiverged(f"{_format_monomial(e)} survives the reduction",
                                    monomial=_format_monomial(e))
        if ex == 1 and ez:
            psi_terms[(ez - 1, et - 1)] = c
        elif ex == 1:
            a = c
        else:
            phi[(ey, ez, et - 1)] = c
    k = lowest - 1 if lowest is not None else 1
    return D5NormalForm(
        psi=Poly(PSI_VARS, psi_terms),
        a=a,
        k=k,
        b=g.coefficient((1, 0, 0, 2)),
        phi=phi,
        degree_bound=bound,
    )


def reduce_to_normal_form(f: Poly, gamma: Ideal, bound: Optional[JetBound] = None) -> D5NormalForm:
    """
    Normal form of a cD5 germ with a marked DF_r curve

    Args:
        f: Germ over four variables with f(0) = 0
        gamma: Smooth curve on f = 0, given by three linear forms
        bound: Jet bound of the reduction (default: DUVAL_REDUCTION_JET)

    Returns:
        D5NormalForm read off the reduced jet

    Raises:
        NotD5: the hyperplane section through the curve is not D5
        DFlPosition: the curve is in DF_l position
        ReductionDiverged: a forbidden monomial survives at degree <= D
    """
    bound = bound or JetBound(get_settings().reduction_jet)
    D = bound.degree
    g = align_curve(f, gamma)
    check_section(g)
    g = _complete_square(g.truncate(D), D)
    g = _cubic_stage(g, D)

    visits: Dict[int, int] = {}
    while True:
        d = _dirty_degree(g)
        if d is None:
            break
        if d < 3:
            raise ReductionDiverged(f"degree {d} part of {g} is not x^2")
        visits[d] = visits.get(d, 0) + 1
        if visits[d] > MAX_VISITS_PER_DEGREE:
            lowest = _lowest_xt(g)
            survivor = next(e for e, _ in g.items() if sum(e) == d and not _allowed(e, lowest))
            raise ReductionDiverged(f"degree {d} does not settle", monomial=_format_monomial(survivor))
        logger.debug("clearing degree %d (visit %d)", d, visits[d])
        g = _cubic_stage(g, D) if d == 3 else _clear_degree(g, d, D)

    nf = _read_off(g, bound)
    logger.info("normal form: psi=%s a=%s k=%d b=%s, %d phi terms", nf.psi, nf.a, nf.k, nf.b, len(nf.phi))
    return nf


# Decision

def case_split(nf: D5NormalForm) -> Case:
    """Case1 when y*t or t^2 occurs in the quadratic part of phi"""
    if nf.coefficient(1, 0, 1) or nf.coefficient(0, 0, 2):
        return Case.CASE1
    return Case.CASE2


def condition_report(nf: D5NormalForm) -> ConditionReport:
    a = nf.coefficient
    b, psi0 = nf.b, nf.psi0
    condition_i = (a(0, 0, 4), a(1, 0, 2), 2 * a(0, 1, 2) - b * psi0, 4 * a(0, 0, 3) - b * b)
    condition_ii = (a(0, 2, 1) ** 2 - b * a(0, 2, 1) + a(0, 0, 3), a(0, 1, 2) - a(0, 2, 1) * psi0)

    flags = []
    if case_split(nf) is Case.CASE1 or a(0, 1, 1):
        flags.append('cD4')
    if a(0, 0, 2) and not a(1, 0, 1):
        flags.append('t2-without-yt')
    return ConditionReport(condition_i, condition_ii, tuple(flags))


def decide_terminal(nf: D5NormalForm) -> Tuple[Verdict, ConditionReport]:
    """
    Decide whether a terminal divisorial contraction to the germ exists

    Returns:
        (Verdict, ConditionReport); the report is filled in every case
    """
    report = condition_report(nf)
    if 'cD4' in report.flags:
        verdict = Verdict.terminal_exists(4)
    elif report.holds_i:
        verdict = Verdict.no_contraction('ConditionI')
    elif report.holds_ii:
        verdict = Verdict.no_contraction('ConditionII')
    else:
        verdict = Verdict.terminal_exists(4)
    logger.info("%s: %s", case_split(nf).value, verdict)
    return verdict, report
