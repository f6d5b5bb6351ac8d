"""
Blow-up Engine

Chart-by-chart blow-ups of affine hypersurfaces along coordinate centers,
weighted points (weight-one charts only) and two-generator ideals, with
strict transforms, exceptional components and discrepancy bookkeeping.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    DegenerateCenter,
    NotApplicable,
    QuotientChartUnsupported,
    UnsupportedCenter,
    ZeroPolynomialError,
)
from .ideals import Ideal
from .poly import Poly, VarSet
from .sympy_bridge import exact_divide, factor

logger = logging.getLogger(__name__)

DEFAULT_LABELS = ('E', 'F')


@dataclass(frozen=True)
class CoordinateCenter:
    variables: Tuple[str, ...]


@dataclass(frozen=True)
class WeightedPoint:
    weights: Tuple[Tuple[str, int], ...]


@dataclass(frozen=True)
class TwoGeneratorIdeal:
    g1: Poly
    g2: Poly


BlowupSpec = Union[CoordinateCenter, WeightedPoint, TwoGeneratorIdeal]


@dataclass
class Chart:
    """One affine chart of a blow-up"""

    name: str
    kind: str
    source: VarSet
    varset: VarSet
    center: Tuple[str, ...]
    substitution: Dict[str, Poly]
    exceptional_coordinate: str
    exceptional_generator: Poly
    multiplicity: int
    strict_transform: Poly
    total_transform: Poly
    ambient_relations: List[Poly] = field(default_factory=list)
    weights: Optional[Dict[str, int]] = None

    def exceptional_ideal(self) -> Ideal:
        """Cartier exceptional divisor on the strict transform (generator, relations, equation)"""
        return Ideal((self.exceptional_generator,) + tuple(self.ambient_relations) + (self.strict_transform,))

    def lift_point(self, point: Mapping[str, Fraction]) -> Dict[str, Fraction]:
        """
        Chart coordinates of a source point off the exceptional locus

        Only for coordinate and weighted charts; the chart coordinate must
        be nonzero at the point.
        """
        if self.kind == 'two-generator':
            raise NotApplicable("points lift only through variable substitutions")
        c = self.exceptional_coordinate
        value = Fraction(point[c])
        if not value:
            raise ValueError(f"point lies on the exceptional locus {c}=0")
        lifted = {}
        for name in self.source.names:
            v = Fraction(point[name])
            if name != c and name in self.center:
                w = self.weights[name] if self.weights else 1
                v = v / value ** w
            lifted[name] = v
        return lifted

    def describe(self) -> dict:
        return {
            'name': self.name,
            'kind': self.kind,
            'vars': list(self.varset.names),
            'substitution': {k: str(v) for k, v in self.substitution.items()},
            'exceptional_coordinate': self.exceptional_coordinate,
            'exceptional_generator': str(self.exceptional_generator),
            'm': self.multiplicity,
            'strict': str(self.strict_transform),
            'total': str(self.total_transform),
            'ambient_relations': [str(r) for r in self.ambient_relations],
        }


@dataclass(frozen=True)
class DivisorInChart:
    label: str
    ideal: Ideal

    def describe(self) -> dict:
        return {'label': self.label, 'ideal': str(self.ideal)}


def _substitution_name(substitution: Mapping[str, Poly]) -> str:
    return ', '.join(f"{name}={image}".replace('*', '') for name, image in substitution.items())


def blowup_coordinate_center(f: Poly, center: Sequence[str], chart_var: str) -> Chart:
    """
    Blow up the coordinate center (v1, ..., vc) in the chart of one variable

    Args:
        f: Defining equation
        center: Center variables (at least two)
        chart_var: Center variable whose chart is taken

    Returns:
        The chart, with v -> v*chart_var for the other center variables
    """
    if f.is_zero():
        raise ZeroPolynomialError("cannot blow up the zero polynomial")
    center = tuple(center)
    if len(center) < 2:
        raise UnsupportedCenter(f"a coordinate center needs at least two variables, got {center}")
    for name in center:
        f.varset.index(name)
    if chart_var not in center:
        raise UnsupportedCenter(f"chart variable {chart_var} is not in the center {center}")

    varset = f.varset
    c = Poly.variable(varset, chart_var)
    substitution = {v: Poly.variable(varset, v) * c for v in center if v != chart_var}
    total = f.substitute(substitution, varset)
    m, strict = total.divide_by_power(chart_var)
    logger.debug("blow-up %s chart %s: m=%d strict=%s", center, chart_var, m, strict)
    return Chart(
        name=_substitution_name(substitution),
        kind='coordinate',
        source=varset,
        varset=varset,
        center=center,
        substitution=substitution,
        exceptional_coordinate=chart_var,
        exceptional_generator=c,
        multiplicity=m,
        strict_transform=strict,
        total_transform=total,
    )


def weighted_blowup_point(f: Poly, weights: Mapping[str, int], chart_var: str) -> Chart:
    """
    Weighted blow-up of the origin, weight-one charts only

    Args:
        f: Defining equation
        weights: Positive weight per variable
        chart_var: Variable whose chart is taken; its weight must be 1

    Raises:
        QuotientChartUnsupported: the chart variable has weight above 1
    """
    if f.is_zero():
        raise ZeroPolynomialError("cannot blow up the zero polynomial")
    varset = f.varset
    w = dict(zip(varset.names, f.weight_vector(weights)))
    varset.index(chart_var)
    if w[chart_var] != 1:
        raise QuotientChartUnsupported(
            f"chart {chart_var} has weight {w[chart_var]}; only weight-one charts are smooth")
    c = Poly.variable(varset, chart_var)
    substitution = {v: Poly.variable(varset, v) * c ** w[v] for v in varset.names if v != chart_var}
    total = f.substitute(substitution, varset)
    m, strict = total.divide_by_power(chart_var)
    return Chart(
        name=_substitution_name(substitution),
        kind='weighted',
        source=varset,
        varset=varset,
        center=varset.names,
        substitution=substitution,
        exceptional_coordinate=chart_var,
        exceptional_generator=c,
        multiplicity=m,
        strict_transform=strict,
        total_transform=total,
        weights=w,
    )


def _pure_power(g: Poly) -> Optional[Tuple[str, int]]:
    if g.num_terms != 1 or g.is_constant():
        return None
    (mono, coeff), = g.terms()
    used = [(n, e) for n, e in zip(g.varset.names, mono.exponents) if e]
    if len(used) != 1 or coeff != 1:
        return None
    return used[0]


def _split_along(f: Poly, name: str, e: int, g: Poly) -> Tuple[Poly, Poly]:
    """Write f = A*name^e + B*g, solving for B degree by degree in name"""
    v = Poly.variable(f.varset, name)

    def coefficient(p: Poly, k: int) -> Poly:
        i = p.varset.index(name)
        terms = {}
        for exps, c in p.items():
            if exps[i] == k:
                reduced = list(exps)
                reduced[i] = 0
                terms[tuple(reduced)] = c
        return Poly(p.varset, terms)

    g0 = coefficient(g, 0)
    if g0.is_zero():
        raise UnsupportedCenter(f"{g} vanishes along {name}=0")
    b = Poly.zero(f.varset)
    for k in range(e):
        residue = coefficient(f - b * g, k)
        if residue.is_zero():
            continue
        piece = exact_divide(residue, g0)
        if piece is None:
            raise UnsupportedCenter(f"{f} is not in the ideal ({name}^{e}, {g})")
        b = b + piece * v ** k
    a = exact_divide(f - b * g, v ** e)
    if a is None:
        raise UnsupportedCenter(f"{f} is not in the ideal ({name}^{e}, {g})")
    return a, b


def blowup_two_generator_ideal(f: Poly, g1: Poly, g2: Poly, ratio: str = 'u') -> Tuple[Chart, Chart]:
    """
    Blow up the ideal (g1, g2) where one generator is a power of a variable

    f is written as A*P + B*G with P the variable power. The first chart
    carries the relation P = ratio*G (exceptional generator G, strict
    A*ratio + B); the second carries G = ratio*P (exceptional generator P,
    strict A + B*ratio).

    Returns:
        (chart P=ratio*G, chart G=ratio*P)

    Raises:
        UnsupportedCenter: neither generator is a variable power, or f is
            not in the ideal
    """
    if f.is_zero() or g1.is_zero() or g2.is_zero():
        raise ZeroPolynomialError("blow-up data must be nonzero")
    if ratio in f.varset:
        raise UnsupportedCenter(f"ratio variable {ratio} already names a coordinate")
    if _pure_power(g2) is not None:
        p, g = g2, g1
    elif _pure_power(g1) is not None:
        p, g = g1, g2
    else:
        raise UnsupportedCenter(f"neither {g1} nor {g2} is a power of a single variable")
    name, e = _pure_power(p)
    a, b = _split_along(f, name, e, g)

    varset = f.varset.extend(ratio)
    s = Poly.variable(varset, ratio)
    A, B, P, G, F = (q.embed(varset) for q in (a, b, p, g, f))
    charts = []
    for exc, other, strict, label in (
        (G, P, A * s + B, f"{p} = {ratio}*({g})"),
        (P, G, A + B * s, f"{g} = {ratio}*({p})"),
    ):
        charts.append(Chart(
            name=label.replace('*', ''),
            kind='two-generator',
            source=f.varset,
            varset=varset,
            center=tuple(str(q) for q in (g1, g2)),
            substitution={},
            exceptional_coordinate=ratio,
            exceptional_generator=exc,
            multiplicity=1,
            strict_transform=strict,
            total_transform=exc * strict,
            ambient_relations=[other - s * exc],
        ))
    logger.debug("two-generator blow-up of (%s, %s): A=%s B=%s", g1, g2, a, b)
    return charts[0], charts[1]


def blowup(f: Poly, spec: BlowupSpec, chart: str, ratio: str = 'u') -> Chart:
    """Dispatch a BlowupSpec; for two-generator ideals chart is 'a' or 'b'"""
    if isinstance(spec, CoordinateCenter):
        return blowup_coordinate_center(f, spec.variables, chart)
    if isinstance(spec, WeightedPoint):
        return weighted_blowup_point(f, dict(spec.weights), chart)
    if isinstance(spec, TwoGeneratorIdeal):
        first, second = blowup_two_generator_ideal(f, spec.g1, spec.g2, ratio)
        if chart not in ('a', 'b'):
            raise UnsupportedCenter(f"two-generator charts are 'a' and 'b', got {chart!r}")
        return first if chart == 'a' else second
    raise TypeError(f"unknown blow-up spec {spec!r}")


def _exceptional_zero_variables(chart: Chart) -> List[str]:
    power = _pure_power(chart.exceptional_generator)
    if power is None:
        raise UnsupportedCenter(f"exceptional generator {chart.exceptional_generator} is not a variable power")
    zero = [power[0]]
    changed = True
    while changed:
        changed = False
        for relation in chart.ambient_relations:
            restricted = relation.restrict({v: 0 for v in zero})
            if restricted.num_terms == 1 and len(restricted.variables()) == 1:
                name = restricted.variables()[0]
                if name not in zero:
                    zero.append(name)
                    changed = True
    return zero


def default_labels(count: int) -> List[str]:
    labels = list(DEFAULT_LABELS[:count])
    labels.extend(f"F{i}" for i in range(1, count - len(labels) + 1))
    return labels


def exceptional_divisors(chart: Chart, labels: Optional[Sequence[str]] = None) -> List[DivisorInChart]:
    """
    Components of the exceptional locus on the strict transform

    The strict transform is restricted to the exceptional hyperplane and
    factored over QQ; each irreducible factor h gives the ideal (h, zero
    coordinates). Components are sorted by degree then printed form.

    Raises:
        DegenerateCenter: the strict transform vanishes on the whole hyperplane
    """
    zero = _exceptional_zero_variables(chart)
    restricted = chart.strict_transform.restrict({v: 0 for v in zero})
    if restricted.is_zero():
        raise DegenerateCenter(f"strict transform {chart.strict_transform} contains {zero}=0")
    _, factors = factor(restricted)
    gens = [Poly.variable(chart.varset, v) for v in zero]
    components = [h for h, _ in factors if not h.is_constant()]
    labels = list(labels) if labels is not None else default_labels(len(components))
    if len(labels) < len(components):
        labels += default_labels(len(components))[len(labels):]
    return [DivisorInChart(label, Ideal((h,) + tuple(gens))) for label, h in zip(labels, components)]


def dominating_components(chart: Chart) -> List[DivisorInChart]:
    """Exceptional components whose equation involves a ratio coordinate (they map onto the center)"""
    ratios = {n for n in chart.center if n != chart.exceptional_coordinate}
    result = []
    for divisor in exceptional_divisors(chart):
        h = divisor.ideal.generators[0]
        if ratios & set(h.variables()):
            result.append(divisor)
    return result


def strict_transform_of_divisor(divisor: Ideal, chart: Chart) -> Ideal:
    """
    Strict transform of a divisor ideal in a coordinate or weighted chart

    Each generator is pulled back and stripped of its exceptional power.
    When that yields the unit ideal and the chart blows up a two-variable
    center (a Weil divisor on the threefold), the transform is the
    exceptional component dominating the center.
    """
    if chart.kind == 'two-generator':
        raise NotApplicable("strict transforms of divisors need a variable substitution chart")
    gens = []
    for g in divisor.substitute(chart.substitution, chart.varset):
        if g.is_zero():
            continue
        _, stripped = g.divide_by_power(chart.exceptional_coordinate)
        gens.append(stripped)
    if any(g.is_constant() for g in gens):
        if len(chart.center) == 2:
            dominating = dominating_components(chart)
            if dominating:
                return dominating[0].ideal
        return Ideal((Poly.constant(chart.varset, 1),))
    return Ideal(tuple(gens))


def discrepancy_smooth_center(codim: int, multiplicity: int) -> int:
    """a(E, X) = c - 1 - m for a smooth center of ambient codimension c"""
    if codim < 2 or multiplicity < 0:
        raise ValueError(f"need codim >= 2 and m >= 0, got c={codim}, m={multiplicity}")
    return codim - 1 - multiplicity


GENERIC_VALUES = (2, 3, 5, 7, 11, 13, 17)


def center_multiplicity(f: Poly, center: Sequence[str], point: Optional[Mapping[str, Fraction]] = None) -> int:
    """
    Multiplicity of f along a coordinate center at a generic point

    The point (center coordinates zero, other coordinates generic) is moved
    to the origin and the order in the center variables is read off.
    """
    others = [n for n in f.varset.names if n not in center]
    if point is None:
        point = dict(zip(others, GENERIC_VALUES))
    shift = {n: Fraction(point.get(n, 0)) for n in others}
    return f.translate(shift).order_in(center)
