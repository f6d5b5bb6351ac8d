"""
Tests for the blow-up engine
"""

from fractions import Fraction

import pytest

from src.duval.blowup import (CoordinateCenter, TwoGeneratorIdeal, WeightedPoint, blowup,
                              blowup_coordinate_center, blowup_two_generator_ideal, center_multiplicity,
                              discrepancy_smooth_center, dominating_components, exceptional_divisors,
                              strict_transform_of_divisor, weighted_blowup_point)
from src.duval.errors import QuotientChartUnsupported, UnsupportedCenter, ZeroPolynomialError
from src.duval.grammar import parse_generators, parse_poly
from src.duval.ideals import Ideal
from src.duval.poly import Poly, VarSet

GENERIC_POINT = {'x': Fraction(2), 'y': Fraction(-3), 'z': Fraction(5), 't': Fraction(7), 'u': Fraction(1, 2)}


def ideal(text, varset):
    return Ideal(tuple(parse_generators(text, varset)))


def assert_chart_consistent(f, chart, point):
    lifted = chart.lift_point(point)
    exceptional = chart.exceptional_generator.evaluate(lifted)
    assert chart.total_transform == chart.exceptional_generator ** chart.multiplicity * chart.strict_transform
    assert chart.total_transform.evaluate(lifted) == f.evaluate(point)
    return exceptional ** chart.multiplicity * chart.strict_transform.evaluate(lifted)


def test_curve_blowup_of_index_jump_family():
    varset = VarSet.of('x y z t u')
    f = parse_poly('u*z^2 + x*y + z^3 + t^3', varset)
    chart = blowup_coordinate_center(f, ('x', 'z', 't'), 't')
    assert chart.strict_transform == parse_poly('u*z^2*t + x*y + z^3*t^2 + t^2', varset)
    assert chart.multiplicity == 1
    assert chart.name == 'x=xt, z=zt'
    divisors = exceptional_divisors(chart, ['E', 'F'])
    assert [d.label for d in divisors] == ['E', 'F']
    assert divisors[0].ideal == ideal('x, t', varset)
    assert divisors[1].ideal == ideal('y, t', varset)


def test_two_generator_blowup_of_2e():
    varset = VarSet.of('x y z t')
    f = parse_poly('x*y + z^3*t^2 + t^2', varset)
    x, t = Poly.variable(varset, 'x'), Poly.variable(varset, 't')
    chart_a, chart_b = blowup_two_generator_ideal(f, x, t ** 2, ratio='u')
    wide = chart_a.varset
    assert wide.names == ('x', 'y', 'z', 't', 'u')
    assert chart_a.ambient_relations == [parse_poly('t^2 - u*x', wide)]
    assert chart_a.strict_transform == parse_poly('y + z^3*u + u', wide)
    assert chart_b.ambient_relations == [parse_poly('x - u*t^2', wide)]
    assert chart_b.strict_transform == parse_poly('z^3 + 1 + y*u', wide)


def test_two_generator_blowup_rejects_bad_input():
    varset = VarSet.of('x y z t')
    f = parse_poly('x*y + t^2', varset)
    x, y = Poly.variable(varset, 'x'), Poly.variable(varset, 'y')
    with pytest.raises(UnsupportedCenter):
        blowup_two_generator_ideal(f, x + y, x * y)
    with pytest.raises(UnsupportedCenter):
        blowup_two_generator_ideal(f, x, Poly.variable(varset, 't') ** 2, ratio='y')
    with pytest.raises(UnsupportedCenter):
        blowup_two_generator_ideal(parse_poly('z', varset), x, y)


def test_double_blowup_family_charts():
    varset = VarSet.of('x y z u')
    f = parse_poly('x^2 + y^2*z + x*z^5 + u^3', varset)
    w = blowup_coordinate_center(f, ('x', 'y', 'u'), 'u')
    assert w.strict_transform == parse_poly('x^2*u + y^2*z*u + x*z^5 + u^2', varset)
    e, fdiv = exceptional_divisors(w, ['E', 'F'])
    assert e.ideal == ideal('x, u', varset)
    assert fdiv.ideal == ideal('z, u', varset)

    x = blowup_coordinate_center(w.strict_transform, ('x', 'u'), 'x')
    assert x.strict_transform == parse_poly('x^2*u + y^2*z*u + z^5 + u^2*x', varset)
    b, ex = exceptional_divisors(x, ['B', 'EX'])
    assert b.ideal == ideal('z, x', varset)
    assert ex.ideal == ideal('y^2*u + z^4, x', varset)
    assert [d.ideal for d in dominating_components(x)] == [ex.ideal]
    assert strict_transform_of_divisor(e.ideal, x) == ex.ideal
    assert strict_transform_of_divisor(fdiv.ideal, x) == ideal('z, u', varset)


def test_special_fibre_chart():
    varset = VarSet.of('x y z u')
    f = parse_poly('x^2 + y^2*z + x*z^5 + u^10', varset)
    chart = blowup(f, CoordinateCenter(('x', 'y', 'u')), 'u')
    assert chart.strict_transform == parse_poly('x^2*u + y^2*z*u + x*z^5 + u^9', varset)


def test_weighted_blowup_weight_one_chart(xyzt):
    f = parse_poly('x^2 + y^2*z + x*z^2 + t^3', xyzt)
    weights = {'x': 2, 'y': 1, 'z': 1, 't': 1}
    chart = weighted_blowup_point(f, weights, 't')
    assert chart.multiplicity == 3
    assert chart.strict_transform == parse_poly('x^2*t + y^2*z + x*z^2*t + 1', xyzt)
    assert chart.substitution['x'] == parse_poly('x*t^2', xyzt)
    with pytest.raises(QuotientChartUnsupported):
        weighted_blowup_point(f, weights, 'x')
    assert blowup(f, WeightedPoint(tuple(weights.items())), 'z').multiplicity == 3


def test_blowup_dispatch_for_two_generator_charts(xyzt):
    f = parse_poly('x*y + z^3*t^2 + t^2', xyzt)
    spec = TwoGeneratorIdeal(Poly.variable(xyzt, 'x'), Poly.variable(xyzt, 't') ** 2)
    assert blowup(f, spec, 'a').strict_transform.num_terms == 3
    with pytest.raises(UnsupportedCenter):
        blowup(f, spec, 'c')


def test_coordinate_center_errors(xyzt):
    f = parse_poly('x*y + z^2', xyzt)
    with pytest.raises(UnsupportedCenter):
        blowup_coordinate_center(f, ('x',), 'x')
    with pytest.raises(UnsupportedCenter):
        blowup_coordinate_center(f, ('x', 'z'), 't')
    with pytest.raises(ZeroPolynomialError):
        blowup_coordinate_center(Poly.zero(xyzt), ('x', 'z'), 'x')


@pytest.mark.parametrize('text, center', [
    ('u*z^2 + x*y + z^3 + t^3', ('x', 'z', 't')),
    ('x*y + y*u + x*u + u*t', ('x', 'u')),
    ('x^2 + y^2*z + x*z^5 + u^3', ('x', 'y', 'u')),
])
def test_charts_agree_on_overlaps(text, center):
    varset = VarSet.of('x y z t u')
    f = parse_poly(text, varset)
    values = [assert_chart_consistent(f, blowup_coordinate_center(f, center, c), GENERIC_POINT) for c in center]
    assert len(set(values)) == 1


def test_random_cubic_charts_agree_on_overlaps(sampler, xyzt):
    point = {n: GENERIC_POINT[n] for n in xyzt.names}
    center = ('x', 'y', 't')
    for _ in range(10):
        f = sampler.polynomial(xyzt, degree=3, terms=5, min_degree=1)
        if f.order_in(center) < 1:
            f = f * Poly.variable(xyzt, 'x')
        values = [assert_chart_consistent(f, blowup_coordinate_center(f, center, c), point) for c in center]
        assert len(set(values)) == 1


def test_multiplicity_matches_center_multiplicity(sampler, xyzt):
    center = ('x', 'z', 't')
    for _ in range(20):
        f = sampler.polynomial(xyzt, degree=4, terms=4, min_degree=1)
        chart = blowup_coordinate_center(f, center, 'z')
        assert chart.multiplicity == center_multiplicity(f, center)


@pytest.mark.parametrize('codim, m, expected', [
    (3, 1, 1),
    (2, 1, 0),
    (4, 3, 0),
    (2, 0, 1),
    (3, 0, 2),
    (4, 1, 2),
])
def test_discrepancy_smooth_center(codim, m, expected):
    assert discrepancy_smooth_center(codim, m) == expected


def test_discrepancy_rejects_bad_centers():
    with pytest.raises(ValueError):
        discrepancy_smooth_center(1, 0)
    with pytest.raises(ValueError):
        discrepancy_smooth_center(3, -1)
