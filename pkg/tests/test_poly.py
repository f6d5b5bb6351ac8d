"""
Tests for exact rational polynomials
"""

from fractions import Fraction

import pytest

from src.duval.errors import VarSetMismatch, ZeroPolynomialError
from src.duval.poly import JetBound, Poly, VarSet


def test_varset_of_accepts_string():
    assert VarSet.of('x y z').names == ('x', 'y', 'z')
    assert VarSet.of('x', 'y').arity == 2


def test_varset_rejects_duplicates():
    with pytest.raises(VarSetMismatch):
        VarSet(('x', 'x'))


def test_varset_extend_and_index(xyz):
    extended = xyz.extend('u')
    assert extended.names == ('x', 'y', 'z', 'u')
    assert extended.index('u') == 3
    with pytest.raises(VarSetMismatch):
        xyz.index('t')


def test_arithmetic(poly):
    f = poly('x + y')
    g = poly('x - y')
    assert f * g == poly('x^2 - y^2')
    assert f ** 3 == poly('x^3 + 3*x^2*y + 3*x*y^2 + y^3')
    assert f - f == Poly.zero(f.varset)
    assert (f / 2).coefficient({'x': 1}) == Fraction(1, 2)


def test_mixed_varsets_rejected(poly):
    with pytest.raises(VarSetMismatch):
        poly('x', 'x y') + poly('x', 'x y z')


def test_equality_ignores_term_order(poly):
    assert poly('t^2 + x*y') == poly('x*y + t^2')
    assert poly('0') == 0
    assert poly('3') == 3


def test_inspection(poly):
    f = poly('x^2*y - 3*t + 5')
    assert f.total_degree == 3
    assert f.constant_term == 5
    assert f.num_terms == 3
    assert f.variables() == ['x', 'y', 't']
    assert f.degree_in('x') == 2
    assert not f.is_constant()
    assert poly('0').total_degree == -1


def test_jets_and_orders(poly):
    f = poly('x^2 + y^2*z + x*z^5 + t^3')
    assert f.homogeneous_part(3) == poly('y^2*z + t^3')
    assert f.truncate(JetBound(3)) == poly('x^2 + y^2*z + t^3')
    assert f.multiplicity_at_origin() == 2
    assert f.lowest_form() == poly('x^2')
    assert f.order_in(['x', 'y', 't']) == 1
    assert f.weighted_order({'x': 2, 'y': 1, 'z': 1, 't': 1}) == 3


def test_orders_of_zero_raise(poly):
    with pytest.raises(ZeroPolynomialError):
        poly('0').multiplicity_at_origin()
    with pytest.raises(ZeroPolynomialError):
        poly('0').divide_by_power('x')


def test_jet_bound_must_be_positive():
    with pytest.raises(ValueError):
        JetBound(0)


def test_partial(poly):
    f = poly('x^3*y + 2*y*t - 7')
    assert f.partial('x') == poly('3*x^2*y')
    assert f.partial('y') == poly('x^3 + 2*t')
    assert f.partial('z') == 0


def test_substitute_chart_map(poly):
    f = poly('u*z^2 + x*y + z^3 + t^3', 'x y z t u')
    t = Poly.variable(f.varset, 't')
    mapped = f.substitute({'x': Poly.variable(f.varset, 'x') * t, 'z': Poly.variable(f.varset, 'z') * t})
    k, strict = mapped.divide_by_power('t')
    assert k == 1
    assert strict == poly('u*z^2*t + x*y + z^3*t^2 + t^2', 'x y z t u')


def test_substitute_with_bound_truncates_intermediates(poly):
    f = poly('x^3 + y')
    image = {'x': poly('x + y^2')}
    assert f.substitute(image, bound=3) == poly('x^3 + y')
    assert f.substitute(image) == poly('x^3 + 3*x^2*y^2 + 3*x*y^4 + y^6 + y')


def test_translate_restrict_evaluate(poly):
    f = poly('x^2 + y*z', 'x y z')
    assert f.translate({'x': 1}) == poly('x^2 + 2*x + 1 + y*z', 'x y z')
    assert f.restrict({'z': 0}) == poly('x^2', 'x y z')
    assert f.evaluate({'x': 2, 'y': 3, 'z': Fraction(1, 3)}) == 5
    with pytest.raises(VarSetMismatch):
        f.evaluate({'x': 1})


def test_embed_and_divide_by_power(poly):
    f = poly('x*t^2 + t^3')
    k, q = f.divide_by_power('t')
    assert (k, q) == (2, poly('x + t'))
    wide = f.embed(f.varset.extend('w'))
    assert wide.varset.names == ('x', 'y', 'z', 't', 'w')
    assert wide.coefficient({'t': 3}) == 1


def test_printing_round_trips(poly):
    f = poly('-3/2*x^2*y + t - 1')
    assert poly(str(f)) == f
    assert str(poly('0')) == '0'


def test_normalized_has_unit_leading_coefficient(poly):
    f = poly('4*x^2 - 2*t')
    assert f.normalized().leading_coefficient() == 1
    assert f.normalized() * 4 == f


def test_substitution_composition_law(sampler, xyz):
    for _ in range(100):
        f = sampler.polynomial(xyz, degree=3, terms=4)
        sigma = {n: sampler.polynomial(xyz, degree=2, terms=3) for n in xyz.names}
        tau = {n: sampler.polynomial(xyz, degree=2, terms=2) for n in xyz.names}
        composed = {n: image.substitute(tau, xyz) for n, image in sigma.items()}
        assert f.substitute(sigma, xyz).substitute(tau, xyz) == f.substitute(composed, xyz)


def test_translate_back_and_forth(sampler, xyzt):
    for _ in range(50):
        f = sampler.polynomial(xyzt, degree=4, terms=5)
        v = [sampler.rational() for _ in xyzt.names]
        assert f.translate(v).translate([-c for c in v]) == f


def test_multiplicity_of_a_product_adds(sampler, xyz):
    for _ in range(100):
        f = sampler.polynomial(xyz, degree=4, terms=3, min_degree=1)
        g = sampler.polynomial(xyz, degree=4, terms=3)
        product = f * g
        assert product.multiplicity_at_origin() == f.multiplicity_at_origin() + g.multiplicity_at_origin()
        assert product.lowest_form() == f.lowest_form() * g.lowest_form()


def test_unit_weights_give_the_multiplicity(sampler, xyzt):
    for _ in range(100):
        f = sampler.polynomial(xyzt, degree=5, terms=4)
        assert f.weighted_order([1, 1, 1, 1]) == f.multiplicity_at_origin()
        assert f.weighted_order({n: 1 for n in xyzt.names}) == f.order_in(xyzt.names)
