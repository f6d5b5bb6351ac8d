"""
Tests for the sympy bridge
"""

from fractions import Fraction

import pytest

from src.duval.errors import VarSetMismatch
from src.duval.poly import Poly, VarSet
from src.duval.sympy_bridge import exact_divide, factor, gcd, resultant, same_ideal


def test_factor_and_gcd(poly):
    content, factors = factor(poly('2*x^2*y - 2*y'))
    assert content == 2
    assert {f for f, _ in factors} == {poly('y'), poly('x - 1'), poly('x + 1')}
    assert all(m == 1 for _, m in factors)
    assert gcd(poly('x^2 - 1'), poly('x^2 + 2*x + 1')) == poly('x + 1')
    assert exact_divide(poly('x^2 - 1'), poly('x - 1')) == poly('x + 1')
    assert exact_divide(poly('x^2 + 1'), poly('x - 1')) is None


def test_resultant(poly):
    assert resultant(poly('x^2 - y'), poly('x - 1'), 'x') == poly('1 - y')
    assert resultant(poly('x^2 - y'), poly('3'), 'x') == poly('9')
    common = resultant(poly('(x - y)*(x + 1)'), poly('x - y'), 'x')
    assert common.is_zero()
    assert 'x' not in resultant(poly('x^3 + y*x + z'), poly('x^2 - t'), 'x').variables()


def test_resultant_of_a_common_root_family(poly):
    r = resultant(poly('x^2 - 4'), poly('x - y'), 'x')
    assert r.evaluate({'y': 2}) == 0
    assert r.evaluate({'y': 3}) == Fraction(5)


def test_resultant_rejects_mixed_varsets(poly):
    with pytest.raises(VarSetMismatch):
        resultant(poly('x'), poly('x', 'x y'), 'x')


def test_same_ideal(poly):
    assert same_ideal([poly('x^2'), poly('x*y')], [poly('x*y'), poly('x^2 + x*y')])
    assert not same_ideal([poly('x'), poly('y')], [poly('x'), poly('y^2')])
    assert same_ideal([poly('x^2 + 1'), poly('x')], [poly('1')])
    assert same_ideal([poly('x - y'), poly('y')], [poly('x'), poly('y')])
    assert same_ideal([], [Poly.zero(VarSet.of('x'))])
    assert not same_ideal([poly('x')], [])
