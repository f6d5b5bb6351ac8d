"""
Tests for intersection lengths, the ledger and discrepancies
"""

from fractions import Fraction

import pytest

from src.duval.errors import CurveInsideDivisor, Inconsistent, NotApplicable, Underdetermined
from src.duval.grammar import parse_generators
from src.duval.ideals import Ideal, ParamCurve
from src.duval.intersection import (LineInChart, Relation, an_index_fixture, curve_divisor_length,
                                    d5_index_fixture, solve_discrepancy, solve_ledger)
from src.duval.poly import VarSet
from src.duval.problem import parse_line_images


def ideal(text, varset):
    return Ideal(tuple(parse_generators(text, varset)))


def test_d5_index():
    result = d5_index_fixture()
    assert result.length == 3
    assert result.multiple == 5
    assert result.ledger['E'] == Fraction(3, 5)
    assert result.ledger['F'] == Fraction(-4, 5)
    assert result.solution.a == Fraction(5, 4)
    assert result.index == 4


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_an_index(n):
    result = an_index_fixture(n)
    assert result.multiple == n
    assert result.length == 1
    assert result.ledger['E'] == Fraction(1, n)
    assert result.ledger['F'] == Fraction(-(n + 1), n)
    assert result.solution.a == Fraction(n, n + 1)
    assert result.index == n + 1
    assert result.describe()['discrepancy'] == {'a': str(Fraction(n, n + 1)), 'index': n + 1}


def test_an_index_range():
    with pytest.raises(ValueError):
        an_index_fixture(5)


def test_line_must_lie_on_chart():
    chart = an_index_fixture(1).chart
    with pytest.raises(NotApplicable):
        LineInChart(parse_line_images('x=s, y=s', chart.varset), chart)
    assert LineInChart(parse_line_images('x=s', chart.varset), chart).divisor == 'F'


def test_curve_divisor_length(xyz):
    line = parse_line_images('x=s, y=s', xyz)
    divisor = ideal('y - x^2', xyz)
    assert curve_divisor_length(line, divisor) == 2
    assert curve_divisor_length(line, divisor, at=Fraction(0)) == 1
    assert curve_divisor_length(line, divisor, at=Fraction(1)) == 1
    assert curve_divisor_length(line, divisor, at=Fraction(2)) == 0
    assert curve_divisor_length(line, ideal('y - x^2, x^3', xyz)) == 1
    with pytest.raises(CurveInsideDivisor):
        curve_divisor_length(line, ideal('x - y, z', xyz))


def test_relation_parsing():
    relation = Relation.parse('E + 2*F = -1')
    assert relation.coefficients == (('E', Fraction(1)), ('F', Fraction(2)))
    assert relation.value == -1
    assert str(relation) == 'l.(E + 2*F) = -1'
    assert relation.holds({'E': Fraction(3, 5), 'F': Fraction(-4, 5)})
    for text in ('E*F = 1', 'E + 1 = 2', 'E = 1 = 2'):
        with pytest.raises(ValueError):
            Relation.parse(text)


def test_ledger():
    ledger = solve_ledger([Relation.parse('E + F = -1'), Relation.parse('2*E = 1')])
    assert ledger.entries == {'E': Fraction(1, 2), 'F': Fraction(-3, 2)}
    assert ledger.describe()['entries'] == {'E': '1/2', 'F': '-3/2'}


def test_ledger_failures():
    with pytest.raises(Inconsistent):
        solve_ledger([Relation.parse('E = 1'), Relation.parse('E = 2')])
    with pytest.raises(Underdetermined):
        solve_ledger([Relation.parse('E + F = 1')])
    partial = solve_ledger([Relation.parse('E + F = 1'), Relation.parse('G = 2')], query=['G'])
    assert partial.entries == {'G': Fraction(2)}


def test_discrepancy():
    solution = solve_discrepancy(Fraction(-1), Fraction(-3, 2))
    assert solution.a == Fraction(2, 3)
    assert solution.index == 3
    assert solve_discrepancy(Fraction(-1), Fraction(-1), Fraction(1)).a == 2
    with pytest.raises(ZeroDivisionError):
        solve_discrepancy(Fraction(-1), Fraction(0))


def test_length_adds_over_products(sampler, xyz):
    line = VarSet(('s',))
    for _ in range(40):
        images = {n: sampler.polynomial(line, degree=2, terms=2, min_degree=1) for n in xyz.names}
        curve = ParamCurve.build(xyz, images)
        g1 = sampler.polynomial(xyz, degree=2, terms=3)
        g2 = sampler.polynomial(xyz, degree=2, terms=3)
        if curve.pullback(g1).is_zero() or curve.pullback(g2).is_zero():
            continue
        lengths = [curve_divisor_length(curve, Ideal.of(g)) for g in (g1, g2, g1 * g2)]
        assert lengths[2] == lengths[0] + lengths[1]
        local = [curve_divisor_length(curve, Ideal.of(g), at=Fraction(0)) for g in (g1, g2, g1 * g2)]
        assert local[2] == local[0] + local[1]
