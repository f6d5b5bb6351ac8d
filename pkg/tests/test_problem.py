"""
Tests for problem files
"""

from fractions import Fraction

import pytest

from src.duval.errors import ParseError
from src.duval.grammar import parse_poly
from src.duval.problem import load_problem, parse_line_images, parse_problem

PROBLEM = """
# cD5 point with a marked curve
id: sample
title: a sample problem
vars: x y z t
equation: x^2 + y^2*z + x*z^2 + t^3   # cD4
curve: (x, y, t)
poly f2 = x*y + z^3
ideal E = (x, t)
line l = x=s, z=s^2
steps:
W = blowup of=equation center=x,z,t chart=t
expect W.m = 1   [TRIVIAL]
"""


def test_parse_problem(xyzt):
    problem = parse_problem(PROBLEM)
    assert problem.varset == xyzt
    assert problem.equation == parse_poly('x^2 + y^2*z + x*z^2 + t^3', xyzt)
    assert str(problem.curve) == '(x, y, t)'
    assert problem.poly('f2') == parse_poly('x*y + z^3', xyzt)
    assert str(problem.ideal('E')) == '(x, t)'
    assert problem.lines == {'l': 'x=s, z=s^2'}
    assert problem.header == {'id': 'sample', 'title': 'a sample problem'}
    assert problem.steps == ['W = blowup of=equation center=x,z,t chart=t']
    assert problem.expects == ['W.m = 1   [TRIVIAL]']


def test_undefined_names():
    problem = parse_problem('vars: x y\npoly f = x*y\n')
    assert problem.equation is None and problem.curve is None
    with pytest.raises(ParseError):
        problem.poly('g')
    with pytest.raises(ParseError):
        problem.ideal('E')


@pytest.mark.parametrize('text, where', [
    ('poly f = x\nvars: x\n', 'line 1'),
    ('vars: x y\nfrob x\n', 'line 2'),
    ('vars: x y\nequation: x +\n', 'line 2'),
    ('vars: x y\npoly 2f = x\n', 'line 2'),
    ('vars: x y\npoly f x\n', 'line 2'),
    ('vars: x y\nequation: x + w\n', 'line 2'),
])
def test_parse_errors_name_the_line(text, where):
    with pytest.raises(ParseError, match=where):
        parse_problem(text)


def test_missing_vars_header():
    with pytest.raises(ParseError, match='vars'):
        parse_problem('# nothing\n\n')


def test_line_images(xyz):
    line = parse_line_images('x=s, z=s^2', xyz)
    assert line.point(Fraction(2)) == {'x': 2, 'y': 0, 'z': 4}
    for text in ('w=s', 'x s', 'x=1'):
        with pytest.raises(ParseError):
            parse_line_images(text, xyz)


def test_load_problem(tmp_path, xyzt):
    path = tmp_path / 'p.problem'
    path.write_text(PROBLEM)
    assert load_problem(str(path)).varset == xyzt
    with pytest.raises(ParseError):
        load_problem(str(tmp_path / 'missing.problem'))
