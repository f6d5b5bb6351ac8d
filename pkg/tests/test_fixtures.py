"""
Tests for fixture parsing and replay
"""

from fractions import Fraction

import pytest

from src.duval.errors import FixtureNotFound, FixtureParseError
from src.duval.fixtures import (OPS, list_fixtures, load_fixture, matches, parse_expectation, parse_fixture,
                                parse_step, replay, replay_all, run_fixture)
from src.duval.grammar import parse_poly
from src.duval.ideals import Ideal

FIXTURE_IDS = [
    'an-index-n1', 'an-index-n2', 'an-index-n3', 'an-index-n4', 'd5-chart-replay',
    'd5-no-contraction', 'double-blowup-family', 'index-jump', 'smoothing-line',
]

CHART = """
id: chart
vars: x y z t
equation: x*y + z^2 + t^3
steps:
W = blowup of=equation center=x,z,t chart=t labels=E,F
expect W.strict = {strict}
expect W.m = 1
"""


def test_fixture_corpus_is_listed(fixture_dir):
    assert list_fixtures(fixture_dir) == FIXTURE_IDS


@pytest.mark.parametrize('fixture_id', FIXTURE_IDS)
def test_fixture_passes(fixture_dir, fixture_id):
    result = replay(fixture_id, fixture_dir)
    assert result.passed, result.divergence
    assert result.checked == len(load_fixture(fixture_id, fixture_dir).expectations)


def test_replay_all(fixture_dir):
    results = replay_all(fixture_dir)
    assert [r.status for r in results] == ['PASS'] * len(FIXTURE_IDS)


def test_empty_pipeline_passes():
    result = run_fixture(parse_fixture('id: empty\nvars: x\nsteps:\n'))
    assert result.passed
    assert result.checked == 0


def test_mismatch_reports_first_divergence():
    result = run_fixture(parse_fixture(CHART.format(strict='x*y + z^2*t')))
    assert not result.passed
    assert result.checked == 0
    assert result.divergence.startswith('W.strict: expected x*y + z^2*t')
    assert result.describe()['status'] == 'FAIL'
    assert run_fixture(parse_fixture(CHART.format(strict='t^2 + z^2*t + x*y'))).passed


def test_step_errors_fail_the_fixture():
    text = CHART.format(strict='0').replace('chart=t', 'chart=y')
    result = run_fixture(parse_fixture(text))
    assert not result.passed
    assert 'UnsupportedCenter' in result.divergence
    missing = run_fixture(parse_fixture('id: m\nvars: x y\nsteps:\nW = blowup center=x,y chart=x\n'))
    assert 'missing argument' in missing.divergence


def test_parse_step_and_expectation():
    step = parse_step('Z = blowup of=Y0.poly ideal="x, t^2" chart=a ratio=u')
    assert step.op == 'blowup'
    assert step.args == {'of': 'Y0.poly', 'ideal': 'x, t^2', 'chart': 'a', 'ratio': 'u'}
    expectation = parse_expectation('W.divisor.E = (x, t)   [REFERENCE]')
    assert (expectation.step, expectation.key, expectation.value, expectation.tag) == \
        ('W', 'divisor.E', '(x, t)', 'REFERENCE')
    assert parse_expectation('K.E = 1/2').tag == 'DERIVED'
    assert set(OPS) >= {'blowup', 'decide', 'exceptional', 'replay', 'an_index'}


@pytest.mark.parametrize('text', [
    'id: e\nvars: x\nsteps:\nW = frobnicate of=x\n',
    'id: e\nvars: x y\nsteps:\nW = points of=equation\nW = points of=equation\n',
    'id: e\nvars: x\nsteps:\nexpect V.m = 1\n',
    'id: e\nvars: x\nsteps:\nexpect V.m = 1 [GUESS]\n',
    'id: e\nvars: x\nsteps:\nexpect V = 1\n',
    'id: e\nvars: x\nsteps:\nW blowup\n',
    'id: e\nvars: x\nsteps:\nW = blowup center\n',
    'vars: x\nsteps:\n',
    'id: e\nequation: x\n',
])
def test_parse_errors(text):
    with pytest.raises(FixtureParseError):
        parse_fixture(text)


def test_unknown_fixture(fixture_dir, tmp_path):
    with pytest.raises(FixtureNotFound):
        load_fixture('no-such-fixture', fixture_dir)
    with pytest.raises(FixtureNotFound):
        list_fixtures(str(tmp_path / 'missing'))


def test_matches(xyzt):
    p = parse_poly('x*y + t^2', xyzt)
    assert matches('t^2 + x*y', p)
    assert not matches('x*y', p)
    ideal = Ideal.of(parse_poly('2*x', xyzt), parse_poly('t', xyzt))
    assert matches('(t, x)', ideal)
    assert matches('true', True)
    assert not matches('true', False)
    assert matches('-3/2', Fraction(-3, 2))
    assert matches('4', 4)
    assert matches('A2', 'A2')


def test_exceptional_ideal_feeds_length():
    text = """
id: jump
vars: x y z t
equation: x*y + z^3*t^2 + t^2
line l = x=s
steps:
Z = blowup of=equation ideal="x, t^2" chart=a ratio=u
E = exceptional chart=Z
L = length line=l chart=Z ideal=E
expect E.generator = x
expect E.ideal = (x, t^2 - x*u, y + z^3*u + u)
expect L.length = 1
"""
    result = run_fixture(parse_fixture(text))
    assert result.passed, result.divergence
    assert result.checked == 3
