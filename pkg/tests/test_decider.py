"""
Tests for the D5 normal-form reduction and the contraction decision
"""

from fractions import Fraction

import pytest

from src.duval.decider import (NO_TERMINAL_CONTRACTION, NOT_APPLICABLE, PSI_VARS, TERMINAL_EXISTS, Case,
                               D5NormalForm, Verdict, align_curve, case_split, condition_report,
                               decide_terminal, reduce_to_normal_form)
from src.duval.errors import InputNotNormalForm, NotD5, VarSetMismatch
from src.duval.grammar import parse_generators, parse_poly
from src.duval.ideals import Ideal
from src.duval.poly import JetBound, Poly
from src.duval.problem import decide_problem

NO_CONTRACTION = 'x^2 + y^2*z + 2*x*z^2 + t*(y^4 + y*z^2*t + z^2*t^2)'
CD4 = 'x^2 + y^2*z + x*z^2 + t^3'


def ideal(text, varset):
    return Ideal(tuple(parse_generators(text, varset)))


def brute_force(nf):
    """Both obstructions written out coefficient by coefficient"""
    a = nf.coefficient
    b, p = nf.b, nf.psi0
    first = a(0, 0, 4) == 0 and a(1, 0, 2) == 0 and 2 * a(0, 1, 2) == b * p and 4 * a(0, 0, 3) == b ** 2
    second = a(0, 2, 1) ** 2 - b * a(0, 2, 1) + a(0, 0, 3) == 0 and a(0, 1, 2) == a(0, 2, 1) * p
    return first, second


def test_order_four_phi_has_no_contraction(xyzt):
    decision = decide_problem(parse_poly(NO_CONTRACTION, xyzt), ideal('x, y, t', xyzt))
    assert str(decision.verdict) == 'NoTerminalContraction{ConditionI}'
    assert decision.report.holds_i
    assert case_split(decision.normal_form) is Case.CASE2


def test_cd4_point_has_index_four_contraction(xyzt):
    decision = decide_problem(parse_poly(CD4, xyzt), ideal('x, y, t', xyzt))
    assert decision.verdict == Verdict.terminal_exists(4)
    assert case_split(decision.normal_form) is Case.CASE1
    assert 'cD4' in decision.report.flags


def test_long_arm_curve(xyzt):
    decision = decide_problem(parse_poly(NO_CONTRACTION, xyzt), ideal('x, z, t', xyzt))
    assert decision.verdict == Verdict.no_contraction('DFl')
    assert decision.normal_form is None


def test_non_d5_section_is_not_applicable(xyzt):
    decision = decide_problem(parse_poly('x^2 + y^2 + z*t', xyzt), ideal('x, y, t', xyzt))
    assert decision.verdict.tag == NOT_APPLICABLE
    with pytest.raises(NotD5):
        reduce_to_normal_form(parse_poly('x^2 + y^2 + z*t', xyzt), ideal('x, y, t', xyzt))


@pytest.mark.parametrize('mapping, curve', [
    ({'x': 'x - 2*y', 't': 't + y'}, 'x - 2*y, y, t + y'),
    ({'x': 'z', 'z': 'x'}, 'z, y, t'),
])
def test_verdict_is_independent_of_coordinates(xyzt, mapping, curve):
    f = parse_poly(NO_CONTRACTION, xyzt)
    images = {k: parse_poly(v, xyzt) for k, v in mapping.items()}
    moved = f.substitute(images, xyzt)
    decision = decide_problem(moved, ideal(curve, xyzt))
    assert str(decision.verdict) == 'NoTerminalContraction{ConditionI}'
    assert align_curve(moved, ideal(curve, xyzt)) == f


def test_normal_form_is_stable(xyzt):
    nf = reduce_to_normal_form(parse_poly(NO_CONTRACTION, xyzt), ideal('x, y, t', xyzt))
    again = reduce_to_normal_form(nf.to_poly(), ideal('x, y, t', xyzt), nf.degree_bound)
    assert again.to_poly() == nf.to_poly()
    assert decide_terminal(again)[0] == decide_terminal(nf)[0]


def test_align_curve_rejects_bad_input(xyz, xyzt):
    with pytest.raises(VarSetMismatch):
        align_curve(parse_poly('x^2 + y^2*z', xyz), ideal('x, y', xyz))
    with pytest.raises(InputNotNormalForm):
        align_curve(parse_poly(CD4, xyzt), ideal('x, y', xyzt))
    with pytest.raises(InputNotNormalForm):
        align_curve(parse_poly(CD4 + ' + z^3', xyzt), ideal('x, y, t', xyzt))
    with pytest.raises(InputNotNormalForm):
        align_curve(parse_poly(CD4, xyzt), ideal('x, y, x + y', xyzt))


def test_decision_matches_brute_force(sampler):
    seen = set()
    for _ in range(1000):
        nf = sampler.case2_record()
        verdict, report = decide_terminal(nf)
        first, second = brute_force(nf)
        assert (report.holds_i, report.holds_ii) == (first, second)
        if first:
            expected = Verdict.no_contraction('ConditionI')
        elif second:
            expected = Verdict.no_contraction('ConditionII')
        else:
            expected = Verdict.terminal_exists(4)
        assert verdict == expected
        seen.add(verdict.tag)
    assert seen == {TERMINAL_EXISTS, NO_TERMINAL_CONTRACTION}


def test_case_one_and_flags():
    record = D5NormalForm(psi=Poly.zero(PSI_VARS), a=Fraction(0), k=1, b=Fraction(0),
                          phi={(0, 0, 2): Fraction(1)}, degree_bound=JetBound(6))
    assert case_split(record) is Case.CASE1
    assert condition_report(record).flags == ('cD4', 't2-without-yt')
    assert decide_terminal(record)[0] == Verdict.terminal_exists(4)

    zt = D5NormalForm(psi=Poly.zero(PSI_VARS), a=Fraction(0), k=1, b=Fraction(0),
                      phi={(0, 1, 1): Fraction(-1)}, degree_bound=JetBound(6))
    assert case_split(zt) is Case.CASE2
    assert decide_terminal(zt)[0].index == 4


def test_verdict_printing():
    assert str(Verdict.terminal_exists(4)) == 'TerminalExists{index: 4}'
    assert str(Verdict.no_contraction('ConditionII')) == 'NoTerminalContraction{ConditionII}'
    assert Verdict.not_applicable('A1').describe() == {'tag': NOT_APPLICABLE, 'reason': 'A1'}


def _scaled(nf, lam):
    """The record of f(lam^4 x, lam^3 y, lam^2 z, lam^2 t) / lam^8"""
    phi = {(i, j, k): c * lam ** (3 * i + 2 * j + 2 * k - 6) for (i, j, k), c in nf.phi.items()}
    z, t = (Poly.variable(PSI_VARS, n) for n in ('z', 't'))
    psi = nf.psi.substitute({'z': z * lam ** 2, 't': t * lam ** 2}, PSI_VARS)
    shift = lam ** (2 * nf.k - 2)
    return D5NormalForm(psi=psi, a=nf.a * shift, k=nf.k, b=nf.b * shift, phi=phi, degree_bound=nf.degree_bound)


def test_decision_is_invariant_under_weighted_scaling(sampler):
    for i in range(40):
        nf = sampler.case2_record(density=0.7)
        if i % 2:
            f00, psi0 = nf.coefficient(0, 2, 1), nf.psi0
            phi = dict(nf.phi)
            phi.update({(0, 0, 3): nf.b * f00 - f00 ** 2, (0, 1, 2): f00 * psi0})
            nf = D5NormalForm(psi=nf.psi, a=nf.a, k=nf.k, b=nf.b,
                              phi={key: c for key, c in phi.items() if c}, degree_bound=nf.degree_bound)
        lam = sampler.rational(allow_zero=False)
        scaled = _scaled(nf, lam)
        f = nf.to_poly()
        x, y, z, t = (Poly.variable(f.varset, n) for n in 'xyzt')
        weighted = f.substitute({'x': x * lam ** 4, 'y': y * lam ** 3, 'z': z * lam ** 2, 't': t * lam ** 2}, f.varset)
        assert weighted / lam ** 8 == scaled.to_poly()
        verdict, report = decide_terminal(nf)
        scaled_verdict, scaled_report = decide_terminal(scaled)
        assert scaled_verdict == verdict
        assert (scaled_report.holds_i, scaled_report.holds_ii) == (report.holds_i, report.holds_ii)
