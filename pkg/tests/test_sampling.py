"""
Tests for the random data sampler
"""

import numpy as np

from src.duval.sampling import RECORD_KEYS, Sampler


def test_sampler_is_reproducible(xyzt):
    first, second = Sampler(7), Sampler(7)
    assert [first.rational() for _ in range(10)] == [second.rational() for _ in range(10)]
    assert first.polynomial(xyzt) == second.polynomial(xyzt)


def test_rationals_are_bounded(sampler):
    for _ in range(200):
        q = sampler.rational(bound=3, allow_zero=False)
        assert q != 0
        assert abs(q.numerator) <= 3 and q.denominator <= 3


def test_unimodular_matrix(sampler):
    for _ in range(20):
        m = np.array(sampler.unimodular_matrix(4), dtype=float)
        assert round(abs(np.linalg.det(m))) == 1


def test_linear_change_keeps_span(sampler, xyzt):
    for _ in range(20):
        mapping = sampler.linear_change(xyzt, keep=('x', 'y', 't'))
        assert set(mapping) == set(xyzt.names)
        for name in ('x', 'y', 't'):
            assert set(mapping[name].variables()) <= {'x', 'y', 't'}
        assert mapping['z'].coefficient({'z': 1}) != 0


def test_polynomial_shape(sampler, xyzt):
    for _ in range(20):
        f = sampler.polynomial(xyzt, degree=3, terms=4, min_degree=1)
        assert 1 <= f.num_terms <= 4
        assert f.total_degree <= 3
        assert f.constant_term == 0


def test_case2_records(sampler):
    for _ in range(50):
        nf = sampler.case2_record()
        assert set(nf.phi) <= set(RECORD_KEYS)
        assert 1 <= nf.k <= 3
        assert nf.b == (nf.a if nf.k == 1 else 0)
        assert nf.psi.total_degree <= 0
