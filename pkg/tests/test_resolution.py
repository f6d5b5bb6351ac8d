"""
Tests for minimal resolution graphs and curve positions
"""

import pytest

from src.duval.classifier import DuValType
from src.duval.errors import NotApplicable, StrictTransformMissesGraph
from src.duval.grammar import parse_generators, parse_poly
from src.duval.ideals import Ideal
from src.duval.resolution import (curve_position, minimal_resolution_dual_graph, standard_graph,
                                  surface_crepant_count)

D5 = 'x^2 + y^2*z + x*z^2'


def curve(text, varset):
    return Ideal(tuple(parse_generators(text, varset)))


@pytest.mark.parametrize('kind, branch', [('D5', 'E3'), ('E6', 'E3'), ('E8', 'E5')])
def test_standard_graphs_are_trees(kind, branch):
    graph = standard_graph(DuValType.parse(kind))
    assert graph.is_tree()
    assert graph.degree(branch) == 3
    assert graph.degree('E1') == 1


def test_standard_a_chain():
    graph = standard_graph(DuValType('A', 4))
    assert graph.describe()['adjacency'] == {'E1': ['E2'], 'E2': ['E1', 'E3'], 'E3': ['E2', 'E4'], 'E4': ['E3']}


@pytest.mark.parametrize('text, count', [
    ('x^2 + y^2 + z^2', 1),
    ('x*y + z^3', 2),
    ('x*y + z^4', 3),
    ('x*y + z^5', 4),
    ('x*y + z^6', 5),
    ('x*y + z^7', 6),
    ('x^2 + y^2*z - z^3', 4),
    (D5, 5),
    ('x^2 + y^2*z + z^5', 6),
    ('x^2 + y^3 + z^4', 6),
    ('x^2 + y^3 + y*z^3', 7),
    ('x^2 + y^3 + z^5', 8),
])
def test_graph_sizes(xyz, text, count):
    graph = minimal_resolution_dual_graph(parse_poly(text, xyz))
    assert len(graph.nodes) == count
    assert graph.is_tree()
    assert surface_crepant_count(parse_poly(text, xyz)) == count


def test_smooth_germ_has_empty_graph(xyz):
    assert minimal_resolution_dual_graph(parse_poly('x + y*z', xyz)).nodes == ()
    assert surface_crepant_count(parse_poly('x + y*z', xyz)) == 0


def test_curve_positions_on_d5(xyz):
    f = parse_poly(D5, xyz)
    assert curve_position(f, curve('x, y', xyz)) == 'DF_r'
    assert curve_position(f, curve('x, z', xyz)) == 'DF_l'


def test_curve_attachment_on_d5(xyz):
    graph = minimal_resolution_dual_graph(parse_poly(D5, xyz), curve('x, z', xyz))
    assert graph.curve_attachment == 'E1'


def test_curve_position_errors(xyz):
    with pytest.raises(NotApplicable):
        curve_position(parse_poly('x*y + z^3', xyz), curve('x, z', xyz))
    with pytest.raises(StrictTransformMissesGraph):
        curve_position(parse_poly(D5, xyz), curve('x - 1, z', xyz))
    with pytest.raises(NotApplicable):
        surface_crepant_count(parse_poly('x*y*z', xyz))
