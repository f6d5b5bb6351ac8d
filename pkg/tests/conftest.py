"""
Shared test fixtures
"""

import os
import sys

import pytest

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.duval.grammar import parse_poly
from src.duval.poly import VarSet
from src.duval.sampling import Sampler

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), '..', 'fixtures')


@pytest.fixture
def xyz():
    return VarSet.of('x', 'y', 'z')


@pytest.fixture
def xyzt():
    return VarSet.of('x', 'y', 'z', 't')


@pytest.fixture
def sampler():
    return Sampler(seed=42)


@pytest.fixture
def poly():
    """Parse polynomial text over a VarSet given as 'x y z'"""
    def make(text, names='x y z t'):
        return parse_poly(text, VarSet.of(names))
    return make


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR
