"""
DuVal Classifier

ADE recognition for surface germs at the origin from the Hessian corank,
the factorization type of the residual cubic and the Milnor number.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .errors import NotApplicable, VarSetMismatch
from .ideals import hessian_corank, hessian_matrix, milnor_number
from .poly import Poly
from .sympy_bridge import gcd

logger = logging.getLogger(__name__)

E_TYPES = {6: 'E6', 7: 'E7', 8: 'E8'}


@dataclass(frozen=True)
class DuValType:
    """Smooth, A(n), D(n), E6, E7, E8 or NotDuVal"""

    tag: str
    n: Optional[int] = None

    @property
    def subscript(self) -> int:
        if self.tag in ('A', 'D'):
            return self.n
        if self.tag.startswith('E'):
            return int(self.tag[1])
        return 0

    @property
    def is_duval(self) -> bool:
        return self.tag not in ('Smooth', 'NotDuVal')

    def __str__(self) -> str:
        if self.tag in ('A', 'D'):
            return f"{self.tag}{self.n}"
        return self.tag

    @classmethod
    def parse(cls, text: str) -> 'DuValType':
        text = text.strip()
        if text[:1] in ('A', 'D') and text[1:].isdigit():
            return cls(text[0], int(text[1:]))
        return cls(text)


SMOOTH = DuValType('Smooth')
NOT_DUVAL = DuValType('NotDuVal')


class CubicType(Enum):
    THREE_DISTINCT = 'ThreeDistinct'
    DOUBLE_SIMPLE = 'DoubleSimple'
    TRIPLE_LINE = 'TripleLine'
    NOT_SPLIT = 'NotSplit'


def cubic_factor_type(cubic: Poly, variables: Optional[Tuple[str, str]] = None) -> CubicType:
    """
    Factorization type of a binary cubic over the algebraic closure

    Decided by the degree of gcd of the two partials: 0 for three distinct
    lines, 1 for a double line, 2 for a triple line.

    Args:
        cubic: Homogeneous cubic in (at most) two variables
        variables: The two variables; defaults to those occurring in the cubic
    """
    if cubic.is_zero():
        return CubicType.NOT_SPLIT
    if cubic.total_degree != 3 or cubic.homogeneous_part(3) != cubic:
        raise ValueError(f"{cubic} is not a homogeneous cubic")
    if variables is None:
        used = cubic.variables()
        if len(used) > 2:
            raise VarSetMismatch(f"{cubic} involves more than two variables")
        others = [n for n in cubic.varset.names if n not in used]
        variables = tuple((used + others)[:2])
    a, b = variables
    common = gcd(cubic.partial(a), cubic.partial(b))
    degree = max(common.total_degree, 0)
    return {0: CubicType.THREE_DISTINCT, 1: CubicType.DOUBLE_SIMPLE, 2: CubicType.TRIPLE_LINE}[degree]


def _square_coordinates(f: Poly) -> Tuple[Poly, str, Tuple[str, str]]:
    """
    Linear change after which the rank-one quadratic part of f is c*X^2

    Returns:
        (f in the new coordinates, the name playing X, the other two names)
    """
    names = f.varset.names
    hessian = hessian_matrix(f)
    row = next(r for r in hessian if any(r))
    pivot = next(i for i, v in enumerate(row) if v)
    # quadratic part is proportional to (row . v)^2; make that form the pivot variable
    X = Poly.variable(f.varset, names[pivot])
    image = X
    for j, name in enumerate(names):
        if j != pivot and row[j]:
            image = image - Poly.variable(f.varset, name) * (row[j] / row[pivot])
    changed = f.substitute({names[pivot]: image}, f.varset)
    others = tuple(n for j, n in enumerate(names) if j != pivot)
    return changed, names[pivot], others


def classify_duval(f: Poly) -> DuValType:
    """
    ADE type of the surface germ f = 0 at the origin

    Args:
        f: Polynomial in three variables with f(0) = 0

    Returns:
        The DuValType; NotDuVal for corank 3 or a non-simple residual cubic

    Raises:
        NotApplicable: the origin is not on the surface
        NotStabilized: propagated from the Milnor number computation
    """
    if f.varset.arity != 3:
        raise VarSetMismatch(f"surface germs need three variables, got {f.varset}")
    if f.constant_term:
        raise NotApplicable(f"the origin is not on {f} = 0")
    if not f.homogeneous_part(1).is_zero():
        return SMOOTH
    corank = hessian_corank(f)
    logger.debug("classify %s: corank %d", f, corank)
    if corank == 0:
        return DuValType('A', 1)
    if corank == 1:
        return DuValType('A', milnor_number(f))
    if corank == 3:
        return NOT_DUVAL

    changed, square, others = _square_coordinates(f)
    cubic = changed.restrict({square: 0}).homogeneous_part(3)
    kind = cubic_factor_type(cubic, others)
    logger.debug("classify %s: residual cubic %s is %s", f, cubic, kind.value)
    if kind is CubicType.THREE_DISTINCT:
        return DuValType('D', 4)
    if kind is CubicType.DOUBLE_SIMPLE:
        return DuValType('D', milnor_number(f, candidate=5))
    if kind is CubicType.TRIPLE_LINE:
        mu = milnor_number(f, candidate=7)
        return DuValType(E_TYPES[mu]) if mu in E_TYPES else NOT_DUVAL
    return NOT_DUVAL
