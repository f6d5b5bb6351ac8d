"""
Ideal Lab

Singular loci, jet-space ideal membership, Milnor numbers and Hessian
corank. Local questions at the origin are answered by finite linear algebra
in the space of jets of degree at most D.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .config import get_settings
from .errors import NotStabilized, VarSetMismatch, ZeroPolynomialError
from .poly import Exponents, JetBound, Poly, VarSet
from .sympy_bridge import SparseRow, rank, rref

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ideal:
    """Ideal given by a nonempty list of generators over one VarSet"""

    generators: Tuple[Poly, ...]

    def __post_init__(self):
        kept: List[Poly] = []
        for g in self.generators:
            if not g.is_zero() and g not in kept:
                kept.append(g)
        if not kept:
            raise ZeroPolynomialError("an ideal needs at least one nonzero generator")
        varsets = {g.varset for g in kept}
        if len(varsets) != 1:
            raise VarSetMismatch(f"generators over different VarSets: {varsets}")
        object.__setattr__(self, 'generators', tuple(kept))

    @classmethod
    def of(cls, *generators: Poly) -> 'Ideal':
        return cls(tuple(generators))

    @property
    def varset(self) -> VarSet:
        return self.generators[0].varset

    def substitute(self, mapping: Mapping[str, Poly], target: Optional[VarSet] = None) -> List[Poly]:
        """Images of the generators under a substitution (zero images kept)"""
        return [g.substitute(mapping, target) for g in self.generators]

    def __str__(self) -> str:
        return '(' + ', '.join(str(g) for g in self.generators) + ')'


@dataclass(frozen=True)
class ParamCurve:
    """Rational curve s -> (images of the ambient variables)"""

    parameter: str
    images: Tuple[Tuple[str, Poly], ...]

    def __post_init__(self):
        images = tuple(self.images.items()) if isinstance(self.images, Mapping) else tuple(self.images)
        object.__setattr__(self, 'images', images)
        if all(p.is_constant() for _, p in images):
            raise ValueError("a parametrized curve needs a nonconstant coordinate")

    @classmethod
    def build(cls, varset: VarSet, images: Mapping[str, Poly], parameter: str = 's') -> 'ParamCurve':
        """Complete an image map over VarSet((parameter,)); missing coordinates map to 0"""
        line = VarSet((parameter,))
        full = []
        for name in varset.names:
            image = images.get(name, Poly.zero(line))
            if image.varset != line:
                raise VarSetMismatch(f"image of {name} must be a polynomial in {parameter}")
            full.append((name, image))
        return cls(parameter, tuple(full))

    @property
    def parameter_varset(self) -> VarSet:
        return self.images[0][1].varset

    def pullback(self, p: Poly) -> Poly:
        mapping = dict(self.images)
        if set(mapping) != set(p.varset.names):
            raise VarSetMismatch(f"curve coordinates {sorted(mapping)} do not match {p.varset}")
        return p.substitute(mapping, self.parameter_varset)

    def point(self, value: Fraction) -> Dict[str, Fraction]:
        return {name: image.evaluate({self.parameter: value}) for name, image in self.images}


def monomials_of_degree(arity: int, degree: int) -> List[Exponents]:
    result = []
    for combo in combinations_with_replacement(range(arity), degree):
        exps = [0] * arity
        for i in combo:
            exps[i] += 1
        result.append(tuple(exps))
    return result


def monomials_up_to(arity: int, degree: int) -> List[Exponents]:
    """All exponent vectors of total degree <= degree, lowest degree first"""
    result = []
    for d in range(degree + 1):
        result.extend(monomials_of_degree(arity, d))
    return result


def _shifted_row(g: Poly, m: Exponents, index: Dict[Exponents, int], bound: int) -> SparseRow:
    row: SparseRow = {}
    for exps, c in g.items():
        shifted = tuple(a + b for a, b in zip(exps, m))
        if sum(shifted) <= bound:
            row[index[shifted]] = c
    return row


@dataclass
class JetSpaceBasis:
    """Row-reduced span of an ideal's image in the jets of degree <= D"""

    degree: int
    columns: List[Exponents]
    rows: List[SparseRow] = field(default_factory=list)
    pivots: Tuple[int, ...] = ()

    @classmethod
    def build(cls, generators: Sequence[Poly], bound: JetBound, truncate: bool = True) -> 'JetSpaceBasis':
        """
        Span {m * g} over monomials m

        Args:
            generators: Ideal generators over one VarSet
            bound: Jet degree D
            truncate: Truncate products at degree D (jets modulo m^(D+1));
                otherwise only products of degree <= D are used

        Returns:
            The reduced basis with columns ordered by degree
        """
        D = bound.degree
        arity = generators[0].varset.arity
        columns = monomials_up_to(arity, D)
        index = {m: i for i, m in enumerate(columns)}
        rows = []
        for g in generators:
            if g.is_zero():
                continue
            low = g.multiplicity_at_origin() if truncate else g.total_degree
            for m in monomials_up_to(arity, D - low) if low <= D else []:
                row = _shifted_row(g, m, index, D)
                if row:
                    rows.append(row)
        reduced, pivots = rref(rows, len(columns))
        logger.debug("jet basis D=%d: %d columns, %d rows, rank %d", D, len(columns), len(rows), len(pivots))
        return cls(D, columns, reduced, pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def quotient_dimension(self) -> int:
        return len(self.columns) - self.rank

    def covers_top_degree(self) -> bool:
        """True when every monomial of degree D lies in the span modulo higher jets"""
        top = [i for i, m in enumerate(self.columns) if sum(m) == self.degree]
        # degree-D columns come last, so rows pivoting there are pure degree D
        return sum(1 for p in self.pivots if p >= top[0]) == len(top)

    def contains(self, g: Poly) -> bool:
        index = {m: i for i, m in enumerate(self.columns)}
        vector = {}
        for exps, c in g.items():
            if sum(exps) > self.degree:
                raise ValueError(f"{g} exceeds the jet bound {self.degree}")
            vector[index[exps]] = c
        if not vector:
            return True
        return rank(list(self.rows) + [vector], len(self.columns)) == self.rank


def hypersurface_singular_ideal(f: Poly) -> Ideal:
    """Ideal generated by f and its first partials"""
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial defines no hypersurface")
    return Ideal((f,) + tuple(f.partial(n) for n in f.varset.names))


def curve_in_locus(curve: ParamCurve, ideal: Ideal) -> bool:
    """True iff every generator pulls back to zero along the curve"""
    return all(curve.pullback(g).is_zero() for g in ideal.generators)


def jet_membership(g: Poly, ideal: Ideal, bound: JetBound) -> bool:
    """
    Decide whether g is in the degree <= D span of {m * g_i}

    Products are not truncated: only m * g_i of total degree <= D enter.
    """
    if g.varset != ideal.varset:
        raise VarSetMismatch(f"{g.varset} vs {ideal.varset}")
    if g.total_degree > bound.degree:
        raise ValueError(f"degree of {g} exceeds the jet bound {bound.degree}")
    basis = JetSpaceBasis.build(ideal.generators, bound, truncate=False)
    return basis.contains(g)


def _milnor_attempt(f: Poly, D: int) -> Tuple[bool, int]:
    partials = [f.partial(n) for n in f.varset.names]
    partials = [p for p in partials if not p.is_zero()]
    if not partials:
        return False, -1
    basis = JetSpaceBasis.build(partials, JetBound(D), truncate=True)
    return basis.covers_top_degree(), basis.quotient_dimension


def milnor_number(f: Poly, bound: Optional[JetBound] = None, candidate: int = 1) -> int:
    """
    Local Milnor number at the origin

    The answer is trusted only when every degree-D monomial lies in the
    span of the truncated Jacobian rows (then m^D is inside the Jacobian
    ideal and the quotient is finite).

    Args:
        f: Polynomial with a critical point at the origin
        bound: Single jet bound to try; when omitted D starts at
            2*candidate+2 and doubles up to the configured cap
        candidate: Expected Milnor number used for the first bound

    Raises:
        NotStabilized: no tried bound certified the quotient
    """
    if f.is_zero():
        raise ZeroPolynomialError("Milnor number of the zero polynomial is undefined")
    if bound is not None:
        schedule = [bound.degree]
    else:
        cap = get_settings().jet_cap
        D = max(2, 2 * candidate + 2)
        schedule = []
        while D < cap:
            schedule.append(D)
            D *= 2
        schedule.append(cap)
    for D in schedule:
        ok, mu = _milnor_attempt(f, D)
        logger.debug("milnor attempt D=%d stabilized=%s dim=%d", D, ok, mu)
        if ok:
            return mu
    raise NotStabilized(f"Jacobian ideal of {f} does not contain m^{schedule[-1]}; "
                        "singularity is not isolated or the jet bound is too small",
                        degree_bound=schedule[-1])


def hessian_matrix(f: Poly) -> List[List[Fraction]]:
    """Symmetric matrix of second partials at the origin"""
    names = f.varset.names
    return [[f.partial(a).partial(b).constant_term for b in names] for a in names]


def hessian_corank(f: Poly) -> int:
    hessian = hessian_matrix(f)
    rows = [{j: v for j, v in enumerate(row) if v} for row in hessian]
    return f.varset.arity - rank(rows, f.varset.arity)


def graded_pieces_agree(ideal: Ideal, weights, n: int) -> bool:
    """
    Decide (m_w^n + I) = (m^n + I)

    m_w^n is spanned by monomials of weighted degree >= n. It contains m^n,
    so both sides are compared in the jets modulo m^n: every monomial of
    weighted degree >= n and total degree < n must lie in m^n + I.
    """
    varset = ideal.varset
    w = Poly.constant(varset, 1).weight_vector(weights)
    if n <= 1:
        return True
    basis = JetSpaceBasis.build(ideal.generators, JetBound(n - 1), truncate=True)
    for exps in monomials_up_to(varset.arity, n - 1):
        if sum(a * b for a, b in zip(w, exps)) < n:
            continue
        if not basis.contains(Poly(varset, {exps: 1})):
            return False
    return True
