"""
Sympy bridge

Conversions between Poly and sympy, plus the few exact algorithms the
toolkit delegates to sympy: factorization over QQ, gcd, exact division,
solving for rational points, resultants, ideal equality through Groebner
bases and sparse linear algebra over QQ.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import VarSetMismatch
from .poly import Poly, VarSet

logger = logging.getLogger(__name__)

SparseRow = Dict[int, Fraction]


def symbols_for(varset: VarSet) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(name) for name in varset.names)


def to_rational(value) -> Fraction:
    """Convert a sympy or domain rational to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def to_sympy_poly(p: Poly) -> sympy.Poly:
    gens = symbols_for(p.varset)
    if p.is_zero():
        return sympy.Poly(0, *gens, domain=QQ)
    rep = {exps: QQ(c.numerator, c.denominator) for exps, c in p.items()}
    return sympy.Poly.from_dict(rep, *gens, domain=QQ)


def to_sympy_expr(p: Poly) -> sympy.Expr:
    return to_sympy_poly(p).as_expr()


def from_sympy_poly(sp: sympy.Poly, varset: VarSet) -> Poly:
    """
    Convert a sympy Poly whose generators are a subset of the VarSet

    Raises:
        VarSetMismatch: a generator is not a variable of the VarSet
    """
    names = [str(g) for g in sp.gens]
    idx = [varset.index(n) for n in names]
    terms = {}
    for monom, coeff in sp.terms():
        exps = [0] * varset.arity
        for i, e in zip(idx, monom):
            exps[i] = e
        terms[tuple(exps)] = to_rational(coeff)
    return Poly(varset, terms)


def from_sympy_expr(expr: sympy.Expr, varset: VarSet) -> Poly:
    gens = symbols_for(varset)
    extra = expr.free_symbols - set(gens)
    if extra:
        raise VarSetMismatch(f"symbols {sorted(map(str, extra))} are not in {varset}")
    return from_sympy_poly(sympy.Poly(expr, *gens, domain=QQ), varset)


def factor(p: Poly) -> Tuple[Fraction, List[Tuple[Poly, int]]]:
    """
    Factor over QQ

    Returns:
        (content, [(irreducible factor, multiplicity), ...]); factors are
        normalized so their leading canonical coefficient is 1 and sorted
        by printed form
    """
    content, pieces = to_sympy_poly(p).factor_list()
    content = to_rational(content)
    factors = []
    for piece, mult in pieces:
        q = from_sympy_poly(piece, p.varset)
        lc = q.leading_coefficient()
        content *= lc ** mult
        factors.append((q.normalized(), mult))
    factors.sort(key=lambda pair: (pair[0].total_degree, str(pair[0])))
    return content, factors


def gcd(p: Poly, q: Poly) -> Poly:
    if p.varset != q.varset:
        raise VarSetMismatch(f"{p.varset} vs {q.varset}")
    g = to_sympy_poly(p).gcd(to_sympy_poly(q))
    return from_sympy_poly(g, p.varset).normalized()


def exact_divide(p: Poly, q: Poly) -> Optional[Poly]:
    """Return p / q when q divides p exactly, otherwise None"""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quotient, remainder = to_sympy_poly(p).div(to_sympy_poly(q))
    if not remainder.is_zero:
        return None
    return from_sympy_poly(quotient, p.varset)


def root_multiplicity(p: Poly, name: str, value: Fraction) -> int:
    """Order of vanishing of a univariate polynomial at a rational value"""
    if p.is_zero():
        raise ZeroDivisionError("the zero polynomial vanishes to infinite order")
    v = Poly.variable(p.varset, name)
    linear = v - value
    count = 0
    while True:
        q = exact_divide(p, linear)
        if q is None:
            return count
        p = q
        count += 1


def resultant(p: Poly, q: Poly, name: str) -> Poly:
    """
    Resultant of p and q with respect to one variable

    The result lives over the same VarSet and no longer involves name.
    """
    if p.varset != q.varset:
        raise VarSetMismatch(f"{p.varset} vs {q.varset}")
    if p.is_zero() or q.is_zero():
        return Poly.zero(p.varset)
    if q.degree_in(name) == 0:
        return q ** p.degree_in(name)
    if p.degree_in(name) == 0:
        return p ** q.degree_in(name)
    expr = sympy.resultant(to_sympy_expr(p), to_sympy_expr(q), sympy.Symbol(name))
    return from_sympy_expr(sympy.expand(expr), p.varset)


def same_ideal(first: Sequence[Poly], second: Sequence[Poly]) -> bool:
    """Whether two generator lists over one VarSet span the same ideal of QQ[vars]"""
    gens = [p for p in list(first) + list(second) if not p.is_zero()]
    if not gens:
        return True
    varset = gens[0].varset
    if any(p.varset != varset for p in gens):
        raise VarSetMismatch("generators over different VarSets")
    used = set()
    for p in gens:
        used.update(p.variables())
    symbols = [sympy.Symbol(n) for n in varset.names if n in used]
    lhs = [to_sympy_expr(p) for p in first if not p.is_zero()]
    rhs = [to_sympy_expr(p) for p in second if not p.is_zero()]
    if not lhs or not rhs:
        return not lhs and not rhs
    if not symbols:
        return True
    lhs_basis = sympy.groebner(lhs, *symbols, order='grevlex', domain=QQ)
    rhs_basis = sympy.groebner(rhs, *symbols, order='grevlex', domain=QQ)
    return all(lhs_basis.contains(e) for e in rhs) and all(rhs_basis.contains(e) for e in lhs)


@dataclass
class PointSet:
    """Zero-dimensional solution set split into rational and non-rational points"""

    rational: List[Dict[str, Fraction]] = field(default_factory=list)
    irrational: int = 0
    positive_dimensional: bool = False


def solve_points(equations: Sequence[Poly], varset: VarSet) -> PointSet:
    """
    Solve a polynomial system over the algebraic closure of QQ

    Rational points are returned explicitly; algebraic points are only
    counted. A solution with free parameters marks the set positive
    dimensional.
    """
    gens = symbols_for(varset)
    exprs = [to_sympy_expr(e) for e in equations if not e.is_zero()]
    result = PointSet()
    if not exprs:
        result.positive_dimensional = True
        return result
    for sol in sympy.solve(exprs, gens, dict=True):
        if len(sol) < len(gens) or any(value.free_symbols for value in sol.values()):
            result.positive_dimensional = True
            continue
        if all(value.is_Rational for value in sol.values()):
            result.rational.append({str(s): to_rational(v) for s, v in sol.items()})
        else:
            result.irrational += 1
    result.rational.sort(key=lambda pt: tuple(pt[n] for n in varset.names))
    logger.debug("solved %d equations: %d rational, %d irrational points",
                 len(exprs), len(result.rational), result.irrational)
    return result


# Linear algebra over QQ

def _domain_matrix(rows: Sequence[SparseRow], ncols: int) -> DomainMatrix:
    rep = {}
    for i, row in enumerate(rows):
        entries = {j: QQ(v.numerator, v.denominator) for j, v in row.items() if v}
        if entries:
            rep[i] = entries
    return DomainMatrix(rep, (len(rows), ncols), QQ)


def _rows_of(matrix: DomainMatrix) -> List[SparseRow]:
    nrows = matrix.shape[0]
    dod = matrix.to_dod()
    return [{j: to_rational(v) for j, v in dod.get(i, {}).items()} for i in range(nrows)]


def rank(rows: Sequence[SparseRow], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return _domain_matrix(rows, ncols).rank()


def rref(rows: Sequence[SparseRow], ncols: int) -> Tuple[List[SparseRow], Tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns"""
    if not rows or not ncols:
        return [], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    return _rows_of(reduced)[:len(pivots)], tuple(pivots)


def nullspace(rows: Sequence[SparseRow], ncols: int) -> List[List[Fraction]]:
    """Basis of the right kernel, as dense vectors"""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    kernel = _domain_matrix(rows, ncols).nullspace()
    return [[row.get(j, Fraction(0)) for j in range(ncols)] for row in _rows_of(kernel)]


def solve_linear(rows: Sequence[SparseRow], rhs: Sequence[Fraction], ncols: int) -> Optional[List[Fraction]]:
    """
    One solution of the system rows . s = rhs (free unknowns set to zero)

    Returns:
        The solution vector, or None when the system is inconsistent
    """
    augmented = []
    for row, value in zip(rows, rhs):
        extended = dict(row)
        if value:
            extended[ncols] = Fraction(value)
        augmented.append(extended)
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row.get(ncols, Fraction(0))
    return solution


def invert(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Inverse of a square rational matrix (raises ValueError when singular)"""
    n = len(matrix)
    rows = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
    dm = _domain_matrix(rows, n)
    if dm.rank() < n:
        raise ValueError("matrix is singular")
    inverse = _rows_of(dm.inv())
    return [[row.get(j, Fraction(0)) for j in range(n)] for row in inverse]
