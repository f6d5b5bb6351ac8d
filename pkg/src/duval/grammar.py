"""
Polynomial text grammar

Parses the text forms shared by fixtures and the command line:

    vars: x y z t
    3/2*x^2*y - t^3 + u
    (x, y, t)                  generator lists
    x=x*t, z=z*t               substitution maps
    x=4, y=3, z=2, t=2         weights (or the bare list 4,3,2,2)

Whitespace is ignored, `^` and `**` both mean power and rationals are
written p/q. Floats, functions and unknown names are rejected.
"""

import logging
import re
from fractions import Fraction
from typing import Dict, List

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import CoercionFailed, PolynomialError
from tokenize import TokenError

from .errors import ParseError
from .poly import Poly, VarSet
from .sympy_bridge import from_sympy_expr, symbols_for

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (convert_xor,)


def parse_varset(text: str) -> VarSet:
    """Parse a `vars: x y z` header (the `vars:` prefix is optional)"""
    body = text.strip()
    if body.startswith('vars:'):
        body = body[len('vars:'):]
    names = body.replace(',', ' ').split()
    if not names:
        raise ParseError(f"no variables declared in {text!r}")
    try:
        return VarSet(tuple(names))
    except Exception as e:
        raise ParseError(str(e)) from e


def parse_poly(text: str, varset: VarSet) -> Poly:
    """
    Parse polynomial text over a VarSet

    Args:
        text: Polynomial text, e.g. '3/2*x^2*y - t^3 + u'
        varset: Variables the text may use

    Returns:
        Parsed polynomial

    Raises:
        ParseError: syntax error, float, unknown name or non-polynomial term
    """
    if not text or not text.strip():
        raise ParseError("empty polynomial text")
    local = {s.name: s for s in symbols_for(varset)}
    try:
        expr = parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, sympy.SympifyError) as e:
        raise ParseError(f"cannot parse {text!r}: {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise ParseError(f"{text!r} is not an expression")
    if expr.atoms(sympy.Float):
        raise ParseError(f"floating point coefficient in {text!r}; write rationals as p/q")
    unknown = expr.free_symbols - set(local.values())
    if unknown:
        raise ParseError(f"unknown variables {sorted(map(str, unknown))} in {text!r} ({varset})")
    try:
        return from_sympy_expr(sympy.expand(expr), varset)
    except (PolynomialError, CoercionFailed, ValueError) as e:
        raise ParseError(f"{text!r} is not a polynomial with rational coefficients: {e}") from e


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == ',' and depth == 0:
            parts.append(''.join(current))
            current = []
        else:
            current.append(ch)
    parts.append(''.join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_generators(text: str, varset: VarSet) -> List[Poly]:
    """Parse a generator list such as '(x, y, t)' or 'x^2 - t, y'"""
    body = text.strip()
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1]
    gens = [parse_poly(part, varset) for part in _split_top_level(body)]
    if not gens:
        raise ParseError(f"no generators in {text!r}")
    return gens


def parse_map(text: str, source: VarSet, target: VarSet = None) -> Dict[str, Poly]:
    """Parse a substitution map 'x=x*t, z=z*t'; images live over target (default source)"""
    target = target or source
    mapping = {}
    for part in _split_top_level(text):
        if '=' not in part:
            raise ParseError(f"map entry {part!r} has no '='")
        name, image = (s.strip() for s in part.split('=', 1))
        if name not in source:
            raise ParseError(f"map entry for unknown variable {name!r}")
        mapping[name] = parse_poly(image, target)
    return mapping


def parse_weights(text: str, varset: VarSet) -> Dict[str, int]:
    """Parse weights given as 'x=4,y=3' or as a list '4,3,2,2' aligned with the VarSet"""
    parts = [p for p in re.split(r'[,\s]+', text.strip()) if p]
    weights = {}
    try:
        if all('=' in p for p in parts):
            for p in parts:
                name, value = p.split('=', 1)
                if name not in varset:
                    raise ParseError(f"weight for unknown variable {name!r}")
                weights[name] = int(value)
        else:
            if len(parts) != varset.arity:
                raise ParseError(f"{len(parts)} weights for {varset}")
            weights = dict(zip(varset.names, (int(p) for p in parts)))
    except ValueError as e:
        raise ParseError(f"bad weights {text!r}: {e}") from e
    if any(w <= 0 for w in weights.values()):
        raise ParseError(f"weights must be positive: {text!r}")
    return weights


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {text!r}") from e
