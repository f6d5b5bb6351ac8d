"""
Exact Polynomials

This module provides multivariate polynomials with rational coefficients
over a named, ordered variable set, together with the jet operations
(truncation, multiplicity, weighted order) every other module builds on.
Coefficients are fractions.Fraction; floating point never enters.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import VarSetMismatch, ZeroPolynomialError

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class VarSet:
    """Ordered list of distinct variable names"""

    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, 'names', names)
        if len(set(names)) != len(names):
            raise VarSetMismatch(f"duplicate variable names in {names}")
        for name in names:
            if not name.isidentifier():
                raise VarSetMismatch(f"invalid variable name {name!r}")

    @classmethod
    def of(cls, *names: str) -> 'VarSet':
        """
        Build a VarSet from names or a single whitespace separated string

        Args:
            names: Variable names, e.g. VarSet.of('x', 'y') or VarSet.of('x y z t')
        """
        if len(names) == 1 and ' ' in names[0].strip():
            names = tuple(names[0].split())
        return cls(tuple(names))

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise VarSetMismatch(f"variable {name!r} not in {self}") from None

    def extend(self, *names: str) -> 'VarSet':
        """Return a VarSet with the new names appended (existing names are kept once)"""
        extra = tuple(n for n in names if n not in self.names)
        return VarSet(self.names + extra)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __iter__(self):
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __str__(self) -> str:
        return 'vars: ' + ' '.join(self.names)


@dataclass(frozen=True)
class Monomial:
    """Exponent vector aligned with a VarSet"""

    exponents: Exponents

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(weights, self.exponents))

    def divides(self, other: 'Monomial') -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


@dataclass(frozen=True)
class JetBound:
    """Truncation order D of a jet"""

    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"jet bound must be at least 1, got {self.degree}")


def _order_key(exps: Exponents):
    # graded lexicographic, largest first
    return (-sum(exps), tuple(-e for e in exps))


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Exact rational polynomial over a VarSet"""

    __slots__ = ('varset', '_terms')

    def __init__(self, varset: VarSet, terms: Optional[Mapping] = None):
        """
        Initialize a polynomial

        Args:
            varset: Variable set the exponents are aligned with
            terms: Mapping from exponent tuples (or Monomials) to coefficients
        """
        self.varset = varset
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if isinstance(exps, Monomial):
                exps = exps.exponents
            exps = tuple(int(e) for e in exps)
            if len(exps) != varset.arity or any(e < 0 for e in exps):
                raise VarSetMismatch(f"exponents {exps} do not fit {varset}")
            value = cleaned.get(exps, Fraction(0)) + Fraction(coeff)
            if value:
                cleaned[exps] = value
            else:
                cleaned.pop(exps, None)
        self._terms = cleaned

    # Constructors

    @classmethod
    def zero(cls, varset: VarSet) -> 'Poly':
        return cls(varset)

    @classmethod
    def constant(cls, varset: VarSet, value: Scalar) -> 'Poly':
        return cls(varset, {(0,) * varset.arity: value})

    @classmethod
    def variable(cls, varset: VarSet, name: str) -> 'Poly':
        exps = [0] * varset.arity
        exps[varset.index(name)] = 1
        return cls(varset, {tuple(exps): 1})

    @classmethod
    def monomial(cls, varset: VarSet, powers: Mapping[str, int], coeff: Scalar = 1) -> 'Poly':
        exps = [0] * varset.arity
        for name, e in powers.items():
            exps[varset.index(name)] += e
        return cls(varset, {tuple(exps): coeff})

    @classmethod
    def _raw(cls, varset: VarSet, terms: Dict[Exponents, Fraction]) -> 'Poly':
        poly = cls.__new__(cls)
        poly.varset = varset
        poly._terms = terms
        return poly

    # Arithmetic

    def _coerce(self, other) -> 'Poly':
        if isinstance(other, Poly):
            if other.varset != self.varset:
                raise VarSetMismatch(f"{self.varset} vs {other.varset}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.varset, other)
        return NotImplemented

    def __add__(self, other) -> 'Poly':
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            value = terms.get(exps, 0) + c
            if value:
                terms[exps] = value
            else:
                terms.pop(exps, None)
        return Poly._raw(self.varset, terms)

    __radd__ = __add__

    def __neg__(self) -> 'Poly':
        return Poly._raw(self.varset, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> 'Poly':
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Poly':
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'Poly':
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero(self.varset)
            return Poly._raw(self.varset, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                value = terms.get(exps, 0) + c1 * c2
                if value:
                    terms[exps] = value
                else:
                    terms.pop(exps, None)
        return Poly._raw(self.varset, terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> 'Poly':
        if not isinstance(other, (int, Fraction)) or not other:
            raise ZeroDivisionError("polynomials divide only by nonzero scalars here")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, exponent: int) -> 'Poly':
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(self.varset, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.varset, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.varset == other.varset and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.varset, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Inspection

    def terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical graded-lex order, largest first"""
        return [(Monomial(e), self._terms[e]) for e in sorted(self._terms, key=_order_key)]

    def items(self) -> Iterable[Tuple[Exponents, Fraction]]:
        return self._terms.items()

    def coefficient(self, powers: Union[Exponents, Mapping[str, int]]) -> Fraction:
        if isinstance(powers, Mapping):
            exps = [0] * self.varset.arity
            for name, e in powers.items():
                exps[self.varset.index(name)] = e
            powers = tuple(exps)
        return self._terms.get(tuple(powers), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.varset.arity, Fraction(0))

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    @property
    def num_terms(self) -> int:
        return len(self._terms)

    def variables(self) -> List[str]:
        """Names of the variables that actually occur"""
        used = [any(e[i] for e in self._terms) for i in range(self.varset.arity)]
        return [n for n, u in zip(self.varset.names, used) if u]

    def degree_in(self, name: str) -> int:
        i = self.varset.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[min(self._terms, key=_order_key)]

    def normalized(self) -> 'Poly':
        """Scale so the leading canonical coefficient is 1"""
        lc = self.leading_coefficient()
        return self if not lc else self / lc

    # Jets and orders

    def homogeneous_part(self, degree: int) -> 'Poly':
        return Poly._raw(self.varset, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def truncate(self, bound: Union[JetBound, int]) -> 'Poly':
        """Drop all terms of total degree above the bound"""
        degree = bound.degree if isinstance(bound, JetBound) else bound
        return Poly._raw(self.varset, {e: c for e, c in self._terms.items() if sum(e) <= degree})

    @staticmethod
    def _cut(p: 'Poly', bound: Optional[int]) -> 'Poly':
        return p if bound is None else p.truncate(bound)

    def multiplicity_at_origin(self) -> int:
        if not self._terms:
            raise ZeroPolynomialError("multiplicity of the zero polynomial is undefined")
        return min(sum(e) for e in self._terms)

    def lowest_form(self) -> 'Poly':
        """Tangent cone: the homogeneous part of least degree"""
        return self.homogeneous_part(self.multiplicity_at_origin())

    def weight_vector(self, weights) -> List[int]:
        if isinstance(weights, Mapping):
            missing = [n for n in self.varset.names if n not in weights]
            if missing:
                raise VarSetMismatch(f"no weight given for {missing}")
            weights = [weights[n] for n in self.varset.names]
        weights = [int(w) for w in weights]
        if len(weights) != self.varset.arity:
            raise VarSetMismatch(f"{len(weights)} weights for {self.varset}")
        if any(w <= 0 for w in weights):
            raise ValueError(f"weights must be positive, got {weights}")
        return weights

    def weighted_order(self, weights) -> int:
        """
        Minimum weighted degree over all terms

        Args:
            weights: Positive integers, as a sequence aligned with the VarSet
                or a mapping from variable name to weight
        """
        if not self._terms:
            raise ZeroPolynomialError("weighted order of the zero polynomial is undefined")
        w = self.weight_vector(weights)
        return min(sum(a * b for a, b in zip(w, e)) for e in self._terms)

    def order_in(self, names: Iterable[str]) -> int:
        """Minimal degree in the given subset of variables (multiplicity along a coordinate center)"""
        if not self._terms:
            raise ZeroPolynomialError("order of the zero polynomial is undefined")
        idx = [self.varset.index(n) for n in names]
        return min(sum(e[i] for i in idx) for e in self._terms)

    # Calculus and substitutions

    def partial(self, name: str) -> 'Poly':
        i = self.varset.index(name)
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                exps = list(e)
                exps[i] -= 1
                terms[tuple(exps)] = c * e[i]
        return Poly._raw(self.varset, terms)

    def substitute(self, mapping: Mapping[str, 'Poly'], target: Optional[VarSet] = None,
                   bound: Optional[int] = None) -> 'Poly':
        """
        Compose with a substitution map

        Variables missing from the map are sent to themselves, so they must
        exist in the target VarSet.

        Args:
            mapping: Variable name -> image polynomial (all over one VarSet)
            target: VarSet of the result (default: the images' VarSet)
            bound: When given, every intermediate product is truncated at this degree

        Returns:
            The composed polynomial over the target VarSet
        """
        for name in mapping:
            self.varset.index(name)
        if target is None:
            target = next(iter(mapping.values())).varset if mapping else self.varset
        images = []
        for name in self.varset.names:
            image = mapping.get(name)
            if image is None:
                image = Poly.variable(target, name)
            elif image.varset != target:
                raise VarSetMismatch(f"image of {name} lives over {image.varset}, expected {target}")
            images.append(image)

        cache: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] if e == 1 else self._cut(power(i, e - 1) * images[i], bound)
            return cache[key]

        result = Poly.zero(target)
        for exps, c in self._terms.items():
            term = Poly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = self._cut(term * power(i, e), bound)
            result = result + term
        return result

    def translate(self, point) -> 'Poly':
        """Expand p(v + point); point is a sequence aligned with the VarSet or a name mapping"""
        if not isinstance(point, Mapping):
            if len(point) != self.varset.arity:
                raise VarSetMismatch(f"point {point} does not fit {self.varset}")
            point = dict(zip(self.varset.names, point))
        mapping = {name: Poly.variable(self.varset, name) + Fraction(value)
                   for name, value in point.items() if value}
        return self.substitute(mapping, self.varset) if mapping else self

    def restrict(self, values: Mapping[str, Scalar]) -> 'Poly':
        """Set some variables to constants, keeping the VarSet"""
        mapping = {name: Poly.constant(self.varset, v) for name, v in values.items()}
        return self.substitute(mapping, self.varset) if mapping else self

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        value = self.restrict(point)
        if not value.is_constant():
            raise VarSetMismatch(f"evaluation point misses variables {value.variables()}")
        return value.constant_term

    def embed(self, target: VarSet) -> 'Poly':
        """Re-express over a VarSet containing every variable of this one"""
        if target == self.varset:
            return self
        idx = [target.index(n) for n in self.varset.names]
        terms = {}
        for e, c in self._terms.items():
            exps = [0] * target.arity
            for i, k in zip(idx, e):
                exps[i] = k
            terms[tuple(exps)] = c
        return Poly._raw(target, terms)

    def divide_by_power(self, name: str) -> Tuple[int, 'Poly']:
        """
        Split off the largest power of a variable

        Returns:
            (k, q) with self = name^k * q and q not divisible by name
        """
        if not self._terms:
            raise ZeroPolynomialError(f"cannot divide the zero polynomial by powers of {name}")
        i = self.varset.index(name)
        k = min(e[i] for e in self._terms)
        if not k:
            return 0, self
        terms = {}
        for e, c in self._terms.items():
            exps = list(e)
            exps[i] -= k
            terms[tuple(exps)] = c
        return k, Poly._raw(self.varset, terms)

    # Printing

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        pieces = []
        for mono, c in self.terms():
            factors = []
            for name, e in zip(self.varset.names, mono.exponents):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(c)
            if not factors:
                body = _format_coefficient(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = _format_coefficient(magnitude) + '*' + '*'.join(factors)
            sign = '-' if c < 0 else '+'
            if not pieces:
                pieces.append(body if sign == '+' else '-' + body)
            else:
                pieces.append(f"{sign} {body}")
        return ' '.join(pieces)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, {' '.join(self.varset.names)!r})"
