"""
Random Test Data Sampler

This module generates seeded random inputs for the property suites:
coordinate changes, small rational polynomials, binary cubics and Case 2
coefficient records for the decision procedure.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .decider import PSI_VARS, D5NormalForm
from .poly import JetBound, Poly, VarSet

# phi monomials y^i z^j t^k read by the decision conditions, plus a few others
RECORD_KEYS = [(0, 0, 3), (0, 0, 4), (1, 0, 2), (0, 1, 2), (0, 2, 1), (1, 1, 1), (2, 0, 2), (0, 1, 3)]


class Sampler:
    """Seeded generator of random algebraic test data"""

    def __init__(self, seed: int = 42):
        """
        Initialize the sampler

        Args:
            seed: Random seed for reproducibility
        """
        self.rng = np.random.default_rng(seed)

    def rational(self, bound: int = 3, allow_zero: bool = True) -> Fraction:
        """
        Small random rational p/q

        Args:
            bound: Numerators lie in [-bound, bound], denominators in [1, bound]
            allow_zero: Whether 0 may be returned
        """
        while True:
            p = int(self.rng.integers(-bound, bound + 1))
            q = int(self.rng.integers(1, bound + 1))
            if p or allow_zero:
                return Fraction(p, q)

    def unimodular_matrix(self, n: int, steps: int = 6) -> List[List[int]]:
        """Integer matrix of determinant +-1, a product of random elementary moves"""
        m = np.eye(n, dtype=np.int64)
        for _ in range(steps):
            i, j = self.rng.choice(n, size=2, replace=False)
            factor = int(self.rng.integers(-2, 3))
            m[i] += factor * m[j]
        if self.rng.random() < 0.5:
            m[[0, 1]] = m[[1, 0]]
        return m.tolist()

    def _linear_images(self, varset: VarSet, targets: Sequence[str], sources: Sequence[str]) -> Dict[str, Poly]:
        matrix = self.unimodular_matrix(len(sources)) if len(sources) > 1 else [[1]]
        mapping = {}
        for row, name in zip(matrix, targets):
            image = Poly.zero(varset)
            for c, other in zip(row, sources):
                image = image + Poly.variable(varset, other) * c
            mapping[name] = image
        return mapping

    def linear_change(self, varset: VarSet, keep: Optional[Sequence[str]] = None) -> Dict[str, Poly]:
        """
        Random invertible linear substitution

        Args:
            varset: Variables to substitute
            keep: Variables whose span must be preserved; each is sent into
                the span of these variables only
        """
        kept = [n for n in varset.names if n in set(keep or ())]
        rest = [n for n in varset.names if n not in kept]
        if not kept:
            return self._linear_images(varset, rest, rest)
        mapping = self._linear_images(varset, kept, kept)
        for name, image in self._linear_images(varset, rest, rest).items():
            for other in kept:
                image = image + Poly.variable(varset, other) * int(self.rng.integers(-1, 2))
            mapping[name] = image
        return mapping

    def polynomial(self, varset: VarSet, degree: int = 3, terms: int = 4, min_degree: int = 0) -> Poly:
        """Random polynomial with at most the given number of terms"""
        terms_dict = {}
        for _ in range(terms):
            d = int(self.rng.integers(min_degree, degree + 1))
            exps = [0] * varset.arity
            for _ in range(d):
                exps[int(self.rng.integers(varset.arity))] += 1
            terms_dict[tuple(exps)] = self.rational(allow_zero=False)
        return Poly(varset, terms_dict)

    def binary_cubic(self, varset: VarSet, names: Sequence[str] = ('y', 'z')) -> Poly:
        """Product of three random rational linear forms in two variables"""
        a, b = (Poly.variable(varset, n) for n in names)
        cubic = Poly.constant(varset, 1)
        for _ in range(3):
            cubic = cubic * (a * self.rational(allow_zero=False) + b * self.rational())
        return cubic

    def case2_record(self, density: float = 0.5) -> D5NormalForm:
        """
        Random Case 2 normal form

        Args:
            density: Probability that each listed coefficient is nonzero
        """
        phi = {}
        for key in RECORD_KEYS:
            if self.rng.random() < density:
                phi[key] = self.rational(allow_zero=False)
        psi = Poly.zero(PSI_VARS)
        if self.rng.random() < density:
            psi = Poly.constant(PSI_VARS, self.rational(allow_zero=False))
        k = int(self.rng.integers(1, 4))
        a = self.rational() if self.rng.random() < density else Fraction(0)
        b = a if k == 1 else Fraction(0)
        return D5NormalForm(psi=psi, a=a, k=k, b=b, phi=phi, degree_bound=JetBound(8))
