"""
Error hierarchy

Every failure the toolkit reports is a DuvalError. Input problems (bad
files, bad flags, unknown fixtures) map to exit code 2; mathematical
precondition failures map to exit code 3.
"""


class DuvalError(Exception):
    """Base class for all toolkit errors"""

    exit_code = 1


class InputError(DuvalError):
    """Malformed input: parse errors, unknown names, bad flags"""

    exit_code = 2


class MathError(DuvalError):
    """A mathematical precondition of an operation does not hold"""

    exit_code = 3


# Input errors

class ParseError(InputError):
    pass


class VarSetMismatch(InputError):
    pass


class FixtureNotFound(InputError):
    pass


class FixtureParseError(InputError):
    pass


# Mathematical errors

class ZeroPolynomialError(MathError):
    pass


class NotStabilized(MathError):
    """Jet linear algebra did not certify m^D inside the Jacobian ideal"""

    def __init__(self, message: str, degree_bound: int = None):
        super().__init__(message)
        self.degree_bound = degree_bound


class QuotientChartUnsupported(MathError):
    pass


class UnsupportedCenter(MathError):
    pass


class DegenerateCenter(MathError):
    pass


class InputNotNormalForm(MathError):
    pass


class StrictTransformMissesGraph(MathError):
    pass


class NotD5(MathError):
    pass


class DFlPosition(MathError):
    """The curve meets the long tail of the D5 graph"""


class ReductionDiverged(MathError):
    def __init__(self, message: str, monomial: str = None):
        super().__init__(message)
        self.monomial = monomial


class CurveInsideDivisor(MathError):
    pass


class Underdetermined(MathError):
    pass


class Inconsistent(MathError):
    pass


class ChartMismatch(MathError):
    pass


class NotApplicable(MathError):
    pass
