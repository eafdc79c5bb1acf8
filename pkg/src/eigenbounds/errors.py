"""Exception hierarchy.

Input problems derive from ``ValueError``; numerical breakdowns derive from
``ArithmeticError``. The CLI maps the first family to exit code 2 and the
second to exit code 3.
"""


class InputError(ValueError):
    """Invalid data or parameters supplied by the caller."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed to produce a certified answer."""


# spectra
class NotSorted(InputError):
    pass


class NonFinite(InputError):
    pass


class PrefixTooLong(InputError):
    pass


# profiles
class BadDensity(InputError):
    pass


class BadAngle(InputError):
    pass


class BadRatio(InputError):
    pass


class BadLambda1(InputError):
    pass


class NotSPD(InputError):
    pass


class NonPositiveP(InputError):
    pass


# gap functions and solvers
class DomainError(InputError):
    pass


class LengthMismatch(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class InadmissibleSpectrum(InputError):
    """The prefix already violates the inequality one index lower, so no
    root with the required sign structure exists above the last eigenvalue."""


class ComplexRoots(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


# generators
class CountTooLarge(InputError):
    pass


class NonPositiveDensity(InputError):
    pass


# verification
class MissingNextEigenvalue(InputError):
    pass


class GNotMonotone(InputError):
    pass


class GNegative(InputError):
    pass


class QuadratureNonConvergence(NumericalError):
    pass
