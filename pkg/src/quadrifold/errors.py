"""Exception hierarchy.

Every error raised by the package derives from ``QuadrifoldError`` so the CLI
can map families of failures onto exit codes.
"""


class QuadrifoldError(Exception):
    pass


class InputError(QuadrifoldError):
    """Malformed or inconsistent input (CLI exit code 1)."""


class BudgetError(QuadrifoldError):
    """A search or sampler ran out of its allowance (CLI exit code 2)."""


class InternalInvariantError(QuadrifoldError):
    """A property guaranteed by the mathematics failed (CLI exit code 3)."""


# field / form arithmetic
class SpecMismatch(InputError):
    pass


class DivisionByZero(QuadrifoldError, ZeroDivisionError):
    pass


class NotASquare(QuadrifoldError, ValueError):
    pass


class InexactDivision(QuadrifoldError, ValueError):
    pass


class ZeroForm(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class ExtensionTooLarge(BudgetError):
    pass


# fibrations
class DegenerateForm(InputError):
    pass


class Inconsistent(InputError):
    pass


class SamplingExhausted(BudgetError):
    pass


# sections
class BudgetExceeded(BudgetError):
    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class NotEnoughInterpolationPoints(BudgetError):
    pass


class PreconditionError(InputError):
    pass


class ConstraintOnDiscriminant(InputError):
    pass


class ConstraintOffQuadric(InputError):
    pass


class InvalidSection(InputError):
    pass


# lines
class PointNotOnQuadric(InputError):
    pass


class SingularFiber(InputError):
    pass


class FiberMismatch(InputError):
    pass


class NoRationalFiberPoint(InternalInvariantError):
    pass


# hecke
class LineNotIsotropic(InputError):
    pass


class SingularFiberAtP(InputError):
    pass


class NoGradedAutomorphism(InputError):
    pass


class SectionNotOnInput(InputError):
    pass


# chow
class DimensionMismatch(InputError):
    pass


class NotTopDimensional(InputError):
    pass
