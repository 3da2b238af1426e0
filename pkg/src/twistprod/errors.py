"""Exception hierarchy.

Every error raised by the library derives from :class:`TwistprodError`,
so callers (in particular the CLI) can distinguish library-level failures
from genuine bugs.
"""


class TwistprodError(Exception):
    """Base class for all twistprod errors."""


class PrecisionModeMismatch(TwistprodError):
    """Operands live in different coefficient domains."""


class DomainError(TwistprodError):
    """Argument outside the mathematical domain of the operation."""


class NonUnitLeadingCoeff(TwistprodError):
    """Series inversion rejected: |a(1)| below the safety threshold."""


class TruncationTooShort(TwistprodError):
    """Not enough coefficients to carry out the requested operation."""


class ModulusTooLarge(TwistprodError):
    """Character modulus beyond the configured bound."""


class ZeroDenominator(TwistprodError):
    """Linear twist with denominator zero."""


class NonUnitConstantTerm(TwistprodError):
    """Power-series logarithm needs constant term 1."""


class NoRationalFit(TwistprodError):
    """No rational function within the degree caps matches the series."""


class ZeroPolynomial(TwistprodError):
    """Division by the zero polynomial."""


class WrongShape(TwistprodError):
    """Rational local factor does not have the required numerator/denominator shape."""


class NotCoprime(TwistprodError):
    """Arguments required to be coprime are not."""


class NotSplit(TwistprodError):
    """Coefficient data fails the splitting test at the requested prime."""


class NotPrime(TwistprodError):
    """A prime-valued argument is not prime."""


class CongruenceViolation(TwistprodError):
    """Prime pair does not satisfy the required congruence."""


class SingularModel(TwistprodError):
    """Weierstrass model has vanishing discriminant."""


class MalformedFile(TwistprodError):
    """LFUNC file violates the format (carries line/field diagnostics)."""


class VersionUnsupported(TwistprodError):
    """LFUNC file declares a version this reader does not understand."""


class InvariantViolation(TwistprodError):
    """Constructed value violates a structural invariant of its type."""


class UnsupportedPrecision(TwistprodError):
    """Requested precision mode is not available for this operation."""
