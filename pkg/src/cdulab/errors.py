"""Exception hierarchy.

Three operational groups, mirrored by the CLI exit codes:

  * ``FieldConstructionError`` -- GF(p^m) could not be built (exit 3);
  * ``ParameterError`` -- a builder or analysis precondition failed (exit 2);
  * everything else derives from ``CdulabError`` directly.
"""


class CdulabError(Exception):
    """Base class for all package-specific errors."""


class FieldConstructionError(CdulabError):
    """A field with the requested parameters cannot be constructed."""


class NonPrimeError(FieldConstructionError):
    """The requested characteristic is not a prime number."""


class FieldTooLargeError(FieldConstructionError):
    """p^m exceeds the supported table size."""


class ParameterError(CdulabError):
    """An operation or builder precondition does not hold."""


# ---- element arithmetic -------------------------------------------------

class FieldMismatchError(ParameterError):
    """Operands belong to different fields."""


class DivisionByZeroError(ParameterError, ZeroDivisionError):
    """Inversion of zero, or a negative power of zero."""


class BadTowerError(ParameterError):
    """The requested subfield order is not p^s with s dividing m."""


class ZeroElementError(ParameterError):
    """Zero was passed where a nonzero element is required."""


class BadDivisorError(ParameterError):
    """l does not divide q-1, or l <= 1."""


# ---- function models ----------------------------------------------------

class NotAPermutationError(ParameterError):
    """A map required to be a permutation is not one."""


# ---- analyzer ------------------------------------------------------------

class CEqualsOneError(ParameterError):
    """c = 1 is outside the c-differential setting (use classical mode)."""


# ---- construction builders ----------------------------------------------

class ForbiddenUError(ParameterError):
    """u takes one of the two excluded scalar values."""


class BadParametersError(ParameterError):
    """Family parameters violate a structural precondition."""


class ZeroGammaError(ParameterError):
    """gamma must be nonzero."""


class WrongCharacteristicError(ParameterError):
    """The construction requires a different field characteristic."""


class GammaNotDthRootError(ParameterError):
    """gamma^d != 1 for the derived d."""


class CoeffOutsideSubfieldError(ParameterError):
    """A coefficient does not lie in the required subfield."""


class BadGammaError(ParameterError):
    """gamma is zero or its relative trace does not vanish."""


class EvenQuotientError(ParameterError):
    """m / gcd(m, k) must be odd."""


class DegenerateCoefficientsError(ParameterError):
    """a1 equals a0^q, collapsing the construction."""


class ZeroTError(ParameterError):
    """The swap point t must be nonzero."""


class BadUError(ParameterError):
    """u must be a nonzero element of the base subfield."""


class PhiOneZeroError(ParameterError):
    """phi(1) vanishes, so phi cannot permute the base subfield."""


class GNotSubfieldPermutationError(ParameterError):
    """g restricted to the base subfield is not a permutation of it."""


class BadNError(ParameterError):
    """The extension degree n has the wrong divisibility by p."""


class GEscapesSubfieldError(ParameterError):
    """g does not map the base subfield into itself."""


class BadDivisorListError(ParameterError):
    """Some d_i does not divide q-1."""


# ---- criteria ------------------------------------------------------------

class ZeroAError(ParameterError):
    """The quadratic's linear coefficient a must be nonzero."""


class HRangeViolationError(ParameterError):
    """h does not map the psi-image into the nonzero base subfield."""
