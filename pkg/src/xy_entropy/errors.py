"""Exception hierarchy shared by every module."""


class XYEntropyError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(XYEntropyError, ValueError):
    """An argument lies outside the domain of the function."""


class PhaseBoundaryError(DomainError):
    """Parameters fall inside the exclusion band around a critical line."""

    exit_code = 2


class DegenerateError(XYEntropyError, ArithmeticError):
    """The symbol modulus vanishes (only possible on a phase boundary)."""


class SizeError(DomainError):
    """Block length exceeds the configured maximum."""


class NumericalError(XYEntropyError, ArithmeticError):
    """A computed quantity violates a structural invariant."""


class ConvergenceError(XYEntropyError, ArithmeticError):
    """A series needs more terms than allowed."""


class QuadratureError(XYEntropyError, ArithmeticError):
    """A quadrature rule failed to reach its tolerance."""


class PurityError(NumericalError):
    """The modular parameter came out with a non-negligible real part."""


class SmallTauError(DomainError):
    """tau0 is below the threshold where the theta series is used."""


class OnCutError(DomainError):
    """Evaluation point lies on a branch cut."""


class ExcludedPointError(DomainError):
    """Spectral parameter lies in an excluded neighbourhood."""

    exit_code = 2


class SingularityError(DomainError):
    """Spectral parameter lies on or inside the spectrum interval [-1, 1]."""


class OutputError(XYEntropyError, OSError):
    """Writing a result file failed; the message names the path."""
