"""Block entanglement entropy of the XY spin chain, computed several ways.

The finite-L entropy comes from the spectrum of the block correlation
matrix; the large-L limit comes from theta-function and elliptic-integral
formulas; determinant identities tie the two together.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DegenerateError,
    DomainError,
    ExcludedPointError,
    NumericalError,
    OnCutError,
    PhaseBoundaryError,
    PurityError,
    QuadratureError,
    SingularityError,
    SizeError,
    SmallTauError,
    XYEntropyError,
)
from .model import Case, ModelParams, Regime, classify, generator_Phi, symbol_g  # noqa: E402
from .results import EntropyResult, LogValue, Method  # noqa: E402
from .spectrum import binary_entropy, build_B, det_exact, entropy_exact, spectrum_nu  # noqa: E402
from .asymptotics import (  # noqa: E402
    ModuliData,
    compute_moduli,
    det_asymptotic,
    entropy_closed,
    entropy_critical_h,
    entropy_integral,
    entropy_series,
    entropy_small_tau,
    entropy_xx_limit,
    lambda_m,
)
from .special import ThetaParams, elliptic_K, theta3  # noqa: E402
from .fredholm import KernelSpec, fredholm_det  # noqa: E402
