"""Result containers shared across modules."""

from __future__ import annotations

import cmath
import enum
import math
from typing import NamedTuple


class Method(enum.Enum):
    EXACT_FINITE_L = "exact-finite-L"
    SERIES = "series"
    INTEGRAL = "integral"
    CLOSED_FORM = "closed-form"
    CRITICAL_H = "critical-h"
    XX_LIMIT = "xx-limit"
    SMALL_TAU = "small-tau"


class EntropyResult(NamedTuple):
    """Entropy value, the route that produced it and an error estimate."""

    value: float
    method: Method
    err_estimate: float


class LogValue(NamedTuple):
    """A complex number ``exp(logabs + i phase)`` kept in log form."""

    logabs: float
    phase: float

    @classmethod
    def from_log(cls, z: complex) -> "LogValue":
        return cls(z.real, math.remainder(z.imag, 2 * math.pi))

    def to_complex(self) -> complex:
        return cmath.exp(complex(self.logabs, self.phase))
