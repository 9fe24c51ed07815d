"""Spectral parameters (nu, m) shared by every module."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class SpectralParams:
    """Magnetic strength ``nu`` and hyperbolic Landau level ``m``.

    Valid pairs satisfy ``2*nu > 1`` and ``0 <= m <= floor(nu - 1/2)``.
    """

    nu: float
    m: int

    def __post_init__(self):
        nu = float(self.nu)
        if not math.isfinite(nu) or not 2.0 * nu > 1.0:
            raise ParameterError(f"2ν>1 violated (nu={self.nu})")
        if int(self.m) != self.m or self.m < 0:
            raise ParameterError(f"m must be a non-negative integer, got {self.m}")
        if self.m > math.floor(nu - 0.5):
            raise ParameterError(f"m ≤ ⌊ν−1/2⌋ violated (nu={self.nu}, m={self.m})")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "m", int(self.m))

    @property
    def beta(self) -> float:
        """Second Jacobi index ``2(nu - m) - 1`` of the level-``m`` basis."""
        return 2.0 * (self.nu - self.m) - 1.0

    @property
    def weight_exponent(self) -> float:
        """Exponent ``2 nu - 2`` of the measure ``(1 - |z|^2)^(2nu-2) dmu``."""
        return 2.0 * self.nu - 2.0
