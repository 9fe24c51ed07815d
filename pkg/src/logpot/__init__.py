"""Weighted logarithmic potential transform on hyperbolic Landau levels.

Bound-state bases, closed-form actions and singular values, each checked
against a quadrature oracle.
"""
from .errors import (
    DivergenceError,
    DomainError,
    LogPotError,
    ParameterError,
    PoleError,
    RangeError,
    SingularityError,
    SizeError,
    StepError,
)
from .params import SpectralParams
from .quadrature import DiskQuadrature, build_disk_rule, transform_numeric
from .spectrum import SpectrumTable, asymptotic_fit, build_table, singular_value_closed, singular_value_oracle
from .transform import full_action, radial_action, reconcile

__version__ = "0.1.0"

__all__ = [
    "DivergenceError",
    "DomainError",
    "LogPotError",
    "ParameterError",
    "PoleError",
    "RangeError",
    "SingularityError",
    "SizeError",
    "StepError",
    "SpectralParams",
    "DiskQuadrature",
    "build_disk_rule",
    "transform_numeric",
    "SpectrumTable",
    "asymptotic_fit",
    "build_table",
    "singular_value_closed",
    "singular_value_oracle",
    "full_action",
    "radial_action",
    "reconcile",
]
