"""Grunwald and Grunwald-Durrmeyer operators on [0, pi]."""

from ._core import (
    ConfigurationError,
    DomainError,
    EvaluationError,
    KernelPath,
    OperatorKind,
    RealFunction,
    Smoothness,
    apply,
    battery_function,
    battery_labels,
    chebyshev_nodes,
    delta_n,
    durrmeyer_coefficients,
    k_functional_upper,
    kernel_eval,
    kernel_mass_deviation,
    kernel_table,
    lagrange_basis,
    lebesgue_sum,
    m_n,
    operator_error,
    rate_fit,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
