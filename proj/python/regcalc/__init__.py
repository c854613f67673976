"""Stochastic calculus via regularization.

Paths are plain numpy arrays sampled on a uniform grid of [0, horizon];
estimators return dicts with the per-eps values and the extrapolated limit.
"""

from ._regcalc import (
    NumericalError,
    ProcessSpec,
    VanillaSolution,
    banach_ito_check,
    covariation,
    derive_seed,
    ensemble,
    forward_integral,
    ito_check,
    kolmogorov_ou,
    pairing_trace,
    quadratic_variation,
    replicate,
    set_thread_count,
    simulate,
    tensor_to_operator,
    trace_and_bounds,
    window_qv,
)

__all__ = [
    "NumericalError",
    "ProcessSpec",
    "VanillaSolution",
    "banach_ito_check",
    "covariation",
    "derive_seed",
    "ensemble",
    "forward_integral",
    "ito_check",
    "kolmogorov_ou",
    "pairing_trace",
    "quadratic_variation",
    "replicate",
    "set_thread_count",
    "simulate",
    "tensor_to_operator",
    "trace_and_bounds",
    "window_qv",
]
