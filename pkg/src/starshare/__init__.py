"""Network nonlocality sharing with sequential weak measurements in
(n, m, k) star networks."""

from .inequality import InequalityResult, analytic_bound, analytic_bound_noise, chained_value, ck, simulate_s
from .model import NetworkConfig, NoiseParams, ObserverSelection, WeakParams, optimal_f, symmetric_config

__all__ = [
    "InequalityResult",
    "NetworkConfig",
    "NoiseParams",
    "ObserverSelection",
    "WeakParams",
    "analytic_bound",
    "analytic_bound_noise",
    "chained_value",
    "ck",
    "optimal_f",
    "simulate_s",
    "symmetric_config",
]
