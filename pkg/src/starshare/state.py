"""Two-qubit source states: the singlet and its white/colored noise mixtures.

Basis ordering is ``|00>, |01>, |10>, |11>`` with Alice's qubit first.
"""
from __future__ import annotations

import numpy as np

from .model import ConfigError
from .qcore import I4

_PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def singlet() -> np.ndarray:
    """Density matrix of ``(|01> - |10>)/sqrt(2)``."""
    return np.outer(_PSI_MINUS, _PSI_MINUS.conj())


def colored_floor() -> np.ndarray:
    """``(|01><01| + |10><10|)/2``, the colored-noise component."""
    return np.diag([0.0, 0.5, 0.5, 0.0]).astype(complex)


def noisy_source(v: float, r: float) -> np.ndarray:
    """Singlet with visibility ``v``; a fraction ``r`` of the noise is colored."""
    for name, x in (("v", v), ("r", r)):
        if not 0.0 <= x <= 1.0:
            raise ConfigError(f"{name}={x!r} outside [0, 1]")
    noise = (1.0 - r) * I4 / 4 + r * colored_floor()
    return v * singlet() + (1.0 - v) * noise
