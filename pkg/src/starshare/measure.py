"""Observables, POVM elements and post-measurement state updates.

States are kept unnormalized throughout; the trace of an updated state is
the probability of the outcome sequence that produced it. Zero-probability
branches stay as zero matrices.

The update functions broadcast over leading axes, so a stack of states can
be pushed through one measurement stage at once.
"""
from __future__ import annotations

import math

import numpy as np

from .model import PHYS_TOL, ConfigError
from .qcore import I2, SIGMA_X, SIGMA_Z, partial_trace_second, sandwich, tensor

OUTCOMES = (1, -1)


def _check_outcome(a) -> None:
    if np.any((np.asarray(a) != 1) & (np.asarray(a) != -1)):
        raise ValueError(f"outcome must be +1 or -1, got {a!r}")


def _in_plane(angle: float) -> np.ndarray:
    return math.sin(angle) * SIGMA_X + math.cos(angle) * SIGMA_Z


def alice_observable(x: int, k: int) -> np.ndarray:
    """Alice's observable for input ``x``: angle ``x*pi/k`` in the x-z plane.

    ``x == k`` is accepted and gives ``-alice_observable(0, k)``, the closing
    link of the chain.
    """
    if not 0 <= x <= k:
        raise ValueError(f"Alice setting x={x} outside 0..{k}")
    if x == k:
        return -SIGMA_Z.copy()
    return _in_plane(x * math.pi / k)


def bob_factor(y: int, k: int) -> np.ndarray:
    """Bob's single-branch observable for input ``y``: angle ``(2y+1)*pi/(2k)``."""
    if not 0 <= y <= k - 1:
        raise ValueError(f"Bob setting y={y} outside 0..{k - 1}")
    return _in_plane((2 * y + 1) * math.pi / (2 * k))


def povm_element(obs: np.ndarray, a) -> np.ndarray:
    """Projector ``(I + a*obs)/2``."""
    _check_outcome(a)
    a = np.asarray(a, dtype=float)[..., None, None]
    return (I2 + a * obs) / 2


def _check_pointer(f: float, g: float) -> None:
    if not (0.0 <= f <= 1.0 and 0.0 <= g <= 1.0) or f * f + g * g > 1.0 + PHYS_TOL:
        raise ConfigError(f"unphysical weak measurement F={f!r}, G={g!r}")


def weak_update(rho: np.ndarray, obs: np.ndarray, a, f: float, g: float) -> np.ndarray:
    """Unnormalized state after a weak measurement of ``obs`` with outcome ``a``.

    ``F/2 rho + (1+aG-F)/2 M+ rho M+ + (1-aG-F)/2 M- rho M-`` with ``M+-`` the
    projectors of ``obs``. Summed over ``a`` this is the channel
    ``F rho + (1-F)(M+ rho M+ + M- rho M-)``; each branch is positive for
    ``F**2 + G**2 <= 1``.
    """
    _check_pointer(f, g)
    _check_outcome(a)
    a = np.asarray(a, dtype=float)[..., None, None]
    m_plus = (I2 + obs) / 2
    m_minus = (I2 - obs) / 2
    return (
        (f / 2) * rho
        + ((1 + a * g - f) / 2) * sandwich(m_plus, rho)
        + ((1 - a * g - f) / 2) * sandwich(m_minus, rho)
    )


def projective_update(rho: np.ndarray, obs: np.ndarray, a) -> np.ndarray:
    """``M_a rho M_a`` for the sharp measurement of ``obs``."""
    return sandwich(povm_element(obs, a), rho)


def bob_project_and_reduce(rho_ab: np.ndarray, y: int, b: int, k: int) -> np.ndarray:
    """Alice's unnormalized reduced state after Bob measures ``y`` and sees ``b``."""
    _check_outcome(b)
    proj = tensor(I2, povm_element(bob_factor(y, k), b))
    return partial_trace_second(sandwich(proj, rho_ab))
