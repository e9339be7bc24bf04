"""Parameter-space studies for the symmetric optimal-pointer scenarios.

Everything here runs on the closed forms and uses fixed iteration counts,
so identical inputs give bitwise-identical outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import bisect

from .inequality import analytic_bound, analytic_bound_noise, ck
from .model import NoiseParams, ObserverSelection, all_selections, optimal_f, symmetric_config

INV_PHI = (math.sqrt(5) - 1) / 2
PRE_GRID = 2001
G_TOL = 1e-9


def golden_max(func: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Argmax of a unimodal ``func`` on ``[lo, hi]`` by golden-section search."""
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = func(d)
    return 0.5 * (lo + hi)


def grid_then_golden(func: Callable[[float], float], lo: float = 0.0, hi: float = 1.0, tol: float = 1e-12) -> float:
    """Bracket the maximum on a fixed pre-grid, then refine by golden section."""
    grid = np.linspace(lo, hi, PRE_GRID)
    vals = [func(float(g)) for g in grid]
    i = int(np.argmax(vals))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, PRE_GRID - 1)])
    best = golden_max(func, a, b, tol)
    # the bracket end can win when the maximum sits on the boundary
    return max((best, float(grid[i])), key=func)


@dataclass(frozen=True)
class SweepRow:
    g: float
    s_values: dict[str, float]
    min_s: float
    classical_bound: float

    @property
    def all_violated(self) -> bool:
        return self.min_s > self.classical_bound


@dataclass(frozen=True)
class Window:
    """Open interval of ``G`` where every selected ``S_j`` exceeds ``k - 1``.

    ``lo``/``hi`` are ``None`` when the maximin value never violates.
    """

    lo: float | None
    hi: float | None
    g_star: float
    v_star: float

    @property
    def empty(self) -> bool:
        return self.lo is None


def _selections(n: int, m: int, selections: Sequence[ObserverSelection] | None) -> list[ObserverSelection]:
    if selections is None:
        return all_selections(n, m)
    return [j.validate(n, m) for j in selections]


def s_of_g(n: int, k: int, j: ObserverSelection, g: float) -> float:
    """``S_j`` in the symmetric ``(n, 2, k)`` scenario at precision ``g``."""
    return analytic_bound(symmetric_config(n, 2, k, [g]), j)


def min_s(n: int, k: int, selections: Sequence[ObserverSelection], g: float) -> float:
    config = symmetric_config(n, 2, k, [g])
    return min(analytic_bound(config, j) for j in selections)


def sweep(
    n: int, k: int, grid: Sequence[float], selections: Sequence[ObserverSelection] | None = None, m: int = 2
) -> list[SweepRow]:
    """Evaluate every selected ``S_j`` along a grid of precision factors."""
    if len(grid) == 0:
        raise ValueError("empty grid")
    if m != 2:
        raise ValueError("sweeps are defined for the m=2 scenario")
    sels = _selections(n, m, selections)
    rows = []
    for g in grid:
        config = symmetric_config(n, m, k, [float(g)])
        values = {j.label: analytic_bound(config, j) for j in sels}
        rows.append(SweepRow(float(g), values, min(values.values()), float(k - 1)))
    return rows


def violation_window(n: int, k: int, selections: Sequence[ObserverSelection] | None = None) -> Window:
    """Where all selected ``S_j`` beat ``k - 1`` simultaneously, and the best point."""
    sels = _selections(n, 2, selections)
    bound = k - 1

    def objective(g: float) -> float:
        return min_s(n, k, sels, g)

    g_star = grid_then_golden(objective)
    v_star = objective(g_star)
    if v_star <= bound:
        return Window(None, None, g_star, v_star)

    def excess(g: float) -> float:
        return objective(g) - bound

    grid = np.linspace(0.0, 1.0, PRE_GRID)
    below = [float(g) for g in grid if g < g_star and excess(float(g)) <= 0]
    above = [float(g) for g in grid if g > g_star and excess(float(g)) <= 0]
    lo = bisect(excess, below[-1], g_star, xtol=G_TOL * 1e-3) if below else 0.0
    hi = bisect(excess, g_star, above[0], xtol=G_TOL * 1e-3) if above else 1.0
    return Window(lo, hi, g_star, v_star)


def selection_peak(n: int, k: int, j: ObserverSelection) -> tuple[float, float]:
    """``(G, S_j)`` at the maximum of a single ``S_j`` over ``G``."""
    j.validate(n, 2)
    g = grid_then_golden(lambda x: s_of_g(n, k, j, x))
    return g, s_of_g(n, k, j, g)


def noisy_s(n: int, k: int, g: float, v: float, r: float) -> float:
    """``min(S_1..1, S_2..2)`` with identical noise on every source."""
    config = symmetric_config(n, 2, k, [g])
    noise = NoiseParams.shared(n, v, r)
    return min(
        analytic_bound_noise(config, ObserverSelection((1,) * n), noise),
        analytic_bound_noise(config, ObserverSelection((2,) * n), noise),
    )


def critical_visibility(n: int, k: int, r: float, tol: float = 1e-6) -> float | None:
    """Smallest shared visibility for which first- and second-generation
    selections still violate together; ``None`` if they never do."""
    bound = k - 1

    def best(v: float) -> float:
        g = grid_then_golden(lambda x: noisy_s(n, k, x, v, r))
        return noisy_s(n, k, g, v, r) - bound

    lo, hi = 0.0, 1.0
    if best(hi) <= 0:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if best(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def m3_values(k: int, g1: float, g2: float) -> tuple[float, float, float]:
    """``(S_1..1, S_2..2, S_3..3)`` in the symmetric ``(n, 3, k)`` scenario."""
    c = ck(k)
    h1 = (1 + optimal_f(g1)) / 2
    h2 = (1 + optimal_f(g2)) / 2
    return c * g1, c * h1 * g2, c * h1 * h2


def m3_no_sharing_check(n: int, k: int, outer_iterations: int = 100) -> tuple[float, float, float]:
    """Maximize ``min(S_1..1, S_2..2, S_3..3)`` over ``(G1, G2)``.

    Coordinate ascent from ``(0.7, 0.8)`` with a golden-section step per
    coordinate. The symmetric values do not depend on ``n``.
    """
    g1, g2 = 0.7, 0.8
    for _ in range(outer_iterations):
        g1 = golden_max(lambda x: min(m3_values(k, x, g2)), 0.0, 1.0)
        g2 = golden_max(lambda x: min(m3_values(k, g1, x)), 0.0, 1.0)
    return g1, g2, min(m3_values(k, g1, g2))
