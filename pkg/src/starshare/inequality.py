"""The chained n-locality expression, by simulation and in closed form.

``S_j = sum_l |I_l|**(1/n)`` with
``I_l = 2**-n * prod_i (<A^{l-1} B_i^{l-1}> + <A^l B_i^{l-1}>)``; the
product form comes from Bob's measurement factorizing over branches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .branchsim import BranchSpec, chain_correlators
from .model import ConfigError, NetworkConfig, NoiseParams, ObserverSelection
from .state import noisy_source


class UnsupportedCase(ValueError):
    """No closed form is available for the requested scenario."""


@dataclass(frozen=True)
class InequalityResult:
    i_terms: tuple[float, ...]
    s_value: float
    classical_bound: float

    @property
    def violated(self) -> bool:
        return self.s_value > self.classical_bound


def ck(k: int) -> float:
    """Quantum maximum ``k cos(pi/2k)`` of the chained expression."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return k * math.cos(math.pi / (2 * k))


def _root(x: float, n: int) -> float:
    # |I|^(1/n) with the continuous value 0 at I = 0
    return abs(x) ** (1.0 / n) if x != 0.0 else 0.0


def chained_value(tables: Sequence[Mapping[tuple[int, int], float]], n: int, k: int) -> InequalityResult:
    """Evaluate ``S`` from per-branch correlator tables keyed by ``(x, y)``.

    Each table must contain ``(l-1, l-1)`` and ``(l, l-1)`` for
    ``l = 1..k``; ``x = k`` stands for the closing observable ``-A^0``.
    """
    if len(tables) != n:
        raise ValueError(f"expected {n} correlator tables, got {len(tables)}")
    terms = []
    for l in range(1, k + 1):
        prod = 1.0
        for i, table in enumerate(tables):
            try:
                prod *= table[(l - 1, l - 1)] + table[(l, l - 1)]
            except KeyError as exc:
                raise KeyError(f"branch {i + 1} table is missing entry {exc.args[0]}") from None
        terms.append(prod / 2**n)
    s = sum(_root(t, n) for t in terms)
    return InequalityResult(tuple(terms), s, float(k - 1))


def _t_factors(config: NetworkConfig, i: int, depth: int) -> float:
    f, g = config.branch_f(i), config.branch_g(i)
    prod = 1.0
    for o in range(1, depth + 1):
        if o < depth:
            prod *= (1 + f[o - 1]) / 2
        elif o < config.m:
            prod *= g[o - 1]
    return prod


def analytic_bound(config: NetworkConfig, j: ObserverSelection) -> float:
    """Closed-form ``S_j`` for singlet sources.

    Earlier Alices in a branch each contribute ``(1+F)/2``; the selected
    Alice contributes ``G`` if she measures weakly and 1 if she is last.
    """
    j.validate(config.n, config.m)
    prod = math.prod(_t_factors(config, i, d) for i, d in enumerate(j))
    return ck(config.k) * prod ** (1.0 / config.n)


def analytic_bound_noise(config: NetworkConfig, j: ObserverSelection, noise: NoiseParams) -> float:
    """Closed form under white/colored noise, for ``m = 2`` and ``j`` all 1 or all 2.

    ``S_1..1 = C_k/2 (prod_i G_i [r_i(1-v_i) + 2 v_i])**(1/n)`` and
    ``S_2..2 = C_k/4 (prod_i (1+F_i) [r_i(1-v_i) + 2 v_i])**(1/n)``.
    Every other case raises ``UnsupportedCase``; use :func:`simulate_s`.
    """
    n = config.n
    j.validate(n, config.m)
    noise.validate(n)
    if config.m != 2:
        raise UnsupportedCase(f"noise closed form derived only for m=2, got m={config.m}")
    if len(set(j.j)) != 1:
        raise UnsupportedCase(f"noise closed form needs a uniform selection, got {j.label}")
    level = [r * (1 - v) + 2 * v for v, r in zip(noise.v, noise.r)]
    if j.j[0] == 1:
        factors = [config.branch_g(i)[0] * level[i] for i in range(n)]
        return ck(config.k) / 2 * math.prod(factors) ** (1.0 / n)
    factors = [(1 + config.branch_f(i)[0]) * level[i] for i in range(n)]
    return ck(config.k) / 4 * math.prod(factors) ** (1.0 / n)


def branch_specs(
    config: NetworkConfig, j: ObserverSelection, noise: NoiseParams | None = None
) -> list[BranchSpec]:
    j.validate(config.n, config.m)
    noise = (noise or NoiseParams.noiseless(config.n)).validate(config.n)
    return [
        BranchSpec(
            source=noisy_source(noise.v[i], noise.r[i]),
            weak_f=config.branch_f(i),
            weak_g=config.branch_g(i),
            k=config.k,
            depth=depth,
            m=config.m,
        )
        for i, depth in enumerate(j)
    ]


def simulate_s(
    config: NetworkConfig, j: ObserverSelection, noise: NoiseParams | None = None
) -> InequalityResult:
    """``S_j`` from brute-force enumeration of every branch."""
    specs = branch_specs(config, j, noise)
    return chained_value([chain_correlators(s) for s in specs], config.n, config.k)


def classical_bound(k: int) -> float:
    if k < 2:
        raise ConfigError("k must be >= 2")
    return float(k - 1)
