"""Exact enumeration of one branch of the star network.

A branch is a source shared by Bob and a chain of Alices. Bob's measurement
is applied first, then the Alices in order; since Bob acts on a different
qubit the result is the same as the physical time order (tested).

The correlator of the selected Alice with Bob averages uniformly over the
inputs of the earlier Alices and sums over all of their outcomes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measure import (
    OUTCOMES,
    alice_observable,
    bob_project_and_reduce,
    projective_update,
    weak_update,
)
from .model import ConfigError

MAX_JOINT_BRANCHES = 3


@dataclass(frozen=True, eq=False)
class BranchSpec:
    """One branch, measured up to (and including) Alice number ``depth``.

    ``weak_f``/``weak_g`` list the pointer parameters of stages ``1..`` in
    order. Stages before ``depth`` always need them; stage ``depth`` needs
    them too unless ``depth == m`` (the last Alice measures sharply).
    """

    source: np.ndarray
    weak_f: tuple[float, ...]
    weak_g: tuple[float, ...]
    k: int
    depth: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "weak_f", tuple(self.weak_f))
        object.__setattr__(self, "weak_g", tuple(self.weak_g))
        if not 1 <= self.depth <= self.m:
            raise ConfigError(f"depth={self.depth} outside 1..{self.m}")
        needed = self.depth if self.depth < self.m else self.depth - 1
        if len(self.weak_f) < needed or len(self.weak_g) < needed:
            raise ConfigError(f"need weak parameters for {needed} stages")
        if np.shape(self.source) != (4, 4):
            raise ConfigError("source must be a 4x4 density matrix")

    @property
    def target_is_sharp(self) -> bool:
        return self.depth == self.m


def _stage_update(spec: BranchSpec, t: int, rho, obs, a):
    """Apply stage ``t`` (0-based) of the chain."""
    if t == spec.m - 1:
        return projective_update(rho, obs, a)
    return weak_update(rho, obs, a, spec.weak_f[t], spec.weak_g[t])


def branch_distribution(
    spec: BranchSpec, settings: Sequence[int], y: int, outcomes: Sequence[int], b: int
) -> float:
    """Joint probability of ``outcomes`` (Alices 1..depth) and Bob's ``b``."""
    if len(settings) != spec.depth or len(outcomes) != spec.depth:
        raise ValueError(f"need {spec.depth} settings and outcomes")
    for t, x in enumerate(settings):
        top = spec.k if t == spec.depth - 1 else spec.k - 1
        if not 0 <= x <= top:
            raise ValueError(f"setting x{t + 1}={x} outside 0..{top}")
    rho = bob_project_and_reduce(spec.source, y, b, spec.k)
    for t, (x, a) in enumerate(zip(settings, outcomes)):
        rho = _stage_update(spec, t, rho, alice_observable(x, spec.k), a)
    return float(np.trace(rho).real)


def _ensemble(spec: BranchSpec, y: int):
    """All unnormalized states reaching the target Alice, with Bob's sign.

    Enumerates Bob's outcome and every (input, outcome) of the earlier
    Alices. Returns ``(states, bob_signs)`` with ``states`` of shape
    ``(N, 2, 2)``; the uniform input weight is not yet applied.
    """
    k = spec.k
    states = np.stack([bob_project_and_reduce(spec.source, y, b, k) for b in OUTCOMES])
    signs = np.array(OUTCOMES, dtype=float)
    observables = np.stack([alice_observable(x, k) for x in range(k)])
    outcomes = np.array(OUTCOMES, dtype=float)
    for t in range(spec.depth - 1):
        # axes: (previous branch, input x, outcome a, 2, 2)
        states = weak_update(
            states[:, None, None],
            observables[None, :, None],
            outcomes[None, None, :],
            spec.weak_f[t],
            spec.weak_g[t],
        ).reshape(-1, 2, 2)
        signs = np.repeat(signs, 2 * k)
    return states, signs


def _correlate(spec: BranchSpec, ensemble, x_target: int) -> float:
    states, signs = ensemble
    obs = alice_observable(x_target, spec.k)
    total = 0.0
    for a in OUTCOMES:
        final = _stage_update(spec, spec.depth - 1, states, obs, a)
        probs = np.trace(final, axis1=-2, axis2=-1).real
        total += a * float(np.dot(signs, probs))
    return total / spec.k ** (spec.depth - 1)


def branch_correlator(spec: BranchSpec, x_target: int, y: int) -> float:
    """Correlator of the target Alice's outcome with Bob's branch outcome."""
    if not 0 <= x_target <= spec.k:
        raise ValueError(f"x_target={x_target} outside 0..{spec.k}")
    return _correlate(spec, _ensemble(spec, y), x_target)


def chain_correlators(spec: BranchSpec) -> dict[tuple[int, int], float]:
    """Correlators needed by the chained expression: ``(x, y)`` with
    ``y = l-1`` and ``x in {l-1, l}`` for ``l = 1..k``."""
    table = {}
    for y in range(spec.k):
        ens = _ensemble(spec, y)
        for x in (y, y + 1):
            table[(x, y)] = _correlate(spec, ens, x)
    return table


def joint_distribution(
    specs: Sequence[BranchSpec],
    settings: Sequence[Sequence[int]],
    y: int,
    outcomes: Sequence[Sequence[int]],
    bs: Sequence[int],
) -> float:
    """Full-network probability with independent sources (at most 3 branches)."""
    if len(specs) > MAX_JOINT_BRANCHES:
        raise ValueError(f"joint_distribution supports at most {MAX_JOINT_BRANCHES} branches")
    if not (len(specs) == len(settings) == len(outcomes) == len(bs)):
        raise ValueError("one settings/outcomes/b entry per branch is required")
    return math.prod(
        branch_distribution(s, xs, y, a_s, b) for s, xs, a_s, b in zip(specs, settings, outcomes, bs)
    )


def joint_correlator(specs: Sequence[BranchSpec], x_targets: Sequence[int], y: int) -> float:
    """``<A_1 ... A_n B>`` from the full joint distribution.

    Bob's network outcome is the product of his branch outcomes. Enumerates
    the product outcome space directly instead of factorizing.
    """
    if len(specs) > MAX_JOINT_BRANCHES:
        raise ValueError(f"joint_correlator supports at most {MAX_JOINT_BRANCHES} branches")
    cache: dict = {}

    def prob(i, xs, a_s, b):
        key = (i, xs, a_s, b)
        if key not in cache:
            cache[key] = branch_distribution(specs[i], xs, y, a_s, b)
        return cache[key]

    per_branch = []
    for i, (spec, xt) in enumerate(zip(specs, x_targets)):
        choices = [
            (xs + (xt,), a_s, b)
            for xs in itertools.product(range(spec.k), repeat=spec.depth - 1)
            for a_s in itertools.product(OUTCOMES, repeat=spec.depth)
            for b in OUTCOMES
        ]
        per_branch.append(choices)

    total = 0.0
    for combo in itertools.product(*per_branch):
        sign = 1
        p = 1.0
        for i, (xs, a_s, b) in enumerate(combo):
            sign *= a_s[-1] * b
            p *= prob(i, xs, a_s, b)
        total += sign * p
    weight = math.prod(s.k ** (s.depth - 1) for s in specs)
    return total / weight
