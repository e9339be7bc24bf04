"""Self-verification: simulation-vs-closed-form agreement, pinned reference
numbers, and randomized physical-consistency properties.

Each ``check_*`` function returns a :class:`CheckResult`; ``run_all`` runs
them in order. Randomness comes from fixed seeds.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import (
    critical_visibility,
    m3_no_sharing_check,
    selection_peak,
    violation_window,
)
from .branchsim import BranchSpec, branch_correlator, branch_distribution, chain_correlators, joint_correlator
from .inequality import (
    analytic_bound,
    analytic_bound_noise,
    branch_specs,
    chained_value,
    ck,
    simulate_s,
)
from .measure import OUTCOMES, alice_observable, bob_factor, bob_project_and_reduce, projective_update, weak_update
from .model import NoiseParams, ObserverSelection, all_selections, config_from_tables, symmetric_config
from .qcore import I2, is_psd
from .state import noisy_source

SEED = 20221016
PROPERTY_INSTANCES = 100


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_pointer(rng: np.random.Generator) -> tuple[float, float]:
    """A physical ``(F, G)``; roughly a third land on the optimal boundary."""
    g = float(rng.uniform())
    f_max = math.sqrt(1 - g * g)
    f = f_max if rng.uniform() < 1 / 3 else float(rng.uniform(0, f_max))
    return f, g


def random_config(rng, n: int, m: int, k: int):
    pairs = [[random_pointer(rng) for _ in range(m - 1)] for _ in range(n)]
    f = [[p[0] for p in row] for row in pairs]
    g = [[p[1] for p in row] for row in pairs]
    return config_from_tables(n, m, k, g, f)


def random_state(rng, dim: int = 2) -> np.ndarray:
    """Random density matrix (Ginibre), possibly rank deficient."""
    rank = int(rng.integers(1, dim + 1))
    z = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_unit_observable(rng) -> np.ndarray:
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    return np.array([[u[2], u[0] - 1j * u[1]], [u[0] + 1j * u[1], -u[2]]])


def random_noise(rng, n: int) -> NoiseParams:
    return NoiseParams(tuple(rng.uniform(size=n)), tuple(rng.uniform(size=n)))


def _result(name: str, errors: list[float], tol: float, extra: str = "") -> CheckResult:
    worst = max(errors) if errors else 0.0
    detail = f"max deviation {worst:.3g} (tol {tol:g}) over {len(errors)} cases{extra}"
    return CheckResult(name, worst <= tol, detail)


# --- criterion 1 -----------------------------------------------------------------

def check_oracle_equivalence(draws: int = 20, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED)
    errors = []
    for n, m, k in itertools.product((1, 2, 3), (1, 2, 3), (2, 3, 4)):
        for _ in range(draws):
            config = random_config(rng, n, m, k)
            for j in all_selections(n, m):
                errors.append(abs(simulate_s(config, j).s_value - analytic_bound(config, j)))
    return _result("oracle equivalence (simulation vs closed form)", errors, tol)


# --- criterion 2 -----------------------------------------------------------------

def check_noise_oracle(draws: int = 20, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    errors = []
    failing = set()
    for n, k in itertools.product((1, 2, 3), (2, 3)):
        for _ in range(draws):
            config = random_config(rng, n, 2, k)
            noise = random_noise(rng, n)
            for level in (1, 2):
                j = ObserverSelection((level,) * n)
                err = abs(simulate_s(config, j, noise).s_value - analytic_bound_noise(config, j, noise))
                errors.append(err)
                if err > tol:
                    failing.add((n, k))
    extra = f"; failing (n, k): {sorted(failing)}" if failing else ""
    return _result("noise oracle, heterogeneous sources", errors, tol, extra)


def check_noise_special_cases(draws: int = 20, tol: float = 1e-10) -> CheckResult:
    """White noise (any per-source v) and fully symmetric mixed noise."""
    rng = np.random.default_rng(SEED + 2)
    errors = []
    for n, k in itertools.product((1, 2, 3), (2, 3)):
        for _ in range(draws):
            # white noise, heterogeneous v and pointers
            config = random_config(rng, n, 2, k)
            v = tuple(rng.uniform(size=n))
            noise = NoiseParams(v, (0.0,) * n)
            vgeo = math.prod(v) ** (1 / n)
            g = math.prod(config.branch_g(i)[0] for i in range(n)) ** (1 / n)
            f1 = math.prod(1 + config.branch_f(i)[0] for i in range(n)) ** (1 / n)
            ones, twos = ObserverSelection((1,) * n), ObserverSelection((2,) * n)
            errors.append(abs(simulate_s(config, ones, noise).s_value - ck(k) * g * vgeo))
            errors.append(abs(simulate_s(config, twos, noise).s_value - ck(k) / 2 * f1 * vgeo))
            # symmetric mixed noise on the optimal trade-off
            gs, vs, rs = float(rng.uniform()), float(rng.uniform()), float(rng.uniform())
            config = symmetric_config(n, 2, k, [gs])
            noise = NoiseParams.shared(n, vs, rs)
            level = rs * (1 - vs) + 2 * vs
            errors.append(abs(simulate_s(config, ones, noise).s_value - ck(k) / 2 * gs * level))
            errors.append(
                abs(simulate_s(config, twos, noise).s_value - ck(k) / 4 * (1 + math.sqrt(1 - gs * gs)) * level)
            )
    return _result("noise special cases (white; symmetric mixed)", errors, tol)


# --- criteria 3-5 ----------------------------------------------------------------

def _pinned(name: str, got: float, want: float, tol: float) -> CheckResult:
    err = abs(got - want)
    return CheckResult(name, err <= tol, f"got {got:.6f}, expected {want:.6f} (tol {tol:g})")


def check_pinned_numbers(tol: float = 1e-4) -> list[CheckResult]:
    sels324 = [ObserverSelection.parse(s) for s in ("111", "112", "121", "211")]
    w2 = violation_window(2, 2)
    w3 = violation_window(2, 3)
    w4 = violation_window(2, 4)
    g224, s224 = selection_peak(2, 4, ObserverSelection((1, 2)))
    g324, s324 = selection_peak(3, 4, ObserverSelection((1, 2, 2)))
    wsub = violation_window(3, 4, sels324)
    g1, g2, v3 = m3_no_sharing_check(2, 2)
    out = [
        _pinned("k=2 maximal simultaneous violation", w2.v_star, 1.13137, tol),
        _pinned("k=2 optimal G", w2.g_star, 0.8, tol),
        _pinned("k=3 maximal simultaneous violation", w3.v_star, 2.07846, tol),
        _pinned("k=3 optimal G", w3.g_star, 0.8, tol),
        _pinned("k=4 maximin value", w4.v_star, 2.9564, tol),
        CheckResult("k=4 maximin below classical bound 3", w4.empty and w4.v_star < 3, f"{w4.v_star:.6f} < 3"),
        _pinned("(2,2,4) S_12 peak", s224, 2.9783, tol),
        _pinned("(2,2,4) S_12 peak location sqrt(3)/2", g224, math.sqrt(3) / 2, tol),
        _pinned("(3,2,4) S_122 peak", s324, 2.9671, tol),
        _pinned("(3,2,4) S_122 peak location sqrt(5)/3", g324, math.sqrt(5) / 3, tol),
        _pinned("(3,2,4) subset window lower end", wsub.lo if wsub.lo is not None else math.nan, 0.8280, tol),
        _pinned("(3,2,4) subset window upper end", wsub.hi if wsub.hi is not None else math.nan, 0.9970, tol),
        _pinned("(3,2,4) subset maximal violation", wsub.v_star, 3.1040, tol),
        _pinned("(3,2,4) subset optimal G 2sqrt(2)/3", wsub.g_star, 2 * math.sqrt(2) / 3, tol),
        _pinned("m=3 maximin value", v3, 0.9753, tol),
        _pinned("m=3 optimal G1 = 20/29", g1, 20 / 29, tol),
        _pinned("m=3 optimal G2 = 0.8", g2, 0.8, tol),
    ]
    return out


def check_window_endpoints(tol: float = 1e-6) -> list[CheckResult]:
    w2 = violation_window(2, 2)
    w3 = violation_window(2, 3)
    return [
        _pinned("k=2 window lower end 1/sqrt(2)", w2.lo, 1 / math.sqrt(2), tol),
        _pinned("k=2 window upper end sqrt(2(sqrt2-1))", w2.hi, math.sqrt(2 * (math.sqrt(2) - 1)), tol),
        _pinned("k=3 window lower end 4/(3 sqrt3)", w3.lo, 4 / (3 * math.sqrt(3)), tol),
        _pinned(
            "k=3 window upper end (4/3)sqrt((3sqrt3-4)/3)",
            w3.hi,
            4 / 3 * math.sqrt((3 * math.sqrt(3) - 4) / 3),
            tol,
        ),
    ]


def check_critical_visibilities(tol: float = 1e-3, exact_tol: float = 1e-6) -> list[CheckResult]:
    out = []
    for k, r, want in ((2, 0.0, 0.8839), (3, 0.0, 0.9623), (2, 1 / 3, 0.8607), (3, 1 / 3, 0.9548)):
        v = critical_visibility(2, k, r)
        out.append(_pinned(f"critical visibility k={k}, r={r:.4g}", v, want, tol))
        if r == 0.0:
            out.append(_pinned(f"critical visibility k={k}, r=0 vs (k-1)/(0.8 C_k)", v, (k - 1) / (0.8 * ck(k)), exact_tol))
    return out


# --- criterion 6 -----------------------------------------------------------------

def check_channel_completeness(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 6)
    errors = []
    for _ in range(count):
        rho = random_state(rng) * rng.uniform(0.1, 1.0)
        obs = random_unit_observable(rng)
        f, g = random_pointer(rng)
        total = sum(np.trace(weak_update(rho, obs, a, f, g)).real for a in OUTCOMES)
        errors.append(abs(total - np.trace(rho).real))
        total = sum(np.trace(projective_update(rho, obs, a)).real for a in OUTCOMES)
        errors.append(abs(total - np.trace(rho).real))
    return _result("channel completeness", errors, tol)


def check_psd_preservation(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 7)
    bad = 0
    for _ in range(count):
        rho = random_state(rng)
        obs = random_unit_observable(rng)
        f, g = random_pointer(rng)
        k = int(rng.integers(2, 7))
        outputs = [weak_update(rho, obs, a, f, g) for a in OUTCOMES]
        outputs += [projective_update(rho, obs, a) for a in OUTCOMES]
        source = noisy_source(float(rng.uniform()), float(rng.uniform()))
        outputs += [bob_project_and_reduce(source, int(rng.integers(0, k)), b, k) for b in OUTCOMES]
        bad += sum(not is_psd(x, tol) for x in outputs)
    return CheckResult("PSD preservation", bad == 0, f"{bad} non-PSD outputs over {count} instances")


def _random_spec(rng, max_depth: int = 3, max_k: int = 4) -> BranchSpec:
    m = int(rng.integers(1, max_depth + 1))
    depth = int(rng.integers(1, m + 1))
    k = int(rng.integers(2, max_k + 1))
    pairs = [random_pointer(rng) for _ in range(m - 1)]
    return BranchSpec(
        source=noisy_source(float(rng.uniform()), float(rng.uniform())),
        weak_f=tuple(p[0] for p in pairs),
        weak_g=tuple(p[1] for p in pairs),
        k=k,
        depth=depth,
        m=m,
    )


def _random_settings(rng, spec: BranchSpec) -> tuple[int, ...]:
    xs = [int(rng.integers(0, spec.k)) for _ in range(spec.depth - 1)]
    return tuple(xs) + (int(rng.integers(0, spec.k + 1)),)


def check_normalization(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 8)
    errors = []
    for _ in range(count):
        spec = _random_spec(rng)
        xs = _random_settings(rng, spec)
        y = int(rng.integers(0, spec.k))
        total = sum(
            branch_distribution(spec, xs, y, a_s, b)
            for a_s in itertools.product(OUTCOMES, repeat=spec.depth)
            for b in OUTCOMES
        )
        errors.append(abs(total - 1.0))
    return _result("distribution normalization", errors, tol)


def marginal(spec: BranchSpec, xs, y: int, prefix) -> float:
    """Probability of the first ``len(prefix)`` Alice outcomes."""
    rest = spec.depth - len(prefix)
    return sum(
        branch_distribution(spec, xs, y, tuple(prefix) + tail, b)
        for tail in itertools.product(OUTCOMES, repeat=rest)
        for b in OUTCOMES
    )


def check_no_signaling(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 9)
    errors = []
    for _ in range(count):
        spec = _random_spec(rng)
        while spec.depth < 2:
            spec = _random_spec(rng)
        t = int(rng.integers(1, spec.depth))
        xs1, xs2 = _random_settings(rng, spec), _random_settings(rng, spec)
        xs2 = xs1[:t] + xs2[t:]
        y1, y2 = int(rng.integers(0, spec.k)), int(rng.integers(0, spec.k))
        for prefix in itertools.product(OUTCOMES, repeat=t):
            errors.append(abs(marginal(spec, xs1, y1, prefix) - marginal(spec, xs2, y2, prefix)))
    return _result("no-signaling to earlier Alices", errors, tol)


def check_chain_closure(tol: float = 1e-10) -> CheckResult:
    errors = []
    for k in range(2, 7):
        errors.append(float(np.max(np.abs(alice_observable(k, k) + alice_observable(0, k)))))
        for x in range(k + 1):
            a = alice_observable(x, k)
            errors.append(float(np.max(np.abs(a @ a - I2))))
        for y in range(k):
            b = bob_factor(y, k)
            errors.append(float(np.max(np.abs(b @ b - I2))))
    return _result("chain closure and unit observables", errors, tol)


def check_correlator_bound(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 10)
    excess = []
    for _ in range(count):
        spec = _random_spec(rng)
        x = int(rng.integers(0, spec.k + 1))
        y = int(rng.integers(0, spec.k))
        excess.append(max(0.0, abs(branch_correlator(spec, x, y)) - 1.0))
    return _result("correlator bound |<AB>| <= 1", excess, tol)


def check_permutation_symmetry(count: int = PROPERTY_INSTANCES, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(SEED + 11)
    errors = []
    for _ in range(count):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, 4))
        k = int(rng.integers(2, 5))
        config = random_config(rng, n, m, k)
        noise = random_noise(rng, n)
        j = ObserverSelection(tuple(int(x) for x in rng.integers(1, m + 1, size=n)))
        tables = [chain_correlators(s) for s in branch_specs(config, j, noise)]
        perm = rng.permutation(n)
        base = chained_value(tables, n, k).s_value
        permuted = chained_value([tables[p] for p in perm], n, k).s_value
        errors.append(abs(base - permuted))
    return _result("branch-permutation symmetry", errors, tol)


# --- criterion 7 -----------------------------------------------------------------

def joint_s_value(specs, n: int, k: int) -> float:
    """``S`` from the joint distribution, without per-branch factorization."""
    total = 0.0
    for l in range(1, k + 1):
        inner = sum(joint_correlator(specs, xs, l - 1) for xs in itertools.product((l - 1, l), repeat=n))
        total += abs(inner / 2**n) ** (1 / n)
    return total


def check_joint_vs_factorized(draws: int = 2, tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(SEED + 12)
    errors = []
    k = 2
    for n, m in itertools.product((2, 3), (1, 2)):
        for _ in range(draws):
            config = random_config(rng, n, m, k)
            noise = random_noise(rng, n)
            for j in all_selections(n, m):
                specs = branch_specs(config, j, noise)
                errors.append(abs(joint_s_value(specs, n, k) - simulate_s(config, j, noise).s_value))
    return _result("joint vs factorized S", errors, tol)


CRITERIA: dict[int, tuple[str, Callable[[], list[CheckResult]]]] = {
    1: ("oracle equivalence", lambda: [check_oracle_equivalence()]),
    2: ("noise oracle", lambda: [check_noise_oracle(), check_noise_special_cases()]),
    3: ("pinned reference numbers", check_pinned_numbers),
    4: ("violation-window endpoints", check_window_endpoints),
    5: ("critical visibilities", check_critical_visibilities),
    6: (
        "property suite",
        lambda: [
            check_channel_completeness(),
            check_psd_preservation(),
            check_normalization(),
            check_no_signaling(),
            check_chain_closure(),
            check_correlator_bound(),
            check_permutation_symmetry(),
        ],
    ),
    7: ("joint vs factorized", lambda: [check_joint_vs_factorized()]),
}


def run_criterion(number: int) -> list[CheckResult]:
    return CRITERIA[number][1]()


def run_all() -> dict[int, list[CheckResult]]:
    return {number: run_criterion(number) for number in CRITERIA}
