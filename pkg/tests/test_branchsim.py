import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starshare.branchsim import (
    BranchSpec,
    branch_correlator,
    branch_distribution,
    chain_correlators,
    joint_correlator,
    joint_distribution,
)
from starshare.measure import OUTCOMES, alice_observable, bob_factor, povm_element
from starshare.model import ConfigError
from starshare.qcore import I2, I4
from starshare.state import noisy_source, singlet
from tests.strategies import pointers, unit


def spec_for(source, k, depth, m, fs=(), gs=()):
    return BranchSpec(source=source, weak_f=tuple(fs), weak_g=tuple(gs), k=k, depth=depth, m=m)


def enumerate_correlator(spec, x_target, y):
    """Reference path: literal sum over branch_distribution values."""
    total = 0.0
    for xs in itertools.product(range(spec.k), repeat=spec.depth - 1):
        for a_s in itertools.product(OUTCOMES, repeat=spec.depth):
            for b in OUTCOMES:
                total += a_s[-1] * b * branch_distribution(spec, xs + (x_target,), y, a_s, b)
    return total / spec.k ** (spec.depth - 1)


def bob_last_distribution(spec, xs, y, outcomes, b):
    """Alices act on the full 4x4 state first, Bob measures last."""
    rho = spec.source.astype(complex)
    for t, (x, a) in enumerate(zip(xs, outcomes)):
        obs = alice_observable(x, spec.k)
        mp, mm = np.kron((I2 + obs) / 2, I2), np.kron((I2 - obs) / 2, I2)
        if t == spec.m - 1:
            ma = mp if a == 1 else mm
            rho = ma @ rho @ ma
        else:
            f, g = spec.weak_f[t], spec.weak_g[t]
            rho = f / 2 * rho + (1 + a * g - f) / 2 * (mp @ rho @ mp) + (1 - a * g - f) / 2 * (mm @ rho @ mm)
    mb = np.kron(I2, povm_element(bob_factor(y, spec.k), b))
    return float(np.trace(mb @ rho @ mb).real)


def closed_form_correlator(spec, x, y, v=1.0, r=0.0):
    """Per-branch correlator: T-factor product times the source term."""
    k = spec.k
    prod = 1.0
    for o in range(1, spec.depth + 1):
        if o < spec.depth:
            prod *= (1 + spec.weak_f[o - 1]) / 2
        elif o < spec.m:
            prod *= spec.weak_g[o - 1]
    source = v * math.cos(math.pi * (1 - 2 * x + 2 * y) / (2 * k)) + (1 - v) * r * math.cos(
        x * math.pi / k
    ) * math.cos((2 * y + 1) * math.pi / (2 * k))
    return -prod * source


@st.composite
def branch_specs(draw, max_depth=3, max_k=4, noisy=True):
    m = draw(st.integers(1, max_depth))
    depth = draw(st.integers(1, m))
    k = draw(st.integers(2, max_k))
    fg = [draw(pointers()) for _ in range(m - 1)]
    v, r = (draw(unit), draw(unit)) if noisy else (1.0, 0.0)
    spec = spec_for(noisy_source(v, r), k, depth, m, [p[0] for p in fg], [p[1] for p in fg])
    return spec, v, r


def test_single_stage_distribution_example():
    spec = spec_for(singlet(), 2, 1, 1)
    assert branch_distribution(spec, (0,), 0, (1,), 1) == pytest.approx((2 - math.sqrt(2)) / 8, abs=1e-15)


def test_white_source_has_uniform_bob():
    spec = spec_for(I4 / 4, 3, 2, 2, [0.6], [0.8])
    for b in OUTCOMES:
        pb = sum(branch_distribution(spec, (1, 2), 2, a_s, b) for a_s in itertools.product(OUTCOMES, repeat=2))
        assert pb == pytest.approx(0.5, abs=1e-15)


def test_spec_validation():
    with pytest.raises(ConfigError):
        spec_for(singlet(), 2, 2, 2)
    with pytest.raises(ConfigError):
        spec_for(singlet(), 2, 3, 2, [0.6], [0.8])
    spec = spec_for(singlet(), 2, 1, 1)
    with pytest.raises(ValueError):
        branch_distribution(spec, (3,), 0, (1,), 1)


@pytest.mark.parametrize("k", (2, 3, 4))
def test_singlet_correlators(k):
    for x in range(k + 1):
        for y in range(k):
            base = -math.cos(math.pi * (1 - 2 * x + 2 * y) / (2 * k))
            assert branch_correlator(spec_for(singlet(), k, 1, 1), x, y) == pytest.approx(base, abs=1e-12)
            weak_target = spec_for(singlet(), k, 1, 2, [0.6], [0.8])
            assert branch_correlator(weak_target, x, y) == pytest.approx(0.8 * base, abs=1e-12)
            sharp_after_weak = spec_for(singlet(), k, 2, 2, [0.6], [0.8])
            assert branch_correlator(sharp_after_weak, x, y) == pytest.approx(0.8 * base, abs=1e-12)


def test_k2_example_value():
    assert branch_correlator(spec_for(singlet(), 2, 1, 1), 0, 0) == pytest.approx(-1 / math.sqrt(2), abs=1e-15)


@given(branch_specs())
def test_vectorized_correlator_matches_enumeration(drawn):
    spec, _, _ = drawn
    for y in range(spec.k):
        for x in (y, y + 1):
            assert abs(branch_correlator(spec, x, y) - enumerate_correlator(spec, x, y)) < 1e-12


@given(branch_specs())
def test_correlator_matches_closed_form(drawn):
    spec, v, r = drawn
    table = chain_correlators(spec)
    for (x, y), value in table.items():
        assert abs(value - closed_form_correlator(spec, x, y, v, r)) < 1e-10
        assert abs(value) <= 1 + 1e-12


@given(branch_specs(), st.data())
def test_bob_order_does_not_matter(drawn, data):
    spec, _, _ = drawn
    xs = tuple(data.draw(st.integers(0, spec.k - 1)) for _ in range(spec.depth - 1))
    xs += (data.draw(st.integers(0, spec.k)),)
    y = data.draw(st.integers(0, spec.k - 1))
    for a_s in itertools.product(OUTCOMES, repeat=spec.depth):
        for b in OUTCOMES:
            first = branch_distribution(spec, xs, y, a_s, b)
            last = bob_last_distribution(spec, xs, y, a_s, b)
            assert abs(first - last) < 1e-12
            assert first >= -1e-14


@given(branch_specs(), st.data())
def test_normalization(drawn, data):
    spec, _, _ = drawn
    xs = tuple(data.draw(st.integers(0, spec.k - 1)) for _ in range(spec.depth - 1))
    xs += (data.draw(st.integers(0, spec.k)),)
    y = data.draw(st.integers(0, spec.k - 1))
    total = sum(
        branch_distribution(spec, xs, y, a_s, b)
        for a_s in itertools.product(OUTCOMES, repeat=spec.depth)
        for b in OUTCOMES
    )
    assert abs(total - 1) < 1e-10


def test_joint_distribution_is_product_and_marginalizes():
    s1 = spec_for(singlet(), 2, 1, 1)
    s2 = spec_for(noisy_source(0.7, 0.4), 2, 2, 2, [0.6], [0.8])
    p = joint_distribution([s1, s2], [(0,), (1, 2)], 1, [(1,), (-1, 1)], [1, -1])
    assert p == pytest.approx(
        branch_distribution(s1, (0,), 1, (1,), 1) * branch_distribution(s2, (1, 2), 1, (-1, 1), -1), abs=1e-15
    )
    for a in OUTCOMES:
        for b in OUTCOMES:
            marg = sum(
                joint_distribution([s1, s2], [(0,), (1, 2)], 1, [(a,), a2], [b, b2])
                for a2 in itertools.product(OUTCOMES, repeat=2)
                for b2 in OUTCOMES
            )
            assert marg == pytest.approx(branch_distribution(s1, (0,), 1, (a,), b), abs=1e-14)


def test_joint_guard():
    s = spec_for(singlet(), 2, 1, 1)
    with pytest.raises(ValueError):
        joint_distribution([s] * 4, [(0,)] * 4, 0, [(1,)] * 4, [1] * 4)


@pytest.mark.parametrize("n", (2, 3))
def test_joint_correlator_factorizes(n):
    rng = np.random.default_rng(n)
    specs = []
    for i in range(n):
        g = float(rng.uniform())
        specs.append(spec_for(noisy_source(*rng.uniform(size=2)), 2, 1 + i % 2, 2, [math.sqrt(1 - g * g)], [g]))
    for xs in itertools.product((0, 1, 2), repeat=n):
        for y in (0, 1):
            factorized = math.prod(branch_correlator(s, x, y) for s, x in zip(specs, xs))
            assert abs(joint_correlator(specs, xs, y) - factorized) < 1e-12
