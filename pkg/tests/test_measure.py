import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starshare.measure import (
    OUTCOMES,
    alice_observable,
    bob_factor,
    bob_project_and_reduce,
    povm_element,
    projective_update,
    weak_update,
)
from starshare.model import ConfigError
from starshare.qcore import I2, SIGMA_X, SIGMA_Z, is_psd, tensor
from starshare.state import singlet
from tests.strategies import density_matrices, pointers, unit_observables

R2 = math.sqrt(2)


def test_alice_observable_examples():
    assert np.allclose(alice_observable(0, 4), SIGMA_Z)
    assert np.allclose(alice_observable(1, 2), SIGMA_X, atol=1e-15)
    for k in range(2, 7):
        assert np.array_equal(alice_observable(k, k), -alice_observable(0, k))
    with pytest.raises(ValueError):
        alice_observable(3, 2)


def test_alice_closing_observable_matches_formula():
    for k in range(2, 7):
        angle = k * math.pi / k
        assert np.allclose(alice_observable(k, k), math.sin(angle) * SIGMA_X + math.cos(angle) * SIGMA_Z, atol=1e-15)


def test_bob_factor_examples():
    assert np.allclose(bob_factor(0, 2), (SIGMA_X + SIGMA_Z) / R2, atol=1e-15)
    assert np.allclose(bob_factor(1, 2), (SIGMA_X - SIGMA_Z) / R2, atol=1e-15)
    assert np.allclose(bob_factor(1, 3), SIGMA_X, atol=1e-15)
    with pytest.raises(ValueError):
        bob_factor(2, 2)


@pytest.mark.parametrize("k", range(2, 7))
def test_observables_square_to_identity(k):
    for x in range(k + 1):
        a = alice_observable(x, k)
        assert np.allclose(a @ a, I2, atol=1e-10)
    for y in range(k):
        b = bob_factor(y, k)
        assert np.allclose(b @ b, I2, atol=1e-10)


def test_povm_element():
    assert np.array_equal(povm_element(SIGMA_Z, 1), np.diag([1, 0]))
    obs = bob_factor(0, 3)
    assert np.allclose(povm_element(obs, 1) + povm_element(obs, -1), I2)
    for a in OUTCOMES:
        p = povm_element(obs, a)
        assert np.allclose(p @ p, p, atol=1e-15)
    with pytest.raises(ValueError):
        povm_element(obs, 0)


@given(density_matrices(), unit_observables())
def test_weak_update_limits(rho, obs):
    for a in OUTCOMES:
        assert np.allclose(weak_update(rho, obs, a, 1.0, 0.0), rho / 2, atol=1e-15)
        m = povm_element(obs, a)
        assert np.allclose(weak_update(rho, obs, a, 0.0, 1.0), m @ rho @ m, atol=1e-15)
        assert np.array_equal(weak_update(rho, obs, a, 0.0, 1.0), projective_update(rho, obs, a))


def test_weak_update_on_maximally_mixed():
    # hand expansion: 0.3*I/2 + 0.6*diag(1/2, 0) - 0.2*diag(0, 1/2)
    out = weak_update(I2 / 2, SIGMA_Z, 1, 0.6, 0.8)
    assert np.allclose(out, np.diag([0.45, 0.05]), atol=1e-15)


def test_weak_update_rejects_unphysical():
    with pytest.raises(ConfigError):
        weak_update(I2 / 2, SIGMA_Z, 1, 0.8, 0.8)
    with pytest.raises(ValueError):
        weak_update(I2 / 2, SIGMA_Z, 0, 0.6, 0.8)


def test_negative_weight_branch_stays_positive():
    # F=0.8, G=0.6, a=-1 gives a negative weight on M+ rho M+
    rng = np.random.default_rng(3)
    for _ in range(50):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = z @ z.conj().T
        assert is_psd(weak_update(rho, bob_factor(0, 2), -1, 0.8, 0.6))


@given(density_matrices(), unit_observables(), pointers(), st.floats(min_value=0.1, max_value=1))
def test_weak_update_completeness_and_positivity(rho, obs, fg, scale):
    f, g = fg
    rho = rho * scale
    outs = [weak_update(rho, obs, a, f, g) for a in OUTCOMES]
    assert abs(sum(np.trace(o) for o in outs) - np.trace(rho)) < 1e-12
    for o in outs:
        assert is_psd(o, 1e-10)
    for a, o in zip(OUTCOMES, outs):
        expected = (1 + a * g * np.trace(obs @ rho).real / np.trace(rho).real) * np.trace(rho).real / 2
        assert abs(np.trace(o).real - expected) < 1e-12


@given(density_matrices(), unit_observables())
def test_projective_update_completeness(rho, obs):
    total = sum(np.trace(projective_update(rho, obs, a)) for a in OUTCOMES)
    assert abs(total - np.trace(rho)) < 1e-12


def test_projective_update_examples():
    up = np.diag([1, 0]).astype(complex)
    assert np.array_equal(projective_update(up, SIGMA_Z, 1), up)
    assert np.array_equal(projective_update(up, SIGMA_Z, -1), np.zeros((2, 2)))


def test_bob_reduce_singlet_example():
    # direct 4x4 computation from the ket
    psi = np.array([0, 1, -1, 0]) / R2
    m = (I2 + (SIGMA_X + SIGMA_Z) / R2) / 2
    phi = tensor(I2, m) @ psi
    reduced = np.einsum("ab,cb->ac", phi.reshape(2, 2), phi.reshape(2, 2).conj())
    got = bob_project_and_reduce(singlet(), 0, 1, 2)
    assert np.allclose(got, reduced, atol=1e-15)
    assert np.allclose(got, (I2 - (SIGMA_X + SIGMA_Z) / R2) / 4, atol=1e-15)


@pytest.mark.parametrize("k", (2, 3, 4))
def test_bob_reduce_completeness(k):
    for y in range(k):
        total = sum(np.trace(bob_project_and_reduce(singlet(), y, b, k)) for b in OUTCOMES)
        assert abs(total - 1) < 1e-14


def test_bob_reduce_product_state():
    rho = tensor(I2 / 2, I2 / 2)
    for b in OUTCOMES:
        assert np.allclose(bob_project_and_reduce(rho, 1, b, 3), I2 / 4, atol=1e-15)
