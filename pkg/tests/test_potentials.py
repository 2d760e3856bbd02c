import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phiperiodic.errors import ConvergenceError, DomainError
from phiperiodic.potentials import (KineticPotential, TimePotential, check_class_A,
                                    kinetic_eval, phi_inverse)


def test_origin():
    Phi, phi = kinetic_eval(KineticPotential(1.0), [0.0])
    assert Phi == -1.0 and np.all(phi == 0.0)


def test_hand_value():
    Phi, phi = kinetic_eval(KineticPotential(1.0), [0.6])
    assert Phi == pytest.approx(-0.8, abs=1e-15)
    assert phi[0] == pytest.approx(0.75, abs=1e-15)


def test_boundary():
    kin = KineticPotential(1.0)
    v = np.array([0.6, 0.8])
    assert kinetic_eval(kin, v, want_grad=False)[0] == 0.0
    with pytest.raises(DomainError):
        kinetic_eval(kin, v)
    with pytest.raises(DomainError):
        kin.value(np.array([1.0 + 1e-9]))


def test_phi_inverse_examples():
    kin = KineticPotential(1.0)
    assert np.all(phi_inverse(kin, [0.0]) == 0.0)
    assert phi_inverse(kin, [0.75])[0] == pytest.approx(0.6, abs=1e-15)


@pytest.mark.parametrize("kin,wmax", [(KineticPotential(1.3), 100.0),
                                      (KineticPotential(0.7, scale=2.5, offset=0.3), 100.0),
                                      (KineticPotential(2.0, "user-polynomial",
                                                        coeffs=(-4.0, 0.5, 0.1)), 5.0)])
def test_roundtrip_random_w(kin, wmax):
    # polynomial profiles have bounded phi on the ball, so w stays in its range
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        d = rng.normal(size=n)
        w = d / np.linalg.norm(d) * wmax * 10 ** rng.uniform(-5, 0)
        v = phi_inverse(kin, w)
        assert np.linalg.norm(v) < kin.L
        assert np.abs(kin.grad(v) - w).max() <= 1e-10 * (1 + np.linalg.norm(w))


def test_polynomial_inverse_out_of_range():
    # a bounded phi cannot reach large |w|
    kin = KineticPotential(1.0, "user-polynomial", coeffs=(-1.0, 0.5))
    with pytest.raises(ConvergenceError):
        phi_inverse(kin, [100.0])


def test_class_A_relativistic_passes():
    rep = check_class_A(KineticPotential(1.0), samples=200, seed=1)
    assert rep.passed, rep.checks
    assert rep.max_fd_discrepancy <= 1e-6


def test_class_A_concave_impostor_fails_monotonicity():
    rep = check_class_A(KineticPotential(1.0, scale=-1.0), samples=100)
    assert not rep.checks["strictly_monotone"]


def test_class_A_shift_fails_nonpositivity():
    rep = check_class_A(KineticPotential(1.0, offset=2.0), samples=100)
    assert not rep.checks["nonpositive"]


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 5.0), st.lists(st.floats(-1, 1), min_size=2, max_size=2),
       st.lists(st.floats(-1, 1), min_size=2, max_size=2))
def test_monotone_and_nonpositive(L, a, b):
    kin = KineticPotential(L)
    a = 0.99 * L * np.asarray(a) / max(1.0, np.linalg.norm(a) * 1.0001)
    b = 0.99 * L * np.asarray(b) / max(1.0, np.linalg.norm(b) * 1.0001)
    assert kin.value(a) <= 0.0
    if np.linalg.norm(a - b) > 1e-6 * L:
        assert np.dot(kin.grad(a) - kin.grad(b), a - b) > 0


def test_gradient_fd_consistency():
    kin = KineticPotential(2.0)
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = rng.uniform(-1, 1, 3) * 0.9
        step = 1e-5 * kin.L
        fd = np.array([(kin.value(v + step * e) - kin.value(v - step * e)) / (2 * step)
                       for e in np.eye(3)])
        assert np.abs(fd - kin.grad(v)).max() <= 1e-6 * (1 + np.abs(fd).max())


def test_value_grad_matches_pointwise():
    kin = KineticPotential(1.5, scale=0.7, offset=0.1)
    V = np.random.default_rng(2).uniform(-0.8, 0.8, (20, 2))
    Phi, phi = kin.value_grad(V)
    np.testing.assert_allclose(Phi, kin.value(V), rtol=1e-14)
    np.testing.assert_allclose(phi, kin.grad(V), rtol=1e-14)


def test_time_potential_weight_and_shapes():
    F = TimePotential("(x1^2-1)^2 + x2", 2, gamma="1+0.5*cos(2*pi*t)")
    t = np.linspace(0, 1, 5, endpoint=False)
    X = np.array([[0.5, 1.0]] * 5)
    v, g = F.value_grad(t, X)
    w = 1 + 0.5 * np.cos(2 * np.pi * t)
    np.testing.assert_allclose(v, w * ((0.25 - 1) ** 2 + 1.0))
    np.testing.assert_allclose(g[:, 0], w * 4 * 0.5 * (0.25 - 1))
    np.testing.assert_allclose(g[:, 1], w)
    assert F.time_dependent
    assert not TimePotential("x1^2", 1).time_dependent
