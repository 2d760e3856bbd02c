import numpy as np
import pytest

from phiperiodic.action import SaddleProblem
from phiperiodic.errors import PreconditionError
from phiperiodic.minimize import Options, local_min
from phiperiodic.potentials import KineticPotential, PerturbShape, TimePotential
from phiperiodic.saddle import (PerturbFamily, level_constrained_min, minimax_gap, outer_value,
                                prop2A_check, property_P_witness, saddle_search)


def test_witness_free_family():
    Y = PerturbFamily.free(4, 1.0)
    d = property_P_witness(Y, [1.0, -2.0, 0.0, 3.0])
    np.testing.assert_array_equal(d, [1.0, -1.0, 0.0, 1.0])
    assert np.dot(d, [1.0, -2.0, 0.0, 3.0]) > 0


def test_witness_zero_and_cone():
    assert property_P_witness(PerturbFamily.free(4, 1.0), np.zeros(4)) is None
    assert property_P_witness(PerturbFamily.nonnegative(2, 1.0), [-1.0, -1.0]) is None
    assert property_P_witness(PerturbFamily.nonnegative(2, 1.0), [-1.0, 0.5]) is not None


def test_witness_node_values_and_box():
    Y = PerturbFamily.free(4, 1.0)
    h = np.repeat([1.0, -1.0, 0.0, 2.0], 8)
    np.testing.assert_array_equal(property_P_witness(Y, h), [1, -1, 0, 1])
    B = PerturbFamily.box(4, 1.0, -1.0, 1.0)
    assert not B.has_property_P and property_P_witness(B, h) is None


def test_family_projection_and_sampling():
    rng = np.random.default_rng(0)
    for Y in (PerturbFamily.free(8, 2.0), PerturbFamily.nonnegative(8, 2.0),
              PerturbFamily.box(8, 2.0, -0.5, [0.1] * 8)):
        for _ in range(20):
            s = Y.sample(rng)
            assert Y.contains(s)
            assert Y.contains(Y.project(rng.normal(scale=3, size=8)))
    with pytest.raises(PreconditionError):
        PerturbFamily.box(2, 1.0, 1.0, 0.0)


def test_prop2A_double_well(double_well):
    out = prop2A_check(double_well, PerturbFamily.free(16, 1.0), [-1.0], [1.0], r=0.0, N=32,
                       n_psi=20, n_traj=10)
    assert out["a"]["passed"] and out["a"]["gap"] == pytest.approx(1.0, abs=1e-3)
    assert out["a"]["sup_A"] == -1.0
    assert out["b"]["passed"] and out["b"]["max_min_pairing"] <= 0
    assert out["c"]["passed"] and out["d"]["passed"]


def test_prop2A_precondition(double_well):
    with pytest.raises(PreconditionError):
        prop2A_check(double_well, PerturbFamily.free(16, 1.0), [0.5], [1.0], r=0.0)


def test_outer_value_double_well(double_well):
    Y = PerturbFamily.free(16, 1.0)
    m, sg, rep = outer_value(double_well, Y, np.zeros(16), 64)
    assert m == pytest.approx(-1.0, abs=1e-12)
    x = rep.representative(0).traj.nodes[0, 0]
    np.testing.assert_allclose(sg, x * Y.width, atol=1e-12)


def test_outer_value_level_minimizer():
    p = SaddleProblem(KineticPotential(1.0), TimePotential("x1^2", 1), PerturbShape("x1", 1), 1.0)
    m, sg, _ = outer_value(p, PerturbFamily.free(8, 1.0), np.zeros(8), 32)
    assert np.all(sg == 0.0) and m == -1.0


def test_supergradient_inequality(tilt):
    Y = PerturbFamily.free(16, 1.0)
    rng = np.random.default_rng(8)
    psi = Y.sample(rng, 0.2)
    m, sg, _ = outer_value(tilt, Y, psi, 64)
    for _ in range(5):
        other = Y.sample(rng, 0.2)
        m2 = outer_value(tilt, Y, other, 64)[0]
        assert m2 <= m + float(np.dot(sg, other - psi)) + 1e-9


def test_saddle_double_well_immediate(double_well):
    res = saddle_search(double_well, PerturbFamily.free(16, 1.0), 64)
    assert res.found and len(res.trace) == 1 and np.all(res.psi.values == 0.0)


def test_saddle_tilt_and_certificate_soundness(tilt):
    res = saddle_search(tilt, PerturbFamily.free(16, 1.0), 64)
    assert res.found and res.psi.values.mean() == pytest.approx(-0.1, abs=0.02)
    rep = res.report
    opts = Options()
    for i in res.report.certificate.clusters:
        r0 = rep.representative(i)
        again = local_min(tilt, res.psi.values, r0.traj, opts)
        assert abs(again.value - r0.value) <= rep.eps_val
        assert again.residual <= opts.res_tol


def test_saddle_convex_not_found(convex):
    res = saddle_search(convex, PerturbFamily.free(16, 1.0), 64, max_iters=5)
    assert not res.found and res.status == "NotFound" and len(res.trace) == 5
    assert res.best_m == max(row["m"] for row in res.trace)


def test_saddle_needs_property_P(double_well):
    with pytest.raises(PreconditionError):
        saddle_search(double_well, PerturbFamily.nonnegative(16, 1.0), 64)


def test_minimax_gap_degenerate_G():
    p = SaddleProblem(KineticPotential(1.0), TimePotential("(x1^2-1)^2", 1),
                      PerturbShape("0*x1", 1), 1.0)
    gap = minimax_gap(p, PerturbFamily.free(8, 1.0), 32, budget=2, radius=3.0)
    assert gap.upper == pytest.approx(-1.0, abs=1e-9)
    assert gap.lower == pytest.approx(gap.upper, abs=1e-9) and not gap.strict


def test_minimax_gap_tilt_and_weak_duality(tilt):
    gap = minimax_gap(tilt, PerturbFamily.free(16, 1.0), 64)
    assert gap.strict and gap.lower <= gap.upper
    assert gap.upper - gap.lower == pytest.approx(1.0, abs=0.01)


def test_level_constrained_min_double_well(double_well):
    lm = level_constrained_min(double_well, 32)
    assert lm.value == pytest.approx(0.0, abs=1e-6) and lm.violation <= 1e-6
