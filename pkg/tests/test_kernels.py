import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phiperiodic import _kernels as K

pytestmark = pytest.mark.skipif(K.numba_kernels is None, reason="numba not installed")

NB, NP = K.numba_kernels, K.numpy_kernels


def _arrays(seed, N=37, n=3, scale=1.0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(N, n)) * scale, rng.normal(size=(N, n))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 40), st.integers(1, 4))
def test_numba_matches_numpy(seed, N, n):
    A, B = _arrays(seed, N, n)
    h = 1.0 / N
    np.testing.assert_allclose(NB.slopes(A, h), NP.slopes(A, h), rtol=1e-15, atol=0)
    np.testing.assert_allclose(NB.row_norms(A), NP.row_norms(A), rtol=1e-15)
    np.testing.assert_allclose(NB.stencil(A, B, h), NP.stencil(A, B, h), rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(NB.el_residual(A, B, h), NP.el_residual(A, B, h), rtol=1e-14)
    assert NB.sup_distance(A, B) == pytest.approx(NP.sup_distance(A, B), rel=1e-15)
    w = A[:, 0]
    for M in {1, N, max(1, N // 2)}:
        if N % M == 0:
            np.testing.assert_allclose(NB.cell_sums(w, M), NP.cell_sums(w, M), rtol=1e-13,
                                       atol=1e-14)


def test_relativistic_parity_inside_ball():
    rng = np.random.default_rng(3)
    V = rng.uniform(-0.5, 0.5, size=(50, 2))
    Pa, pa = NB.relativistic(V, 1.0, 2.0, 1.5)
    Pb, pb = NP.relativistic(V, 1.0, 2.0, 1.5)
    np.testing.assert_allclose(Pa, Pb, rtol=1e-15)
    np.testing.assert_allclose(pa, pb, rtol=1e-15)


def test_relativistic_boundary_is_infinite():
    V = np.array([[1.0, 0.0]])
    _, phi = NB.relativistic(V, 1.0, 1.0, 0.0)
    assert np.isinf(phi[0, 0])


@pytest.mark.parametrize("flag,backend", [("0", "numpy"), ("off", "numpy"), ("1", "numba")])
def test_env_flag_selects_backend(flag, backend):
    env = dict(os.environ, PHIPERIODIC_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "import phiperiodic; print(phiperiodic.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == backend


def test_solver_agrees_across_backends():
    code = ("from phiperiodic.scenarios import preset_config;"
            "from phiperiodic.config import resolve_config, problem_from_config;"
            "from phiperiodic.minimize import multi_start;"
            "cfg = resolve_config(preset_config('balanced-tilt'));"
            "p = problem_from_config(cfg);"
            "r = multi_start(p, None, 32, starts=4, seed=1);"
            "print(repr(r.best.value))")
    vals = []
    for flag in ("0", "1"):
        env = dict(os.environ, PHIPERIODIC_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True)
        vals.append(float(out.stdout.strip()))
    assert vals[0] == pytest.approx(vals[1], abs=1e-10)
