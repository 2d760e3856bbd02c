import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phiperiodic.errors import PreconditionError
from phiperiodic.trajectory import (Trajectory, check_bound_1_1, k_membership, make_constant,
                                    random_k_member, random_walk_member, sup_distance, write_csv)


def test_constant_zero():
    u = make_constant([0.0], 8, 1.0)
    assert np.all(u.slopes == 0.0)
    assert k_membership(u, 1e-9) == (True, 0.0)


def test_constant_vector_bound_equality():
    u = make_constant([1.0, -1.0], 4, 2.0)
    assert u.max_slope() == 0.0
    holds, slack = check_bound_1_1(u, 1.0)
    assert holds and slack == pytest.approx(2.0)


def test_sawtooth_member():
    u = Trajectory([0.0, 0.25], 1.0)
    np.testing.assert_allclose(u.slopes[:, 0], [0.5, -0.5])
    ok, m = k_membership(u, 1.0)
    assert ok and m == 0.5
    holds, slack = check_bound_1_1(u, 1.0)
    assert holds and slack == pytest.approx(0.75)


def test_sawtooth_not_member():
    u = Trajectory([0.0, 0.75], 1.0)
    ok, m = k_membership(u, 1.0)
    assert not ok and m == pytest.approx(1.5)
    with pytest.raises(PreconditionError):
        check_bound_1_1(u, 1.0)


def test_constant_slack_is_LT():
    assert check_bound_1_1(make_constant([3.0], 16, 1.0), 1.0)[1] == pytest.approx(1.0)


def test_nodes_read_only():
    u = make_constant([1.0], 4, 1.0)
    with pytest.raises(ValueError):
        u.nodes[0, 0] = 2.0


def test_bad_inputs():
    with pytest.raises(PreconditionError):
        make_constant([0.0], 1, 1.0)
    with pytest.raises(PreconditionError):
        Trajectory([0.0, 1.0], 0.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(2, 64),
       st.floats(0.1, 10.0), st.floats(0.05, 5.0), st.booleans())
def test_generated_members_obey_bound(seed, n, N, T, L, smooth):
    rng = np.random.default_rng(seed)
    if smooth:
        u = random_k_member(rng, n, N, T, L, center_radius=3.0)
    else:
        u = random_walk_member(rng, n, N, T, L)
    assert k_membership(u, L)[0]
    assert check_bound_1_1(u, L)[1] >= -1e-12
    # closure of the periodic loop
    assert np.abs(u.slopes.sum(axis=0)).max() <= 1e-10 * N * L


def test_sup_distance():
    a = make_constant([1.0, 0.0], 4, 1.0)
    b = make_constant([-1.0, 0.0], 4, 1.0)
    assert sup_distance(a, b) == 2.0


def test_csv_rows(tmp_path):
    u = random_k_member(np.random.default_rng(0), 2, 10, 2.0, 1.0)
    path = tmp_path / "u.csv"
    write_csv(u, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,u1,u2"
    assert len(lines) == 1 + u.N + 1
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_array_equal(data[-1, 1:], data[0, 1:])
    assert data[-1, 0] == 2.0
    np.testing.assert_array_equal(data[:-1, 1:], u.nodes)
