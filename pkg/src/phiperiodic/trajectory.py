"""Periodic piecewise-linear trajectories with a slope bound."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Nodes u_0..u_{N-1} of a T-periodic path on the uniform grid t_i = i*T/N."""

    nodes: np.ndarray
    T: float

    def __post_init__(self):
        U = np.array(self.nodes, dtype=float, copy=True)
        if U.ndim == 1:
            U = U[:, None]
        if U.ndim != 2 or U.shape[0] < 2:
            raise PreconditionError("a trajectory needs N >= 2 nodes of shape (N, n)")
        if not self.T > 0:
            raise PreconditionError("period T must be positive")
        U.setflags(write=False)
        object.__setattr__(self, "nodes", U)

    @property
    def N(self):
        return self.nodes.shape[0]

    @property
    def n(self):
        return self.nodes.shape[1]

    @property
    def h(self):
        return self.T / self.N

    @property
    def times(self):
        return np.arange(self.N) * self.h

    @property
    def slopes(self):
        return _kernels.kernels.slopes(np.ascontiguousarray(self.nodes), self.h)

    def max_slope(self):
        return float(_kernels.kernels.row_norms(self.slopes).max())

    def sup_norm(self):
        return float(np.linalg.norm(self.nodes, axis=1).max())

    def with_nodes(self, U):
        return Trajectory(U, self.T)


def make_constant(x, N, T):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if N < 2:
        raise PreconditionError("N must be >= 2")
    return Trajectory(np.tile(x, (N, 1)), T)


def k_membership(u: Trajectory, L):
    m = u.max_slope()
    return m <= L * (1 + 1e-12), m


def check_bound_1_1(u: Trajectory, L):
    """Sup-inf estimate for K-members: max|u| <= L*T + min|u|."""
    member, _ = k_membership(u, L)
    if not member:
        raise PreconditionError("trajectory is not a K-member")
    norms = np.linalg.norm(u.nodes, axis=1)
    slack = L * u.T + norms.min() - norms.max()
    return slack >= 0.0, float(slack)


def sup_distance(a: Trajectory, b: Trajectory):
    return _kernels.kernels.sup_distance(np.ascontiguousarray(a.nodes), np.ascontiguousarray(b.nodes))


def random_k_member(rng, n, N, T, L, center_radius=1.0, slope_fraction=None, modes=4):
    """Seeded random smooth K-member: random centre plus a few Fourier modes.

    The result is rescaled so its maximal slope equals ``slope_fraction * L``
    (uniform in [0.1, 0.9] when not given).
    """
    if slope_fraction is None:
        slope_fraction = rng.uniform(0.1, 0.9)
    c = rng.normal(size=n)
    c *= center_radius * rng.uniform() ** (1.0 / n) / max(np.linalg.norm(c), 1e-300)
    t = np.arange(N) / N
    U = np.zeros((N, n))
    for k in range(1, modes + 1):
        a, b = rng.normal(size=(2, n)) / k
        U += np.outer(np.cos(2 * np.pi * k * t), a) + np.outer(np.sin(2 * np.pi * k * t), b)
    shape = Trajectory(U, T)
    top = shape.max_slope()
    if top > 0:
        U *= slope_fraction * L / top
    return Trajectory(U + c, T)


def random_walk_member(rng, n, N, T, L, offset_scale=1.0):
    """Rougher random K-member: i.i.d. slopes, closed by mean removal, then bounded."""
    h = T / N
    V = rng.normal(size=(N, n))
    V -= V.mean(axis=0)
    V *= rng.uniform(0.05, 1.0) * L / np.linalg.norm(V, axis=1).max()
    U = np.vstack([np.zeros((1, n)), np.cumsum(V[:-1] * h, axis=0)])
    U += offset_scale * rng.normal(size=n)
    return Trajectory(U, T)


def write_csv(u: Trajectory, path):
    """Rows (t_i, u_i components) for i = 0..N; the closing node is repeated."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t"] + [f"u{j + 1}" for j in range(u.n)])
        for i in range(u.N + 1):
            writer.writerow([format(i * u.h, ".17g")]
                            + [format(x, ".17g") for x in u.nodes[i % u.N]])
