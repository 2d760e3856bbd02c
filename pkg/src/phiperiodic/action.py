"""Discrete action I(u), saddle functional J(u, psi) and their node gradients.

Quadrature is the node rectangle rule on t_i = i*h:

    J(u, psi) = sum_i h*Phi(v_i) + sum_i h*F(t_i, u_i) + sum_i h*psi(t_i)*(G(u_i) - r)

so that dJ/du_i = -(phi(v_i) - phi(v_{i-1})) + h*(grad F + psi*grad G)(t_i, u_i)
is exactly the discrete Euler-Lagrange stencil.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GridMismatch, PreconditionError
from .potentials import KineticPotential, PerturbShape, TimePotential
from .trajectory import Trajectory


@dataclass(frozen=True)
class SaddleProblem:
    kin: KineticPotential
    F: TimePotential
    G: PerturbShape
    T: float
    r: float = 0.0

    def __post_init__(self):
        if self.F.n != self.G.n:
            raise PreconditionError("F and G disagree on the dimension")
        if not self.T > 0:
            raise PreconditionError("T must be positive")

    @property
    def n(self):
        return self.F.n

    @property
    def L(self):
        return self.kin.L

    @property
    def gamma(self):
        return self.F.gamma

    def with_r(self, r):
        return SaddleProblem(self.kin, self.F, self.G, self.T, float(r))

    def mean_potential(self, X, N):
        """Psi(x) = sum_i h*F(t_i, x) for constant trajectories, X of shape (m, n)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        h = self.T / N
        t = np.arange(N) * h
        if not self.F.time_dependent:
            return self.T * self.F.value(0.0, X)
        vals = self.F.value(t[:, None], X[None, :, :])
        return h * vals.sum(axis=0)

    def constant_value(self, X, N):
        """J at constant trajectories with psi = 0: T*Phi(0) + Psi(x)."""
        phi0 = float(self.kin.value(np.zeros(self.n)))
        return self.T * phi0 + self.mean_potential(X, N)


@dataclass(frozen=True, eq=False)
class PerturbCoeffs:
    """Piecewise-constant psi on M uniform cells of [0, T]."""

    values: np.ndarray
    family: object = None

    def __post_init__(self):
        v = np.array(np.atleast_1d(self.values), dtype=float)
        if not np.all(np.isfinite(v)):
            raise PreconditionError("psi must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self):
        return self.values.size

    def sup_norm(self):
        return float(np.abs(self.values).max())

    @classmethod
    def constant(cls, value, M, family=None):
        return cls(np.full(M, float(value)), family)


def _psi_values(psi):
    if isinstance(psi, PerturbCoeffs):
        return psi.values
    return np.atleast_1d(np.asarray(psi, dtype=float))


def node_cells(N, M):
    if N % M and M % N:
        raise GridMismatch(f"N = {N} and M = {M} are not nested")
    return (np.arange(N) * M) // N


def psi_at_nodes(psi, N):
    """psi(t_i) for the N trajectory nodes (cell containing t_i)."""
    v = _psi_values(psi)
    return v[node_cells(N, v.size)]


class Objective:
    """J(., psi) (+ optional quadratic level penalty) on raw (N, n) node arrays."""

    def __init__(self, p: SaddleProblem, N: int, psi=None, mu=0.0):
        self.p = p
        self.N = N
        self.h = p.T / N
        self.t = np.arange(N) * self.h
        if psi is None:
            self.psi = np.zeros(N)
        else:
            self.psi = psi_at_nodes(psi, N)
        self.mu = float(mu)
        self.uses_G = bool(np.any(self.psi != 0.0)) or self.mu > 0.0
        self._k = _kernels.kernels

    def value(self, U):
        p, h = self.p, self.h
        V = self._k.slopes(U, h)
        Phi, _ = p.kin.value_grad(V)
        total = h * Phi.sum() + h * p.F.value(self.t, U).sum()
        if self.uses_G:
            gr = p.G.value(U) - p.r
            total += h * np.dot(self.psi, gr) + self.mu * h * np.dot(gr, gr)
        return float(total)

    def force(self, U):
        """grad_x (F + psi*G + mu*(G-r)^2)(t_i, u_i) and the potential part of J."""
        p, h = self.p, self.h
        Fv, force = p.F.value_grad(self.t, U)
        pot = h * Fv.sum()
        if self.uses_G:
            Gv, Gg = p.G.value_grad(U)
            gr = Gv - p.r
            coef = self.psi + 2.0 * self.mu * gr
            force = force + coef[:, None] * Gg
            pot += h * np.dot(self.psi, gr) + self.mu * h * np.dot(gr, gr)
        return np.ascontiguousarray(force), pot

    def value_grad(self, U):
        h = self.h
        V = self._k.slopes(U, h)
        Phi, phi = self.p.kin.value_grad(V)
        force, pot = self.force(U)
        return float(h * Phi.sum() + pot), self._k.stencil(np.ascontiguousarray(phi), force, h)

    def residuals(self, U):
        """Per-node |(phi(v_i) - phi(v_{i-1}))/h - force_i| and phi(v)."""
        V = self._k.slopes(U, self.h)
        _, phi = self.p.kin.value_grad(V)
        phi = np.ascontiguousarray(phi)
        force, _ = self.force(U)
        return self._k.el_residual(phi, force, self.h), phi


def _nodes(u):
    return np.ascontiguousarray(u.nodes if isinstance(u, Trajectory) else u, dtype=float)


def action_I(p: SaddleProblem, u: Trajectory):
    return Objective(p, u.N).value(_nodes(u))


def J_eval(p: SaddleProblem, u: Trajectory, psi):
    return Objective(p, u.N, psi).value(_nodes(u))


def J_grad(p: SaddleProblem, u: Trajectory, psi):
    """dJ/du_i as an (N, n) array."""
    return Objective(p, u.N, psi).value_grad(_nodes(u))[1]


def level_penalty_value(p: SaddleProblem, u: Trajectory, mu):
    """f(u) + mu * sum_i h (G(u_i) - r)^2 with psi = 0."""
    return Objective(p, u.N, None, mu).value(_nodes(u))


def g_pairing(p: SaddleProblem, u: Trajectory, psi):
    """g(u, psi) = sum_i h psi(t_i) (G(u_i) - r), the psi-dependent part of J."""
    psi_n = psi_at_nodes(psi, u.N)
    return float(u.h * np.dot(psi_n, p.G.value(u.nodes) - p.r))


def cell_pairing(p: SaddleProblem, u: Trajectory, M):
    """Per-cell sums of h*(G(u_i) - r): the coefficient-space supergradient."""
    node_cells(u.N, M)
    w = u.h * (p.G.value(u.nodes) - p.r)
    return _kernels.kernels.cell_sums(np.ascontiguousarray(w), M)
