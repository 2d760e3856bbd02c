"""Discrete Euler-Lagrange residuals and grid refinement studies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import Objective, SaddleProblem
from .minimize import Options, local_min, multi_start
from .trajectory import Trajectory


@dataclass
class Residual:
    max: float
    per_node: np.ndarray
    total_variation: float     # sum_i |phi(v_{i+1}) - phi(v_i)|, periodic

    def __iter__(self):
        return iter((self.max, self.per_node, self.total_variation))


def el_residual(p: SaddleProblem, psi, u: Trajectory) -> Residual:
    """|(phi(v_i) - phi(v_{i-1}))/h - grad_x(F + psi G)(t_i, u_i)| at every node."""
    obj = Objective(p, u.N, psi)
    res, phi = obj.residuals(np.ascontiguousarray(u.nodes))
    jumps = np.roll(phi, -1, axis=0) - phi
    tv = float(np.sqrt(np.sum(jumps * jumps, axis=1)).sum())
    return Residual(float(res.max()), res, tv)


def _psi_values(psi):
    """psi lives on its own cells, so every grid of the study reuses it unchanged."""
    if psi is None:
        return None
    return np.asarray(getattr(psi, "values", psi), dtype=float)


@dataclass
class StudyRow:
    N: int
    value: float
    residual: float
    total_variation: float
    iterations: int


def polish(p: SaddleProblem, psi, res, opts: Options | None = None, max_iter=300):
    """Continue descent from a converged minimizer down to the round-off floor."""
    opts = Options(**{**(opts or Options()).to_dict(), "tol_res": 0.0, "max_iter": max_iter})
    out = local_min(p, psi, res.traj, opts, start=res.start)
    return out if out.value <= res.value and out.residual <= res.residual else res


def convergence_study(p: SaddleProblem, psi, N_list, opts: Options | None = None, seed=0,
                      starts=None, radius=None):
    """(N, best value, max residual) for increasing grids.

    The best minimizer of each grid is polished before its residual is
    measured, so residuals reflect the discretisation, not the stopping rule.
    """
    N_list = list(N_list)
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N list must be increasing")
    if any(N % 2 for N in N_list):
        raise ValueError("grid sizes must be even")
    psi_v = _psi_values(psi)
    rows = []
    for N in N_list:
        rep = multi_start(p, psi_v, N, starts=starts, seed=seed, opts=opts, radius=radius)
        best = polish(p, psi_v, rep.best, opts)
        r = el_residual(p, psi_v, best.traj)
        rows.append(StudyRow(N, best.value, r.max, r.total_variation, best.iterations))
    return rows


def residual_ratios(rows):
    return [b.residual / a.residual if a.residual > 0 else 0.0 for a, b in zip(rows, rows[1:])]


def value_diffs(rows):
    return [abs(b.value - a.value) for a, b in zip(rows, rows[1:])]
