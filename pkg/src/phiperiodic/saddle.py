"""Perturbation families, minimax checks and the supergradient saddle search.

m(psi) = inf_u J(u, psi) is concave because J is affine in psi; the search
climbs m until J(., psi) shows two separated global minima.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .action import (Objective, PerturbCoeffs, SaddleProblem, cell_pairing, g_pairing,
                     node_cells)
from .errors import LevelSetEmpty, PenaltyNotConverged, PreconditionError
from .hypotheses import MU_SCHEDULE, level_points
from .minimize import MinimaReport, Options, local_min, multi_start
from .trajectory import Trajectory, make_constant, random_k_member


@dataclass(frozen=True, eq=False)
class PerturbFamily:
    """Box/cone-constrained piecewise-constant perturbations on M cells of [0, T]."""

    M: int
    T: float
    lower: np.ndarray
    upper: np.ndarray
    kind: str = "box"

    @classmethod
    def free(cls, M, T):
        return cls(M, T, np.full(M, -np.inf), np.full(M, np.inf), "free")

    @classmethod
    def nonnegative(cls, M, T):
        return cls(M, T, np.zeros(M), np.full(M, np.inf), "nonnegative")

    @classmethod
    def box(cls, M, T, lower, upper):
        lo = np.broadcast_to(np.asarray(lower, dtype=float), (M,)).copy()
        hi = np.broadcast_to(np.asarray(upper, dtype=float), (M,)).copy()
        if np.any(lo > hi):
            raise PreconditionError("empty box")
        return cls(M, T, lo, hi, "box")

    @property
    def width(self):
        return self.T / self.M

    def project(self, values):
        return np.clip(np.asarray(values, dtype=float), self.lower, self.upper)

    def contains(self, values):
        v = np.asarray(values, dtype=float)
        return bool(np.all(v >= self.lower) and np.all(v <= self.upper))

    def recession_signs(self):
        """(allowed +direction, allowed -direction) per cell."""
        return np.isposinf(self.upper), np.isneginf(self.lower)

    @property
    def has_property_P(self):
        pos, neg = self.recession_signs()
        return bool(np.all(pos & neg))

    def sample(self, rng, scale=1.0):
        z = rng.normal(scale=scale, size=self.M)
        lo = np.where(np.isfinite(self.lower), self.lower, z - abs(z))
        hi = np.where(np.isfinite(self.upper), self.upper, z + abs(z))
        if self.kind == "nonnegative":
            return np.abs(z)
        both = np.isfinite(self.lower) & np.isfinite(self.upper)
        u = rng.uniform(size=self.M)
        return np.where(both, lo + u * (hi - lo), self.project(z))

    def to_dict(self):
        return {"kind": self.kind, "M": self.M, "T": self.T,
                "lower": [None if np.isinf(x) else float(x) for x in self.lower],
                "upper": [None if np.isinf(x) else float(x) for x in self.upper],
                "property_P": self.has_property_P}


def _cell_integrals(Y: PerturbFamily, h_values):
    h_values = np.asarray(h_values, dtype=float)
    if h_values.size == Y.M:
        return h_values * Y.width
    node_cells(h_values.size, Y.M)
    step = Y.T / h_values.size
    return np.bincount((np.arange(h_values.size) * Y.M) // h_values.size,
                       weights=step * h_values, minlength=Y.M)


def property_P_witness(Y: PerturbFamily, h_values):
    """Recession direction d of Y with sum_c d_c * int_c h > 0, or None.

    ``h_values`` holds either M cell values or node values on a grid nested
    with Y's cells.
    """
    I = _cell_integrals(Y, h_values)
    pos, neg = Y.recession_signs()
    d = np.where((I > 0) & pos, 1.0, np.where((I < 0) & neg, -1.0, 0.0))
    if float(np.dot(d, I)) > 0.0:
        return d
    return None


# ------------------------------------------------------- constrained values

@dataclass
class LevelMin:
    value: float
    violation: float
    traj: Trajectory
    mu: float
    candidates: list = field(default_factory=list)


def level_constrained_min(p: SaddleProblem, N, opts: Options | None = None,
                          mu_schedule=MU_SCHEDULE, radius=None, max_starts=4, tol=1e-3):
    """Estimate inf{f(u) : G(u(t)) = r} by quadratic-penalty trajectory descent.

    Starts are constant trajectories at level points; each is continued
    through the increasing mu schedule.  The reported value is the plain f.
    """
    opts = opts or Options()
    Z = level_points(p, p.r, N, radius)
    f = Objective(p, N)
    best = None
    cands = []
    for z in Z[:max_starts]:
        u = make_constant(z, N, p.T)
        for mu in mu_schedule:
            u = local_min(p, None, u, opts, mu=mu).traj
        viol = float(np.abs(p.G.value(u.nodes) - p.r).max())
        val = f.value(np.ascontiguousarray(u.nodes))
        cands.append((val, viol))
        if viol <= tol * (1.0 + abs(p.r)) and (best is None or val < best.value):
            best = LevelMin(val, viol, u, mu_schedule[-1])
    if best is None:
        raise PenaltyNotConverged(f"constraint violation {min(c[1] for c in cands):.3e}")
    best.candidates = cands
    return best


def constant_f(p: SaddleProblem, x, N):
    return float(p.constant_value(np.atleast_2d(x), N)[0])


def prop2A_check(p: SaddleProblem, Y: PerturbFamily, x1, x2, r=None, N=64,
                 opts: Options | None = None, seed=0, n_psi=100, n_traj=50, radius=None):
    """Numerical versions of the four sufficient conditions for a strict minimax gap."""
    r = p.r if r is None else float(r)
    p = p.with_r(r)
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    G1 = float(p.G.value(x1[None, :])[0])
    G2 = float(p.G.value(x2[None, :])[0])
    if not G1 < r < G2:
        raise PreconditionError(f"need G(x1) < r < G(x2), got {G1!r}, {r!r}, {G2!r}")
    rng = np.random.default_rng(seed)

    sup_A = max(constant_f(p, x1, N), constant_f(p, x2, N))
    lm = level_constrained_min(p, N, opts, radius=radius)
    a = {"passed": bool(sup_A < lm.value), "sup_A": sup_A, "inf_B": lm.value,
         "gap": lm.value - sup_A, "violation": lm.violation}

    A = [make_constant(x1, N, p.T), make_constant(x2, N, p.T)]
    worst_b = -math.inf
    psis = [Y.sample(rng) for _ in range(n_psi)]
    for psi in psis:
        worst_b = max(worst_b, min(g_pairing(p, u, psi) for u in A))
    b = {"passed": bool(worst_b <= 0.0), "max_min_pairing": worst_b, "samples": n_psi}

    Z = level_points(p, r, N, radius)
    worst_c = 0.0
    for z in Z:
        u = make_constant(z, N, p.T)
        for psi in psis:
            worst_c = max(worst_c, abs(g_pairing(p, u, psi)))
    level_gap = float(np.abs(p.G.value(Z) - r).max())
    c = {"passed": bool(worst_c <= 1e-12 * (1.0 + max(np.abs(ps).max() for ps in psis))),
         "max_abs_pairing": worst_c, "level_residual": level_gap, "level_points": len(Z)}

    found = 0
    for _ in range(n_traj):
        u = random_k_member(rng, p.n, N, p.T, p.L, center_radius=2.0)
        hv = p.G.value(u.nodes) - r
        d = property_P_witness(Y, hv)
        if d is not None and np.any(hv != 0):
            found += 1
    d_ = {"passed": found == n_traj, "witnesses": found, "samples": n_traj}
    return {"a": a, "b": b, "c": c, "d": d_}


# ------------------------------------------------------------ outer ascent

def outer_value(p: SaddleProblem, Y: PerturbFamily, psi, N, opts: Options | None = None,
                seed=0, radius=None, starts=None):
    """m(psi), a supergradient from the lowest cluster, and the multi-start report."""
    vals = np.asarray(getattr(psi, "values", psi), dtype=float)
    rep = multi_start(p, vals, N, starts=starts, seed=seed, opts=opts, radius=radius)
    u = rep.representative(0).traj
    return rep.representative(0).value, cell_pairing(p, u, Y.M), rep


@dataclass
class SaddleResult:
    psi: PerturbCoeffs
    report: MinimaReport
    trace: list
    found: bool
    best_m: float

    @property
    def status(self):
        return "certificate" if self.found else "NotFound"


def _g_range(p, rep):
    vals = [p.G.value(rep.results[c.rep].traj.nodes) for c in rep.clusters]
    allv = np.concatenate(vals)
    return float(allv.max() - allv.min())


def saddle_search(p: SaddleProblem, Y: PerturbFamily, N, psi0=None, max_iters=30,
                  alpha0=None, opts: Options | None = None, seed=0, radius=None,
                  starts=None):
    """Projected supergradient ascent on psi -> inf_u J(u, psi).

    Steps are alpha_k = alpha0/sqrt(k+1) along the L2 representative of the
    supergradient (cell sums divided by the cell width), truncated where the
    affine model of the lowest cluster first meets that of a rival cluster.
    Returns at the first iterate whose report carries a two-minima
    certificate; otherwise the iterate with the largest m, flagged NotFound.
    """
    if not Y.has_property_P:
        raise PreconditionError("saddle search needs a family with property (P)")
    if max_iters < 1:
        raise PreconditionError("max_iters must be >= 1")
    opts = opts or Options()
    psi = Y.project(np.zeros(Y.M) if psi0 is None else np.asarray(
        getattr(psi0, "values", psi0), dtype=float))
    trace = []
    best = None
    for k in range(max_iters):
        m, sg, rep = outer_value(p, Y, psi, N, opts, seed, radius, starts)
        found = rep.certificate.present
        trace.append({"iter": k, "m": m, "psi": psi.copy(), "certificate": found})
        if best is None or m > best[0]:
            best = (m, psi.copy(), rep)
        if found:
            return SaddleResult(PerturbCoeffs(psi, Y), rep, trace, True, m)
        if k == max_iters - 1:
            break
        if alpha0 is None:
            alpha0 = 0.5 / (1.0 + _g_range(p, rep))
        step = alpha0 / math.sqrt(k + 1)
        direction = sg / Y.width
        for c in rep.clusters[1:]:
            gb = cell_pairing(p, rep.results[c.rep].traj, Y.M)
            denom = float(np.dot(sg - gb, direction))
            if denom > 0:
                s_tie = (c.value - m) / denom
                if 0.0 < s_tie < step:
                    step = s_tie
        psi = Y.project(psi + step * direction)
    m, psi_best, rep = best
    return SaddleResult(PerturbCoeffs(psi_best, Y), rep, trace, False, m)


@dataclass
class GapResult:
    lower: float
    upper: float
    strict: bool
    margin: float
    saddle: SaddleResult
    level: LevelMin

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "gap": self.upper - self.lower,
                "strict": self.strict, "margin": self.margin,
                "upper_violation": self.level.violation}


def minimax_gap(p: SaddleProblem, Y: PerturbFamily, N, budget=30, opts: Options | None = None,
                seed=0, radius=None, saddle: SaddleResult | None = None, starts=None):
    """(sup_psi inf_u J estimate, inf over the level set of f estimate, strict?)."""
    level = level_constrained_min(p, N, opts, radius=radius)
    if saddle is None:
        saddle = saddle_search(p, Y, N, max_iters=budget, opts=opts, seed=seed,
                               radius=radius, starts=starts)
    lower = max(row["m"] for row in saddle.trace)
    margin = 1e-6 * (1.0 + abs(level.value))
    return GapResult(lower, level.value, bool(lower + margin < level.value), margin,
                     saddle, level)


__all__ = ["PerturbFamily", "property_P_witness", "prop2A_check", "outer_value",
           "saddle_search", "minimax_gap", "level_constrained_min", "LevelSetEmpty"]
