"""Local descent on u -> J(u, psi), multi-start search and minima clustering."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .action import Objective, SaddleProblem
from .errors import ConstantsError, DomainError, GrowthNotObserved, PreconditionError
from .trajectory import Trajectory, make_constant, random_k_member, sup_distance

logger = logging.getLogger(__name__)


@dataclass
class Options:
    margin: float = 1e-3
    tol_res: float = 1e-9          # stop when max_i |dJ/du_i| / h <= tol_res
    max_iter: int = 4000
    armijo: float = 1e-4
    precond_mass: float = 1.0
    n_starts: int = 16
    eps_val: float | None = None   # default 1e-4 * (1 + |best|)
    eps_sep: float | None = None   # default 0.1 * L * T
    res_tol: float = 1e-3          # EL residual required of certified minimizers
    workers: int = 1

    @classmethod
    def from_dict(cls, d):
        known = {k: v for k, v in (d or {}).items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self):
        return asdict(self)


@dataclass(eq=False)
class LocalResult:
    traj: Trajectory
    value: float
    iterations: int
    grad_norm: float
    residual: float
    stalled: bool = False
    start: int = 0
    history: list = field(default_factory=list, repr=False)


class _Preconditioner:
    """((kappa/h) * periodic Laplacian + h*c) applied and inverted by FFT."""

    def __init__(self, N, h, kappa, c):
        k = np.arange(N // 2 + 1)
        self.N = N
        self.lam = (kappa / h) * 4.0 * np.sin(np.pi * k / N) ** 2 + h * c

    def solve(self, G):
        return np.fft.irfft(np.fft.rfft(G, axis=0) / self.lam[:, None], n=self.N, axis=0)

    def apply(self, S):
        return np.fft.irfft(np.fft.rfft(S, axis=0) * self.lam[:, None], n=self.N, axis=0)


def _max_slope(U, h):
    D = np.roll(U, -1, axis=0) - U
    return float(np.sqrt(np.sum(D * D, axis=1)).max()) / h


def local_min(p: SaddleProblem, psi, u0: Trajectory, opts: Options | None = None,
              mu=0.0, start=0, keep_history=False) -> LocalResult:
    """Preconditioned steepest descent with Armijo and feasibility backtracking.

    The search direction is the steepest-descent direction of J in the
    discrete H^1 metric; slopes are kept inside (1 - margin) * L.
    """
    opts = opts or Options()
    obj = Objective(p, u0.N, psi, mu)
    h, N = obj.h, u0.N
    cap = (1.0 - opts.margin) * p.L
    U = np.array(u0.nodes, dtype=float)
    if _max_slope(U, h) > cap * (1 + 1e-12):
        raise PreconditionError("start violates the slope margin")

    c = opts.precond_mass
    if mu > 0:
        _, Gg = p.G.value_grad(U)
        c += 2.0 * mu * float(np.mean(np.sum(Gg * Gg, axis=1)))
    kappa = abs(p.kin.curvature0) or 1.0 / p.L
    P = _Preconditioner(N, h, kappa, c)

    f, g = obj.value_grad(U)
    history = [f] if keep_history else []
    res = float(np.sqrt(np.sum(g * g, axis=1)).max()) / h
    U_prev = g_prev = None
    it = 0
    stalled = False
    while res > opts.tol_res and it < opts.max_iter:
        d = -P.solve(g)
        gd = float(np.sum(g * d))
        t = 1.0
        if U_prev is not None:
            s = U - U_prev
            sy = float(np.sum(s * (g - g_prev)))
            if sy > 0:
                t = min(max(float(np.sum(s * P.apply(s))) / sy, 1e-8), 1e8)
        while _max_slope(U + t * d, h) > cap and t > 1e-300:
            t *= 0.5
        noise = 1e-15 * (1.0 + abs(f))
        accepted = False
        while t > 1e-14:
            Un = U + t * d
            try:
                fn = obj.value(Un)
            except DomainError:
                t *= 0.5
                continue
            if fn <= f + opts.armijo * t * gd:
                accepted = True
                break
            if -opts.armijo * t * gd < noise and fn <= f + noise:
                # decrease below round-off: accept only if the gradient shrinks
                fn2, gn = obj.value_grad(Un)
                if np.sqrt(np.sum(gn * gn, axis=1)).max() / h < res:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            stalled = True
            logger.debug("line search stalled at iteration %d, residual %.3e", it, res)
            break
        U_prev, g_prev = U, g
        U = Un
        f, g = obj.value_grad(U)
        res = float(np.sqrt(np.sum(g * g, axis=1)).max()) / h
        it += 1
        if keep_history:
            history.append(f)
    return LocalResult(Trajectory(U, u0.T), f, it, float(np.linalg.norm(g)), res,
                       stalled, start, history)


# ----------------------------------------------------------- sampling radius

def sampling_radius(gc, psi, rho, L, T):
    """Sup-norm bound on {u : J(u, psi) <= rho} from the coercivity estimate."""
    psi_inf = 0.0 if psi is None else float(np.abs(np.atleast_1d(np.asarray(
        getattr(psi, "values", psi), dtype=float))).max())
    slack = gc.nu - gc.k * psi_inf
    if slack <= 0:
        raise ConstantsError(f"nu = {gc.nu!r} <= k*||psi|| = {gc.k * psi_inf!r}")
    excess = max(rho - gc.eta1, 0.0)
    return (excess / (slack * T)) ** (1.0 / gc.q) + L * T


def search_radius(p: SaddleProblem, psi, N, q=2.0, fallback=None):
    """Radius containing every constant-beating trajectory, or a fallback.

    The level is the best J over the constants 0 and +-e_j.
    Returns (radius, info dict).
    """
    from .hypotheses import estimate_growth_constants

    pts = [np.zeros(p.n)]
    for j in range(p.n):
        e = np.zeros(p.n)
        e[j] = 1.0
        pts += [e, -e]
    obj = Objective(p, N, psi)
    rho = min(obj.value(np.tile(x, (N, 1))) for x in pts)
    try:
        gc = estimate_growth_constants(p, q, psi, N)
        R = sampling_radius(gc, psi, rho, p.L, p.T)
        return R, {"source": "coercivity", "level": rho, "delta": gc.delta, "nu": gc.nu, "k": gc.k}
    except (ConstantsError, GrowthNotObserved) as exc:
        R = fallback if fallback is not None else 4.0 * (1.0 + p.L * p.T)
        return R, {"source": "fallback", "level": rho, "reason": str(exc)}


# ------------------------------------------------------------- clustering

@dataclass
class Cluster:
    rep: int                 # index into MinimaReport.results
    value: float
    members: list

    @property
    def multiplicity(self):
        return len(self.members)


@dataclass
class Certificate:
    present: bool
    value_gap: float = math.inf
    separation: float = 0.0
    clusters: tuple = ()


@dataclass
class MinimaReport:
    results: list
    clusters: list
    certificate: Certificate
    eps_val: float
    eps_sep: float
    radius: float | None = None
    radius_info: dict | None = None

    @property
    def best(self):
        return self.results[self.clusters[0].rep] if self.clusters else None

    def representative(self, i):
        return self.results[self.clusters[i].rep]

    def to_dict(self):
        def entry(r):
            return {"start": r.start, "value": r.value, "residual": r.residual,
                    "grad_norm": r.grad_norm, "iterations": r.iterations,
                    "stalled": r.stalled, "sup_norm": r.traj.sup_norm(),
                    "mean": r.traj.nodes.mean(axis=0).tolist()}
        cert = self.certificate
        return {
            "eps_val": self.eps_val,
            "eps_sep": self.eps_sep,
            "radius": self.radius,
            "radius_info": self.radius_info,
            "clusters": [dict(entry(self.results[c.rep]), multiplicity=c.multiplicity,
                              cluster_value=c.value) for c in self.clusters],
            "certificate": {"present": cert.present, "value_gap": cert.value_gap,
                            "separation": cert.separation, "clusters": list(cert.clusters)},
            "results": [entry(r) for r in self.results],
        }


def cluster_minima(results, eps_val, eps_sep, res_tol=math.inf):
    """Greedy sup-norm clustering in order of increasing value.

    Returns (clusters, certificate).  A certificate needs two clusters whose
    values are within ``eps_val`` of the best, whose representatives are at
    least ``eps_sep`` apart and have EL residual <= ``res_tol``.
    """
    order = sorted(range(len(results)), key=lambda i: (results[i].value, i))
    clusters = []
    for i in order:
        for c in clusters:
            if sup_distance(results[c.rep].traj, results[i].traj) < eps_sep:
                c.members.append(i)
                break
        else:
            clusters.append(Cluster(i, results[i].value, [i]))
    cert = Certificate(False)
    if clusters:
        best = clusters[0]
        good = [c for c in clusters
                if c.value - best.value <= eps_val and results[c.rep].residual <= res_tol]
        if len(good) >= 2 and good[0] is best:
            a, b = good[0], good[1]
            sep = sup_distance(results[a.rep].traj, results[b.rep].traj)
            if sep >= eps_sep:
                cert = Certificate(True, b.value - a.value, sep,
                                   (clusters.index(a), clusters.index(b)))
    return clusters, cert


# ------------------------------------------------------------- multi-start

def constant_grid(n, count, radius):
    """``count`` constant start points on a centred grid inside the ball."""
    if count <= 0:
        return np.zeros((0, n))
    m = max(1, math.ceil(count ** (1.0 / n) - 1e-12))
    axis = radius * (2.0 * (np.arange(m) + 0.5) / m - 1.0)
    pts = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    norms = np.linalg.norm(pts, axis=1)
    keep = pts[norms <= radius * (1 + 1e-12)]
    keep = keep[np.lexsort((np.arange(len(keep)), np.linalg.norm(keep, axis=1)))]
    return keep[:count]


def start_points(p: SaddleProblem, N, starts, seed, radius, opts):
    rng = np.random.default_rng(seed)
    n_const = max(1, (starts + 1) // 2)
    out = [make_constant(x, N, p.T) for x in constant_grid(p.n, n_const, radius)]
    while len(out) < starts:
        out.append(random_k_member(rng, p.n, N, p.T, p.L, center_radius=radius,
                                   slope_fraction=rng.uniform(0.1, 0.9) * (1 - opts.margin)))
    return out[:max(starts, len(out))]


def multi_start(p: SaddleProblem, psi, N, starts=None, seed=0, opts: Options | None = None,
                extra_starts=(), radius=None, q=2.0):
    """Local minima from constants on a grid of the coercivity ball plus random K-members."""
    opts = opts or Options()
    starts = opts.n_starts if starts is None else starts
    if starts < 1 and not extra_starts:
        raise PreconditionError("starts must be >= 1")
    info = None
    if radius is None:
        radius, info = search_radius(p, psi, N, q)
    inits = list(extra_starts) + (start_points(p, N, starts, seed, radius, opts) if starts else [])

    def run(i):
        return local_min(p, psi, inits[i], opts, start=i)

    if opts.workers > 1:
        with ThreadPoolExecutor(opts.workers) as pool:
            results = list(pool.map(run, range(len(inits))))
    else:
        results = [run(i) for i in range(len(inits))]
    best = min(r.value for r in results)
    eps_val = opts.eps_val if opts.eps_val is not None else 1e-4 * (1.0 + abs(best))
    eps_sep = opts.eps_sep if opts.eps_sep is not None else 0.1 * p.L * p.T
    clusters, cert = cluster_minima(results, eps_val, eps_sep, opts.res_tol)
    return MinimaReport(results, clusters, cert, eps_val, eps_sep, radius, info)
