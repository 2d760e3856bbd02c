"""Sampling-based checkers for the growth and level-set hypotheses.

Every verdict is numerical evidence with its margin, never a proof: the
hypotheses are asymptotic or infimal statements.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from .action import SaddleProblem, psi_at_nodes
from .errors import (CheckFailed, ConstantsError, GrowthNotObserved, LevelSetEmpty,
                     PreconditionError)

MU_SCHEDULE = (1e2, 1e4, 1e6)


def sphere_directions(n, count=16, seed=0):
    """Unit directions: +-e_j plus seeded random ones (exactly {+1, -1} for n = 1)."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    eye = np.eye(n)
    dirs = [eye, -eye]
    extra = count - 2 * n
    if extra > 0:
        d = np.random.default_rng(seed).normal(size=(extra, n))
        dirs.append(d / np.linalg.norm(d, axis=1)[:, None])
    return np.vstack(dirs)


def _grid_t(p, N):
    return np.arange(N) * (p.T / N)


def _F_on(p, t, P):
    """F(t_i, x_s) as an (N, S) array; reuses one row when F ignores t."""
    if not p.F.time_dependent:
        row = p.F.value(0.0, P)
        return np.broadcast_to(row, (len(t), len(P)))
    return p.F.value(t[:, None], P[None, :, :])


def _gradF_norm_on(p, t, P):
    if not p.F.time_dependent:
        _, g = p.F.value_grad(0.0, P)
        return np.broadcast_to(np.linalg.norm(g, axis=-1), (len(t), len(P)))
    _, g = p.F.value_grad(t[:, None], P[None, :, :])
    return np.linalg.norm(g, axis=-1)


# --------------------------------------------------------- growth constants

@dataclass
class GrowthConstants:
    q: float
    k: float
    delta: float
    nu: float
    M: np.ndarray
    beta: np.ndarray
    eta: float
    eta1: float
    psi_inf: float
    T: float

    def to_dict(self):
        return {"q": self.q, "k": self.k, "delta": self.delta, "nu": self.nu,
                "eta": self.eta, "eta1": self.eta1, "psi_inf": self.psi_inf,
                "M_max": float(self.M.max()), "beta_integral": float(self.beta.mean() * self.T)}


def _psi_parts(psi, N):
    if psi is None:
        return np.zeros(N), 0.0
    vals = np.atleast_1d(np.asarray(getattr(psi, "values", psi), dtype=float))
    return psi_at_nodes(vals, N), float(np.abs(vals).max())


def estimate_growth_constants(p: SaddleProblem, q, psi, N, radii=None, sphere_samples=16,
                              seed=0):
    """Sampled (k, delta, nu, M, beta, eta, eta1) for the coercivity bound.

    k = 1.1 * max |G(x)|/(|x|^q + 1); nu = 0.9 * min of F(t,x)/|x|^q outside
    B_delta; M(t) = 1.1 * max |grad_x F| over B_delta; beta, eta, eta1 on the
    node grid.  delta is picked among the sampled radii to minimise the
    resulting coercivity radius at level 0.
    """
    if not q > 0:
        raise PreconditionError("q must be positive")
    h = p.T / N
    t = _grid_t(p, N)
    psi_n, psi_inf = _psi_parts(psi, N)
    if radii is None:
        s = 1.0 + p.L * p.T
        radii = np.geomspace(0.02 * s, 100.0 * s, 60)
    radii = np.asarray(radii, dtype=float)
    dirs = sphere_directions(p.n, sphere_samples, seed)
    P = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, p.n)
    R_of = np.repeat(radii, len(dirs))

    g_ratio = (np.abs(p.G.value(P)) / (R_of ** q + 1.0)).reshape(len(radii), -1).max(axis=1)
    if g_ratio[-1] > g_ratio[-2] * (1 + 1e-9) and g_ratio[-1] >= g_ratio.max():
        raise GrowthNotObserved(f"|G|/(|x|^{q}+1) still increasing at radius {radii[-1]:.4g}")
    origin_ratio = abs(float(p.G.value(np.zeros((1, p.n)))[0]))
    k = 1.1 * max(float(g_ratio.max()), origin_ratio)

    Fv = _F_on(p, t, P)
    f_ratio = (Fv / R_of[None, :] ** q).reshape(len(t), len(radii), -1).min(axis=(0, 2))
    gnorm = _gradF_norm_on(p, t, P).reshape(len(t), len(radii), -1).max(axis=2)
    _, g0 = p.F.value_grad(t, np.zeros((len(t), p.n)))
    gnorm0 = np.linalg.norm(g0, axis=-1)
    inner_sup = np.maximum.accumulate(np.maximum(gnorm, gnorm0[:, None]), axis=1)
    F0 = np.abs(p.F.value(t, np.zeros((len(t), p.n))))
    phi0 = float(p.kin.value(np.zeros(p.n)))
    tail_min = np.minimum.accumulate(f_ratio[::-1])[::-1]

    best = None
    any_positive = False
    for j in range(len(radii) - 1):
        nu = 0.9 * float(tail_min[j])
        if nu > 0:
            any_positive = True
        if nu <= k * psi_inf:
            continue
        delta = float(radii[j])
        M = 1.1 * inner_sup[:, j]
        beta = nu * delta ** q + M * delta + F0
        abs_psi = h * float(np.abs(psi_n).sum())
        eta = -h * float(beta.sum()) + phi0 * p.T - abs(p.r) * abs_psi
        eta1 = eta - k * abs_psi
        score = (max(0.0, -eta1) / ((nu - k * psi_inf) * p.T)) ** (1.0 / q)
        if best is None or score < best[0]:
            best = (score, GrowthConstants(float(q), k, delta, nu, M, beta, eta, eta1,
                                           psi_inf, p.T))
    if best is None:
        if not any_positive:
            raise GrowthNotObserved("no sampled radius gives F >= nu |x|^q with nu > 0")
        raise ConstantsError(f"nu <= k*||psi||_inf = {k * psi_inf:.6g} for every sampled delta")
    return best[1]


# ------------------------------------------------------------------ (a1)

@dataclass
class A1Verdict:
    passed: bool
    q: float
    table: list
    f_increasing: bool
    f_growth: bool
    g_nonincreasing: bool

    def to_dict(self):
        return {"passed": self.passed, "q": self.q, "f_increasing": self.f_increasing,
                "f_growth_10x": self.f_growth, "g_nonincreasing": self.g_nonincreasing,
                "table": [{"radius": r, "F_ratio": f, "G_ratio": g} for r, f, g in self.table]}


def check_a1(p: SaddleProblem, q, radii=(10.0, 100.0, 1000.0), N=64, sphere_samples=16, seed=0):
    """Trend of min_t,|x|=R F/R^q (must increase, >10x overall) and max |G|/R^q (must not grow)."""
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2 or np.any(np.diff(radii) <= 0):
        raise PreconditionError("radii must be increasing with at least two values")
    t = _grid_t(p, N)
    dirs = sphere_directions(p.n, sphere_samples, seed)
    rows = []
    for R in radii:
        P = R * dirs
        fr = float(_F_on(p, t, P).min()) / R ** q
        gr = float(np.abs(p.G.value(P)).max()) / R ** q
        rows.append((float(R), fr, gr))
    f = np.array([r[1] for r in rows])
    g = np.array([r[2] for r in rows])
    f_inc = bool(np.all(f[1:] - f[:-1] > 1e-12 * (np.abs(f[:-1]) + 1.0)))
    f_growth = bool(f[-1] > 10.0 * f[0])
    g_noninc = bool(np.all(g[1:] <= g[:-1] * (1 + 1e-12) + 1e-300))
    return A1Verdict(f_inc and f_growth and g_noninc, float(q), rows, f_inc, f_growth, g_noninc)


# ------------------------------------------------------------ level sets

def _newton_project(p, x, r, iters=60):
    x = np.array(x, dtype=float)
    for _ in range(iters):
        gv, gg = p.G.value_grad(x[None, :])
        gap = float(gv[0]) - r
        if abs(gap) <= 1e-15 * (1.0 + abs(r)):
            break
        nrm = float(np.dot(gg[0], gg[0]))
        if nrm == 0.0:
            break
        x = x - gap * gg[0] / nrm
    return x


def _penalty_point(fun_grad, p, r, x0, mu_schedule=MU_SCHEDULE):
    """argmin f(x) + mu (G(x) - r)^2 over the mu schedule, warm started."""
    x = np.array(x0, dtype=float)
    for mu in mu_schedule:
        def obj(y, mu=mu):
            fv, fg = fun_grad(y)
            gv, gg = p.G.value_grad(y[None, :])
            gap = float(gv[0]) - r
            return fv + mu * gap * gap, fg + 2.0 * mu * gap * gg[0]
        try:
            x = minimize(obj, x, jac=True, method="BFGS", options={"gtol": 1e-10}).x
        except Exception:  # noqa: BLE001 - scipy may raise on overflow in far starts
            break
    return x


def _radius_for(p, N, radius):
    if radius is not None:
        return float(radius)
    from .minimize import search_radius
    return search_radius(p, None, N)[0]


def _grid_1d(R, count):
    half = np.linspace(0.0, R, count // 2 + 1)
    return np.concatenate([-half[:0:-1], half])  # exactly symmetric, contains 0


def level_points(p: SaddleProblem, r, N=64, radius=None, grid=4001, seed=0):
    """Constant points x with G(x) = r inside the search ball, sorted by mean potential."""
    R = _radius_for(p, N, radius)
    if p.n == 1:
        xs = _grid_1d(R, grid)
        gr = p.G.value(xs[:, None]) - r
        pts = list(xs[gr == 0.0])
        sign = np.sign(gr)
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            f = lambda z: float(p.G.value(np.array([[z]]))[0]) - r  # noqa: E731
            pts.append(brentq(f, xs[i], xs[i + 1], xtol=1e-300, rtol=8.9e-16, maxiter=500))
        P = np.array(sorted(set(pts)))[:, None] if pts else np.zeros((0, 1))
    else:
        rng = np.random.default_rng(seed)
        X = _sample_ball(p.n, R, rng)
        score = p.mean_potential(X, N) + 1e2 * (p.G.value(X) - r) ** 2
        starts = X[np.argsort(score)[:8]]
        Tn = p.T

        def fg(y):
            v, g = p.F.value_grad(_grid_t(p, N), np.broadcast_to(y, (N, p.n)))
            return float(v.sum() * Tn / N), g.sum(axis=0) * Tn / N

        cand = []
        for x0 in starts:
            x = _newton_project(p, _penalty_point(fg, p, r, x0), r)
            if abs(float(p.G.value(x[None, :])[0]) - r) <= 1e-10 * (1 + abs(r)):
                cand.append(x)
        P = np.array(cand) if cand else np.zeros((0, p.n))
    if len(P) == 0:
        raise LevelSetEmpty(f"no point with G(x) = {r!r} within radius {R:.4g}")
    order = np.argsort(p.mean_potential(P, N), kind="stable")
    return P[order]


def _sample_ball(n, R, rng, count=20000):
    if n == 2:
        ax = np.linspace(-R, R, 401)
        X = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
        return X[np.linalg.norm(X, axis=1) <= R]
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * (R * rng.uniform(size=count) ** (1.0 / n))[:, None]


# ------------------------------------------------------------------ (a2)

@dataclass
class A2Verdict:
    passed: bool
    r: float
    m_minus: float
    m_plus: float
    m_level: float
    margin: float
    attained: dict = field(default_factory=dict)
    argmins: dict = field(default_factory=dict)
    samples: int = 0

    def to_dict(self):
        return {"passed": self.passed, "r": self.r, "m_minus": self.m_minus,
                "m_plus": self.m_plus, "m_level": self.m_level, "margin": self.margin,
                "outer_infima_attained": dict(self.attained),
                "outer_infima_are_upper_bounds": True,
                "argmins": {k: list(map(float, v)) for k, v in self.argmins.items()},
                "samples": self.samples}


def _region_min_1d(p, N, xs, psi_vals, gr, side, r):
    """Minimise the mean potential over {G < r} (side=-1) or {G > r} (side=+1)."""
    mask = np.sign(gr) == side
    if not mask.any():
        return np.inf, None, False
    idx = np.nonzero(mask)[0]
    i = idx[np.argmin(psi_vals[idx])]
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    best_x, best_v = float(xs[i]), float(psi_vals[i])
    res = minimize_scalar(lambda z: float(p.mean_potential(np.array([[z]]), N)[0]),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, abs(xs[i]))})
    inside = np.sign(float(p.G.value(np.array([[res.x]]))[0]) - r) == side
    if inside and res.fun < best_v:
        best_x, best_v = float(res.x), float(res.fun)
    # not attained: minimiser pressed against a level crossing or the search boundary
    last = len(xs) - 1
    edge = i in (0, last) or not (mask[max(i - 1, 0)] and mask[min(i + 1, last)])
    return best_v, np.array([best_x]), not edge


def check_a2(p: SaddleProblem, r=None, N=64, radius=None, grid=4001, seed=0,
             mu_schedule=MU_SCHEDULE):
    """(m_minus, m_plus, m_level) and the verdict max(m_minus, m_plus) < m_level."""
    r = p.r if r is None else float(r)
    R = _radius_for(p, N, radius)
    h = p.T / N
    t = _grid_t(p, N)
    attained, argmins = {}, {}
    if p.n == 1:
        xs = _grid_1d(R, grid)
        gr = p.G.value(xs[:, None]) - r
        if not (gr.min() < 0.0 < gr.max()):
            raise PreconditionError(f"r = {r!r} is not inside the sampled range of G")
        psi_vals = p.mean_potential(xs[:, None], N)
        m_minus, xm, am = _region_min_1d(p, N, xs, psi_vals, gr, -1.0, r)
        m_plus, xp, ap = _region_min_1d(p, N, xs, psi_vals, gr, 1.0, r)
        samples = len(xs)
    else:
        rng = np.random.default_rng(seed)
        X = _sample_ball(p.n, R, rng)
        gr = p.G.value(X) - r
        if not (gr.min() < 0.0 < gr.max()):
            raise PreconditionError(f"r = {r!r} is not inside the sampled range of G")
        psi_vals = p.mean_potential(X, N)
        out = []
        for side in (-1.0, 1.0):
            idx = np.nonzero(np.sign(gr) == side)[0]
            j = idx[np.argmin(psi_vals[idx])]
            x0, v0 = X[j], float(psi_vals[j])

            def fg(y):
                v, g = p.F.value_grad(t, np.broadcast_to(y, (N, p.n)))
                return float(h * v.sum()), h * g.sum(axis=0)

            res = minimize(fg, x0, jac=True, method="BFGS")
            inside = np.sign(float(p.G.value(res.x[None, :])[0]) - r) == side
            if inside and res.fun < v0:
                x0, v0 = res.x, float(res.fun)
            near = np.abs(gr[j]) < 2.0 * R / 400 * (1 + np.linalg.norm(p.G.value_grad(X[j:j + 1])[1]))
            out.append((v0, x0, bool(inside and not near)))
        (m_minus, xm, am), (m_plus, xp, ap) = out
        samples = len(X)
    attained = {"minus": am, "plus": ap}
    argmins = {"minus": xm, "plus": xp}

    Z = level_points(p, r, N, R, grid, seed)
    if p.n == 1 or len(Z) == 0:
        per_node = _F_on(p, t, Z).min(axis=1)
    else:
        per_node = _level_min_per_node(p, r, t, Z, mu_schedule)
    m_level = float(h * per_node.sum())
    margin = m_level - max(m_minus, m_plus)
    passed = bool(margin > 1e-8 * (1.0 + abs(m_level)))
    return A2Verdict(passed, r, float(m_minus), float(m_plus), m_level, float(margin),
                     attained, argmins, samples)


def _level_min_per_node(p, r, t, Z, mu_schedule):
    """inf over G = r of gamma(t_i) F(t_i, .): penalty, then projection onto the level set."""
    names = ("t",) + p.F.names

    def solve(ti):
        def fg(y):
            b = dict(zip(names, [ti] + list(y)))
            v, g = p.F.expr.gradient(b, p.F.names)
            return float(v), np.asarray(g, dtype=float)
        best = np.inf
        for z in Z[:4]:
            x = _newton_project(p, _penalty_point(fg, p, r, z, mu_schedule), r)
            if abs(float(p.G.value(x[None, :])[0]) - r) > 1e-10 * (1 + abs(r)):
                continue
            best = min(best, fg(x)[0])
        return best

    if p.F.expr.depends_on("t"):
        raw = np.array([solve(ti) for ti in t])
    else:
        raw = np.full(len(t), solve(0.0))
    return raw * p.F.weight(t)


# ------------------------------------------------------- quasi-convexity

@dataclass
class Violation:
    x1: float
    x3: float
    x2: float
    values: tuple
    margin: float

    def to_dict(self):
        return {"x1": self.x1, "x3": self.x3, "x2": self.x2,
                "values": list(self.values), "margin": self.margin}


def quasiconvexity_violation(p: SaddleProblem, N=64, radius=None, grid=4001):
    """x1 < x3 < x2 with max(Psi(x1), Psi(x2)) < Psi(x3) for the mean potential, or None."""
    if p.n != 1:
        raise PreconditionError("quasi-convexity scan needs n = 1")
    R = _radius_for(p, N, radius)
    xs = _grid_1d(R, grid)
    v = p.mean_potential(xs[:, None], N)
    left = np.concatenate([[np.inf], np.minimum.accumulate(v)[:-1]])
    right = np.concatenate([np.minimum.accumulate(v[::-1])[::-1][1:], [np.inf]])
    margin = v - np.maximum(left, right)
    i = int(np.argmax(margin))
    if not margin[i] > 1e-12 * (1.0 + abs(v[i])):
        return None

    def f(z):
        return float(p.mean_potential(np.array([[z]]), N)[0])

    def polish(j, sign):
        lo, hi = xs[max(j - 1, 0)], xs[min(j + 1, len(xs) - 1)]
        res = minimize_scalar(lambda z: sign * f(z), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if sign * res.fun < sign * v[j]:
            return float(res.x), sign * float(res.fun)
        return float(xs[j]), float(v[j])

    j1 = int(np.argmin(v[:i]))
    j2 = i + 1 + int(np.argmin(v[i + 1:]))
    x1, f1 = polish(j1, 1.0)
    x3, f3 = polish(i, -1.0)
    x2, f2 = polish(j2, 1.0)
    return Violation(x1, x3, x2, (f1, f3, f2), f3 - max(f1, f2))


# --------------------------------------------------------------- presets

@dataclass
class PresetResult:
    name: str
    problem: SaddleProblem
    config: dict
    checks: dict
    r: float

    @property
    def passed(self):
        return all(c.get("passed", False) for c in self.checks.values())

    def failed(self):
        return [k for k, c in self.checks.items() if not c.get("passed", False)]


def _symmetry_checks(p, N, R, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-R, R, size=(200, p.n))
    t = _grid_t(p, N)
    Fp = _F_on(p, t, X)
    Fm = _F_on(p, t, -X)
    Gp = p.G.value(X)
    Gm = p.G.value(-X)
    scale_F = 1.0 + float(np.abs(Fp).max())
    scale_G = 1.0 + float(np.abs(Gp).max())
    even = float(np.abs(Fp - Fm).max())
    odd = float(np.abs(Gp + Gm).max())
    return ({"passed": even <= 1e-12 * scale_F, "max_defect": even},
            {"passed": odd <= 1e-12 * scale_G, "max_defect": odd})


def corollary_checks(p: SaddleProblem, kind, N=64, seed=0):
    """Corollary-specific hypothesis checks; returns (checks, r)."""
    R = _radius_for(p, N, None)
    checks = {}
    r = p.r
    if kind == "2-1":
        checks["F_even"], checks["G_odd"] = _symmetry_checks(p, N, R, seed)
        a2 = check_a2(p, 0.0, N, R)
        inf_mean = min(a2.m_minus, a2.m_plus,
                       float(p.mean_potential(level_points(p, 0.0, N, R), N).min()))
        checks["mean_inequality"] = {"passed": bool(inf_mean < a2.m_level), "inf_mean": inf_mean,
                                     "level_integral": a2.m_level}
        checks["m_minus_equals_m_plus"] = {"passed": abs(a2.m_minus - a2.m_plus) <= 1e-10,
                                           "difference": abs(a2.m_minus - a2.m_plus)}
        r = 0.0
    elif kind == "2-2":
        checks.update(_corollary_2_2(p, N, R))
        r = checks["level_choice"]["r"]
    elif kind == "2-3":
        if p.n != 1:
            raise PreconditionError("corollary 2-3 needs n = 1")
        xs = _grid_1d(R, 4001)
        dG = np.diff(p.G.value(xs[:, None]))
        mono = bool(np.all(dG > 0) or np.all(dG < 0))
        checks["G_strictly_monotone"] = {"passed": mono}
        vio = quasiconvexity_violation(p, N, R)
        checks["mean_not_quasiconvex"] = {"passed": vio is not None,
                                          "triple": vio.to_dict() if vio else None}
        if vio is not None:
            r = float(p.G.value(np.array([[vio.x3]]))[0])
    else:
        raise PreconditionError(f"unknown corollary {kind!r}")
    return checks, float(r)


def _corollary_2_2(p, N, R):
    out = {}
    t = _grid_t(p, N)
    if p.n == 1:
        X = _grid_1d(R, 4001)[:, None]
    else:
        X = _sample_ball(p.n, R, np.random.default_rng(0))
    Gv = p.G.value(X)
    i0 = int(np.argmin(Gv))
    x0 = X[i0]
    spacing = 2.0 * R / 4000 if p.n == 1 else 2.0 * R / 400
    near_min = np.linalg.norm(X[Gv <= Gv[i0] + 1e-12 * (1 + abs(Gv[i0]))] - x0, axis=1)
    out["G_unique_min"] = {"passed": bool(near_min.max() <= 1.5 * spacing), "x0": x0.tolist()}

    dirs = sphere_directions(p.n, 16)
    big = np.geomspace(R, 100 * R, 5)
    Gfar = np.array([p.G.value(Rb * dirs).min() for Rb in big])
    out["G_coercive"] = {"passed": bool(np.all(np.diff(Gfar) > 0) and Gfar[-1] > Gv.max())}

    # F is t-independent here up to the weight gamma(t) > 0
    Fx = p.F.expr.value(p.F._bind(0.0, X))
    F0 = float(p.F.expr.value(p.F._bind(0.0, x0[None, :]))[0]) if np.ndim(Fx) else float(Fx)
    dist = np.linalg.norm(X - x0, axis=1)
    lower = dist[(Fx <= F0) & (dist > 0)]
    rho = float(lower.min()) if lower.size else float(dist.max())
    out["F_strict_local_min"] = {"passed": bool(rho > spacing), "radius": rho}
    out["F_not_global_min"] = {"passed": bool(Fx.min() < F0), "min_value": float(Fx.min()),
                               "value_at_x0": F0}
    gam = p.F.weight(t)
    out["gamma_positive"] = {"passed": bool(gam.min() > 0), "gamma_min": float(gam.min())}

    # level r > G(x0) whose sublevel set sits inside B(x0, rho/2)
    rad = 0.5 * rho
    ring = x0 + rad * sphere_directions(p.n, 64)
    r = float(p.G.value(ring).min())
    for _ in range(60):
        inside = np.linalg.norm(X[Gv <= r] - x0, axis=1)
        if inside.size and inside.max() < rad:
            break
        r = 0.5 * (r + float(Gv[i0]))
    out["level_choice"] = {"passed": bool(r > Gv[i0]), "r": r, "ball_radius": rad}
    return out


def preset_scenario(name, strict=True, N=None):
    """Problem for a built-in scenario plus its corollary-specific checks.

    With ``strict`` a failing check raises CheckFailed naming the hypothesis.
    """
    from .config import problem_from_config, resolve_config
    from .scenarios import preset_config

    cfg = resolve_config(preset_config(name))
    N = N or cfg["problem"]["N"]
    p = problem_from_config(cfg)
    checks = {}
    r = p.r
    kind = cfg.get("corollary")
    if kind:
        checks, r = corollary_checks(p, kind, N)
        p = p.with_r(r)
        cfg["problem"]["r"] = r
    a2 = check_a2(p, r, N)
    checks["a2"] = a2.to_dict()
    result = PresetResult(name, p, cfg, checks, r)
    if strict and not result.passed:
        bad = result.failed()[0]
        raise CheckFailed(bad, str(checks[bad]))
    return result
