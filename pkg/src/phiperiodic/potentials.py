"""Kinetic potentials on the velocity ball and expression-backed potentials.

A kinetic potential is radial, Phi(v) = rho(|v|), defined on the closed ball
of radius L; its gradient phi(v) = rho'(|v|) v/|v| lives on the open ball.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .errors import ConvergenceError, DomainError, PreconditionError
from .expr import Expression

KINDS = ("relativistic", "user-polynomial")


@dataclass(frozen=True)
class KineticPotential:
    """Radial kinetic potential on the ball of radius ``L``.

    ``relativistic``: Phi(v) = offset - scale * sqrt(L^2 - |v|^2).
    ``user-polynomial``: Phi(v) = sum_k coeffs[k] * |v|^(2k) + offset.

    ``scale`` and ``offset`` exist so that non-members of the admissible
    class (concave or positive impostors) can be built for the checker.
    """

    L: float
    kind: str = "relativistic"
    coeffs: tuple = ()
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise PreconditionError("L must be positive")
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown kinetic kind {self.kind!r}")
        if self.kind == "user-polynomial" and not self.coeffs:
            raise PreconditionError("user-polynomial needs coeffs")

    @classmethod
    def relativistic(cls, L=1.0):
        return cls(float(L))

    @property
    def curvature0(self):
        """phi'(0), the isotropic Hessian of Phi at the origin."""
        if self.kind == "relativistic":
            return self.scale / self.L
        return 2.0 * self.coeffs[1] if len(self.coeffs) > 1 else 0.0

    # radial profile: rho(s) and rho'(s)/s
    def _profile(self, s):
        if self.kind == "relativistic":
            return self.offset - self.scale * np.sqrt(np.maximum(self.L ** 2 - s * s, 0.0))
        return self.offset + sum(c * s ** (2 * k) for k, c in enumerate(self.coeffs))

    def _dprofile_over_s(self, s):
        if self.kind == "relativistic":
            return self.scale / np.sqrt(self.L ** 2 - s * s)
        out = np.zeros_like(np.asarray(s, dtype=float))
        for k, c in enumerate(self.coeffs[1:], start=1):
            out = out + 2 * k * c * s ** (2 * k - 2)
        return out

    def _check(self, norms, closed):
        top = norms.max() if norms.size else 0.0
        if closed and top > self.L:
            raise DomainError(f"|v| = {top!r} exceeds L = {self.L!r}")
        if not closed and top >= self.L:
            raise DomainError(f"|v| = {top!r} not inside the open ball of radius {self.L!r}")

    def value(self, V):
        """Phi on rows of ``V`` (shape (..., n)); closed ball."""
        V = np.asarray(V, dtype=float)
        s = np.sqrt(np.sum(V * V, axis=-1))
        self._check(np.atleast_1d(s), closed=True)
        return self._profile(s)

    def grad(self, V):
        """phi on rows of ``V``; open ball."""
        V = np.asarray(V, dtype=float)
        s = np.sqrt(np.sum(V * V, axis=-1))
        self._check(np.atleast_1d(s), closed=False)
        return V * np.asarray(self._dprofile_over_s(s))[..., None]

    def value_grad(self, V):
        """Both Phi and phi for an (N, n) slope array; uses the node kernels."""
        V = np.ascontiguousarray(V, dtype=float)
        if self.kind == "relativistic":
            k = _kernels.kernels
            self._check(k.row_norms(V), closed=False)
            return k.relativistic(V, float(self.L), float(self.scale), float(self.offset))
        return self.value(V), self.grad(V)


def kinetic_eval(kin: KineticPotential, v, want_grad=True):
    """(Phi(v), phi(v)) for a single vector; ``want_grad=False`` allows |v| = L."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    Phi = float(kin.value(v))
    if not want_grad:
        return Phi, None
    return Phi, kin.grad(v)


def phi_inverse(kin: KineticPotential, w, rtol=1e-13):
    """The v in the open ball with phi(v) = w."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    a = float(np.linalg.norm(w))
    if a == 0.0:
        return np.zeros_like(w)
    if kin.kind == "relativistic":
        sgn = 1.0 if kin.scale > 0 else -1.0
        return sgn * kin.L * w / np.sqrt(kin.scale ** 2 + a * a)
    # |phi(v)| = s * rho'(s)/s along the ray; solve for s in [0, L)
    def gap(s):
        return s * float(kin._dprofile_over_s(s)) - a

    hi = kin.L * (1.0 - 1e-15)
    if gap(0.0) * gap(hi) > 0:
        raise ConvergenceError(f"|w| = {a!r} is outside the range of phi")
    try:
        s = brentq(gap, 0.0, hi, xtol=1e-300, rtol=max(rtol, 8.9e-16), maxiter=500)
    except RuntimeError as exc:  # pragma: no cover
        raise ConvergenceError(str(exc)) from exc
    return s * w / a


@dataclass
class ClassAReport:
    checks: dict = field(default_factory=dict)
    max_fd_discrepancy: float = 0.0
    samples: int = 0

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {"passed": self.passed, "checks": dict(self.checks),
                "max_fd_discrepancy": self.max_fd_discrepancy, "samples": self.samples}


def _ball_samples(rng, count, n, radius):
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    r = radius * rng.uniform(size=count) ** (1.0 / n)
    return d * r[:, None]


def check_class_A(kin: KineticPotential, samples=200, seed=0, n=2):
    """Sampled membership checks for the admissible kinetic class."""
    if samples < 2:
        raise PreconditionError("samples must be >= 2")
    rng = np.random.default_rng(seed)
    L = kin.L
    inner = _ball_samples(rng, samples, n, 0.99 * L)
    ring = _ball_samples(rng, samples, n, 1.0)
    ring = L * ring / np.linalg.norm(ring, axis=1)[:, None]
    ring *= (1.0 - 4e-16)       # keep the rounded norms on the closed ball
    closed = np.vstack([inner, ring])
    zero = np.zeros(n)

    Phi_closed = kin.value(closed)
    Phi0 = float(kin.value(zero))
    checks = {}
    checks["zero_is_minimum"] = bool(Phi0 <= Phi_closed.min())
    checks["phi_zero"] = bool(np.all(kin.grad(zero) == 0.0))
    checks["nonpositive"] = bool(Phi_closed.max() <= 0.0 and Phi0 <= 0.0)

    a = inner[: samples // 2 * 2 : 2]
    b = inner[1: samples // 2 * 2 : 2]
    pair = np.sum((kin.grad(a) - kin.grad(b)) * (a - b), axis=1)
    checks["strictly_monotone"] = bool(np.all(pair > 0.0))

    # surjectivity proxy: |phi| blows up approaching the sphere
    dirs = ring[: min(8, len(ring))] / L
    fracs = 1.0 - np.logspace(-1, -8, 8)
    mags = np.array([[np.linalg.norm(kin.grad(f * L * d)) for f in fracs] for d in dirs])
    checks["boundary_blowup"] = bool(np.all(np.diff(mags, axis=1) > 0)
                                     and np.all(mags[:, -1] >= 100.0 * mags[:, 0]))

    step = 1e-5 * L
    pts = _ball_samples(rng, min(samples, 50), n, 0.9 * L)
    worst = 0.0
    for v in pts:
        g = kin.grad(v)
        fd = np.array([(kin.value(v + step * e) - kin.value(v - step * e)) / (2 * step)
                       for e in np.eye(n)])
        worst = max(worst, float(np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-300)))
    checks["gradient_consistent"] = bool(worst <= 1e-6)
    return ClassAReport(checks, worst, samples)


class TimePotential:
    """F(t, x) from text over variables t, x1..xn, optionally weighted by gamma(t)."""

    def __init__(self, text: str, n: int, gamma: str | None = None):
        self.n = n
        self.text = text
        self.names = tuple(f"x{j + 1}" for j in range(n))
        self.expr = Expression(text, ("t",) + self.names)
        self.gamma_text = gamma
        self.gamma = Expression(gamma, ("t",)) if gamma else None

    def _bind(self, t, X):
        X = np.asarray(X, dtype=float)
        b = {name: X[..., j] for j, name in enumerate(self.names)}
        b["t"] = np.asarray(t, dtype=float)
        return b

    @property
    def time_dependent(self):
        return self.expr.depends_on("t") or self.gamma is not None

    def weight(self, t):
        if self.gamma is None:
            return np.ones_like(np.asarray(t, dtype=float))
        return np.broadcast_to(self.gamma.value({"t": t}), np.shape(t)).astype(float)

    def value(self, t, X):
        X = np.asarray(X, dtype=float)
        shape = np.broadcast_shapes(np.shape(t), X.shape[:-1])
        v = np.broadcast_to(self.expr.value(self._bind(t, X)), shape)
        return v * self.weight(np.broadcast_to(t, shape)) if self.gamma else np.array(v, dtype=float)

    def value_grad(self, t, X):
        """F and grad_x F; grad has shape X.shape."""
        X = np.asarray(X, dtype=float)
        shape = np.broadcast_shapes(np.shape(t), X.shape[:-1])
        v, g = self.expr.gradient(self._bind(t, X), self.names)
        v = np.broadcast_to(v, shape)
        g = np.broadcast_to(g, shape + (self.n,))
        if self.gamma is not None:
            w = self.weight(np.broadcast_to(t, shape))
            return v * w, g * w[..., None]
        return np.array(v), np.array(g)


class PerturbShape:
    """G(x) from text over x1..xn."""

    def __init__(self, text: str, n: int):
        self.n = n
        self.text = text
        self.names = tuple(f"x{j + 1}" for j in range(n))
        self.expr = Expression(text, self.names)

    def _bind(self, X):
        X = np.asarray(X, dtype=float)
        return {name: X[..., j] for j, name in enumerate(self.names)}

    def value(self, X):
        X = np.asarray(X, dtype=float)
        return np.array(np.broadcast_to(self.expr.value(self._bind(X)), X.shape[:-1]), dtype=float)

    def value_grad(self, X):
        X = np.asarray(X, dtype=float)
        v, g = self.expr.gradient(self._bind(X), self.names)
        return (np.array(np.broadcast_to(v, X.shape[:-1])),
                np.array(np.broadcast_to(g, X.shape[:-1] + (self.n,))))


def as_points(X: Sequence | np.ndarray, n: int):
    """Reshape scalars / vectors to an (m, n) point array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        return X.reshape(1, 1)
    if X.ndim == 1:
        return X.reshape(-1, n) if n > 1 else X[:, None]
    return X
