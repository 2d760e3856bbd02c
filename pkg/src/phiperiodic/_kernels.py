"""Inner-loop kernels over trajectory nodes.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy
version with identical semantics.  The numba path is used when numba
imports and the environment variable ``PHIPERIODIC_NUMBA`` is not set to a
false value (``0``, ``false``, ``no``, ``off``).  Both paths are importable
explicitly as ``numpy_kernels`` / ``numba_kernels`` for tests and benchmarks.

Array conventions: ``U`` and ``V`` are ``(N, n)`` float64 arrays of node
positions / slopes, node ``N`` is node ``0`` (periodic indexing).
"""
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _env_flag(name, default=True):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() not in ("0", "false", "no", "off", "")


# ---------------------------------------------------------------- numpy path

def slopes_np(U, h):
    return (np.roll(U, -1, axis=0) - U) / h


def row_norms_np(V):
    return np.sqrt(np.sum(V * V, axis=1))


def relativistic_np(V, L, scale, offset):
    """Phi(v) = offset - scale*sqrt(L^2-|v|^2) and its gradient."""
    s2 = np.sum(V * V, axis=1)
    root = np.sqrt(np.maximum(L * L - s2, 0.0))
    with np.errstate(divide="ignore"):
        phi = scale * V / root[:, None]
    return offset - scale * root, phi


def stencil_np(phi, force, h):
    return -(phi - np.roll(phi, 1, axis=0)) + h * force


def el_residual_np(phi, force, h):
    R = (phi - np.roll(phi, 1, axis=0)) / h - force
    return np.sqrt(np.sum(R * R, axis=1))


def sup_distance_np(A, B):
    D = A - B
    return float(np.sqrt(np.sum(D * D, axis=1)).max())


def cell_sums_np(w, M):
    N = w.shape[0]
    idx = (np.arange(N) * M) // N
    return np.bincount(idx, weights=w, minlength=M)


# ---------------------------------------------------------------- numba path

if numba is not None:
    _jit = numba.njit(cache=True, fastmath=False)

    @_jit
    def slopes_nb(U, h):
        N, n = U.shape
        V = np.empty_like(U)
        for i in range(N):
            j = i + 1 if i + 1 < N else 0
            for d in range(n):
                V[i, d] = (U[j, d] - U[i, d]) / h
        return V

    @_jit
    def row_norms_nb(V):
        N, n = V.shape
        out = np.empty(N)
        for i in range(N):
            s = 0.0
            for d in range(n):
                s += V[i, d] * V[i, d]
            out[i] = np.sqrt(s)
        return out

    @_jit
    def relativistic_nb(V, L, scale, offset):
        N, n = V.shape
        Phi = np.empty(N)
        phi = np.empty_like(V)
        for i in range(N):
            s2 = 0.0
            for d in range(n):
                s2 += V[i, d] * V[i, d]
            root = np.sqrt(max(L * L - s2, 0.0))
            Phi[i] = offset - scale * root
            for d in range(n):
                phi[i, d] = scale * V[i, d] / root if root > 0.0 else np.inf
        return Phi, phi

    @_jit
    def stencil_nb(phi, force, h):
        N, n = phi.shape
        out = np.empty_like(phi)
        for i in range(N):
            k = i - 1 if i > 0 else N - 1
            for d in range(n):
                out[i, d] = -(phi[i, d] - phi[k, d]) + h * force[i, d]
        return out

    @_jit
    def el_residual_nb(phi, force, h):
        N, n = phi.shape
        out = np.empty(N)
        for i in range(N):
            k = i - 1 if i > 0 else N - 1
            s = 0.0
            for d in range(n):
                r = (phi[i, d] - phi[k, d]) / h - force[i, d]
                s += r * r
            out[i] = np.sqrt(s)
        return out

    @_jit
    def sup_distance_nb(A, B):
        N, n = A.shape
        best = 0.0
        for i in range(N):
            s = 0.0
            for d in range(n):
                diff = A[i, d] - B[i, d]
                s += diff * diff
            if s > best:
                best = s
        return np.sqrt(best)

    @_jit
    def cell_sums_nb(w, M):
        N = w.shape[0]
        out = np.zeros(M)
        for i in range(N):
            out[(i * M) // N] += w[i]
        return out


numpy_kernels = SimpleNamespace(
    backend="numpy",
    slopes=slopes_np,
    row_norms=row_norms_np,
    relativistic=relativistic_np,
    stencil=stencil_np,
    el_residual=el_residual_np,
    sup_distance=sup_distance_np,
    cell_sums=cell_sums_np,
)

if numba is not None:
    numba_kernels = SimpleNamespace(
        backend="numba",
        slopes=slopes_nb,
        row_norms=row_norms_nb,
        relativistic=relativistic_nb,
        stencil=stencil_nb,
        el_residual=el_residual_nb,
        sup_distance=lambda A, B: float(sup_distance_nb(A, B)),
        cell_sums=cell_sums_nb,
    )
else:  # pragma: no cover
    numba_kernels = None

USE_NUMBA = numba is not None and _env_flag("PHIPERIODIC_NUMBA")
kernels = numba_kernels if USE_NUMBA else numpy_kernels
BACKEND = kernels.backend
