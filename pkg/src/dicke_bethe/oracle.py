"""Independent check: dense diagonalization of the one-excitation block.

The block is built explicitly and handed to a general dense symmetric
eigensolver written here (cyclic Jacobi, or Householder tridiagonalization
followed by implicit-shift QL). Nothing about the arrow structure or the
Bethe equation is used, so agreement with :mod:`dicke_bethe.bethe` is a
genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import SectorState
from .errors import ConvergenceFailure
from .model import ModelParams, validate

MAX_SWEEPS = 100
MAX_QL_ITER = 60


def build(params: ModelParams) -> np.ndarray:
    validate(params)
    n = params.dim
    h = np.zeros((n, n))
    h[0, 0] = params.omega
    h[0, 1:] = params.g
    h[1:, 0] = params.g
    h[np.arange(1, n), np.arange(1, n)] = params.epsilons
    return h


@dataclass(frozen=True, eq=False)
class EigenData:
    values: np.ndarray   # ascending
    vectors: np.ndarray  # columns are eigenvectors
    sweeps: int = 0

    @property
    def darkness(self) -> np.ndarray:
        return self.vectors[0, :] ** 2


def _jacobi(a: np.ndarray, tol: float):
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v, 0
    target = tol * scale
    for sweep in range(1, MAX_SWEEPS + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            return np.diag(a).copy(), v, sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                small = 100.0 * abs(apq)
                if sweep > 4 and abs(a[p, p]) + small == abs(a[p, p]) and abs(a[q, q]) + small == abs(a[q, q]):
                    # below rounding of both diagonal entries
                    a[p, q] = a[q, p] = 0.0
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) + small == abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise ConvergenceFailure(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")


def _householder(a: np.ndarray):
    """Reduce symmetric ``a`` to tridiagonal ``(diag, off)`` with ``a = Q T Q^T``."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        u = x.copy()
        u[0] += math.copysign(alpha, x[0])
        u /= np.linalg.norm(u)
        sub = a[k + 1:, k:]
        sub -= 2.0 * np.outer(u, u @ sub)
        sub = a[k:, k + 1:]
        sub -= 2.0 * np.outer(sub @ u, u)
        qs = q[:, k + 1:]
        qs -= 2.0 * np.outer(qs @ u, u)
    return np.diag(a).copy(), np.diag(a, 1).copy(), q


def _tridiagonal_ql(d: np.ndarray, e: np.ndarray, z: np.ndarray):
    """Implicit-shift QL on a symmetric tridiagonal matrix, accumulating into ``z``."""
    n = d.size
    e = np.append(e, 0.0)
    for l in range(n):
        for it in range(MAX_QL_ITER + 1):
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == MAX_QL_ITER:
                raise ConvergenceFailure("tridiagonal QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
                continue
    return d, z


def diagonalize(block: np.ndarray, tol: float = 1e-14, method: str = "jacobi") -> EigenData:
    block = np.asarray(block, dtype=float)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        raise ValueError("block must be square")
    if not np.allclose(block, block.T, rtol=0, atol=0):
        raise ValueError("block must be symmetric")
    if method == "jacobi":
        values, vectors, sweeps = _jacobi(block, tol)
    elif method == "tridiagonal":
        diag, off, q = _householder(block)
        values, vectors = _tridiagonal_ql(diag, off, q)
        sweeps = 0
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(values, kind="stable")
    return EigenData(values=values[order], vectors=vectors[:, order], sweeps=sweeps)


def propagate(eig: EigenData, state: SectorState, t: float) -> SectorState:
    q = eig.vectors
    return SectorState.from_vector(q @ (np.exp(-1j * eig.values * t) * (q.T @ state.vector)))


def propagate_many(eig: EigenData, state: SectorState, times) -> np.ndarray:
    """State vectors at each time, shape ``(len(times), L+1)``."""
    q = eig.vectors
    c = q.T @ state.vector
    phases = np.exp(-1j * np.outer(np.atleast_1d(times), eig.values))
    return (phases * c) @ q.T


def solve(params: ModelParams, method: str = "jacobi") -> EigenData:
    return diagonalize(build(params), method=method)
