"""Dense SVD by one-sided Jacobi rotations.

The kernel orthogonalizes the columns of the input by cyclic plane rotations
until every pairwise inner product is negligible; singular values are the
final column norms, right vectors accumulate the rotations, and left vectors
are the normalized columns. Wide inputs are handled by transposition. The
sweep order is fixed, so the result is deterministic for a fixed input, and
working on the rectangular matrix directly avoids the squared conditioning
of a Gram-matrix eigensolve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TOL = 1e-14
_MAX_SWEEPS = 60


@dataclass
class SvdResult:
    """Factors M = U diag(sigma) V^T with orthonormal U, V columns and
    sigma sorted non-increasing."""
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def svd_dense(matrix) -> SvdResult:
    """Full SVD of a dense matrix.

    Parameters
    ----------
    matrix : (m, n) array-like with finite entries.

    Returns
    -------
    SvdResult with min(m, n) triplets. Ties among equal singular values keep
    the lower original column index first.
    """
    a = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if a.ndim != 2 or a.size == 0:
        raise ValueError("matrix must be two-dimensional and non-empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    if a.shape[0] < a.shape[1]:
        res = svd_dense(a.T)
        return SvdResult(u=res.v, sigma=res.sigma, v=res.u)

    u = np.array(a, order="F", copy=True)
    n = u.shape[1]
    v = np.eye(n, order="F")
    col_sq = (u * u).sum(axis=0)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                if col_sq[i] <= 0.0 or col_sq[j] <= 0.0:
                    continue
                gamma = np.dot(u[:, i], u[:, j])
                if abs(gamma) <= _TOL * math.sqrt(col_sq[i]) * math.sqrt(col_sq[j]):
                    continue
                rotated = True
                zeta = (col_sq[j] - col_sq[i]) / (2.0 * gamma)
                # sign(0) must be +1: equal-mass parallel columns need the
                # full 45-degree rotation, not a no-op
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                tmp = c * u[:, i] - s * u[:, j]
                u[:, j] = s * u[:, i] + c * u[:, j]
                u[:, i] = tmp
                tmp = c * v[:, i] - s * v[:, j]
                v[:, j] = s * v[:, i] + c * v[:, j]
                v[:, i] = tmp
                col_sq[i] -= t * gamma
                col_sq[j] += t * gamma
        # refresh the tracked norms once per sweep; drift is second-order
        col_sq = (u * u).sum(axis=0)
        if not rotated:
            break

    sigma = np.sqrt(col_sq)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    u = u[:, order]
    v = v[:, order]
    positive = sigma > 0.0
    u[:, positive] /= sigma[positive]
    if not positive.all():
        _complete_basis(u, np.flatnonzero(~positive))
    return SvdResult(u=np.ascontiguousarray(u), sigma=sigma,
                     v=np.ascontiguousarray(v))


def _complete_basis(u: np.ndarray, empty: np.ndarray) -> None:
    """Fill zero columns of ``u`` with unit vectors orthogonal to the rest.

    Candidates are canonical basis vectors, chosen deterministically by the
    smallest current row mass, with one re-orthogonalization pass.
    """
    for idx in empty:
        filled = np.flatnonzero((u * u).sum(axis=0) > 0.0)
        basis = u[:, filled]
        b = int(np.argmin((basis * basis).sum(axis=1)))
        vec = np.zeros(u.shape[0])
        vec[b] = 1.0
        for _ in range(2):
            vec -= basis @ (basis.T @ vec)
        u[:, idx] = vec / np.sqrt((vec * vec).sum())


def truncate_top_k(res: SvdResult, k: int, rel_threshold: float = 1e-12) -> SvdResult:
    """Keep the leading triplets: min(k, count of sigma_i > rel_threshold * sigma_1).

    Raises if ``k`` is out of range or nothing survives the threshold
    ("numerically rank zero").
    """
    k = int(k)
    if not 1 <= k <= res.sigma.size:
        raise ValueError(f"k={k} out of range 1..{res.sigma.size}")
    significant = int((res.sigma > rel_threshold * res.sigma[0]).sum())
    if significant == 0:
        raise ValueError("numerically rank zero")
    keep = min(k, significant)
    return SvdResult(u=res.u[:, :keep].copy(), sigma=res.sigma[:keep].copy(),
                     v=res.v[:, :keep].copy())
