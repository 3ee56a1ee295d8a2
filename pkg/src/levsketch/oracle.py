"""Ground truth: exact leverage scores, conditioning, and dataset generators.

Exact statistical leverage scores come from a thin SVD of the full matrix:
the score of row i is the squared i-th row norm of the left singular factor
restricted to the numerical rank. The generators reproduce two synthetic
families used throughout the experiments: a blockwise row-scaled Gaussian
matrix with a chosen number of zeroed columns, and a factor-form low-rank
matrix with a prescribed condition number.
"""
from __future__ import annotations

import numpy as np

from .rng import standard_normal, stream
from .svd import svd_dense

RANK_TOL = 1e-10


def exact_leverage(matrix, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Exact leverage scores l_i = ||U[i, :r]||^2 at numerical rank r.

    ``rank_tol`` is relative to the largest singular value.
    """
    res = svd_dense(matrix)
    if res.sigma[0] <= 0.0:
        raise ValueError("zero matrix")
    r = int((res.sigma > rank_tol * res.sigma[0]).sum())
    u = res.u[:, :r]
    return (u * u).sum(axis=1)


def numerical_rank(matrix, rank_tol: float = RANK_TOL) -> int:
    res = svd_dense(matrix)
    if res.sigma[0] <= 0.0:
        return 0
    return int((res.sigma > rank_tol * res.sigma[0]).sum())


def spectral_norm_and_kappa(matrix, rank_tol: float = RANK_TOL) -> tuple[float, float]:
    """(||A||, kappa) with kappa = ||A|| over the smallest nonzero singular
    value, nonzero meaning above ``rank_tol`` relative to the largest."""
    res = svd_dense(matrix)
    top = float(res.sigma[0])
    if top <= 0.0:
        raise ValueError("zero matrix")
    r = int((res.sigma > rank_tol * top).sum())
    return top, top / float(res.sigma[r - 1])


def householder_qr(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR with the sign convention diag(R) >= 0.

    Returns (Q, R) with Q of shape (m, r) for an (m, r) input, m >= r.
    Deterministic: plain Householder reflections, no pivoting.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    m, r = a.shape
    if m < r:
        raise ValueError("householder_qr needs m >= r")
    reflectors = []
    for j in range(r):
        x = a[j:, j]
        norm = np.sqrt((x * x).sum())
        if norm == 0.0:
            reflectors.append(None)
            continue
        v = x.copy()
        v[0] += norm if x[0] >= 0.0 else -norm
        v /= np.sqrt((v * v).sum())
        a[j:, j:] -= 2.0 * np.outer(v, v @ a[j:, j:])
        reflectors.append(v)
    q = np.zeros((m, r))
    q[:r, :r] = np.eye(r)
    for j in range(r - 1, -1, -1):
        v = reflectors[j]
        if v is not None:
            q[j:] -= 2.0 * np.outer(v, v @ q[j:])
    upper = np.triu(a[:r])
    flip = np.diag(upper) < 0.0
    upper[flip] *= -1.0
    q[:, flip] *= -1.0
    return q, upper


def gen_example1(m: int, n: int, n_zero: int, seed: int) -> np.ndarray:
    """Blockwise row-scaled Gaussian matrix with zeroed columns.

    Rows are standard normal, scaled by 1, 1e2, 1e3, 1e4 in four equal bands;
    ``n_zero`` distinct columns chosen uniformly are then set to zero, so the
    rank is n - n_zero almost surely. ``m`` must be divisible by 4.
    """
    if m % 4 != 0:
        raise ValueError("m must be divisible by 4")
    if not 0 <= n_zero < n:
        raise ValueError("need 0 <= n_zero < n")
    rng = stream(seed)
    a = standard_normal(rng, (m, n))
    band = m // 4
    for b, scale in enumerate((1.0, 1e2, 1e3, 1e4)):
        a[b * band:(b + 1) * band] *= scale
    a[:, _draw_distinct(rng, n, n_zero)] = 0.0
    return a


def _draw_distinct(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """``count`` distinct indices from range(n), by partial Fisher-Yates."""
    pool = np.arange(n)
    for t in range(count):
        swap = int(rng.integers(t, n))
        pool[t], pool[swap] = pool[swap], pool[t]
    return pool[:count]


def gen_example2(m: int, n: int, r: int, kappa: float, a: int, b: int,
                 seed: int) -> np.ndarray:
    """Low-rank factor-form matrix with prescribed condition number.

    Orthonormal factors come from Householder QR of Gaussian matrices. The
    largest singular value is a uniform integer in [a, b], the smallest is
    sigma_max / kappa, and the r - 2 interior values are uniform between
    them. kappa = 1 collapses all singular values to sigma_max.
    """
    if not 1 <= r <= min(m, n):
        raise ValueError("need 1 <= r <= min(m, n)")
    if not 1 <= a <= b:
        raise ValueError("need 1 <= a <= b")
    if kappa < 1.0:
        raise ValueError("kappa must be >= 1")
    if r < 2 and kappa > 1.0:
        raise ValueError("r < 2 with kappa > 1: no distinct min and max")
    rng = stream(seed)
    u, _ = householder_qr(standard_normal(rng, (m, r)))
    v, _ = householder_qr(standard_normal(rng, (n, r)))
    s_max = float(rng.integers(a, b + 1))
    s_min = s_max / kappa
    if r >= 2:
        interior = s_min + (s_max - s_min) * rng.random(r - 2)
        sigma = np.concatenate(([s_max], interior, [s_min]))
    else:
        sigma = np.array([s_max])
    return (u * sigma) @ v.T
