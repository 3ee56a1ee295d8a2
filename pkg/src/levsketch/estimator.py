"""Inner-product estimation and per-row approximate leverage scores.

The score of row i is ||t Sigma^-1||^2 with t_j close to S_{i,:} V_{:,j}.
Exact-dot mode sums the p products directly, which is cheap whenever p is
desk-scale. Sampled-dot mode draws indices from the row's squared-value
distribution and runs a median-of-means estimate per coordinate; that is
the access pattern whose cost does not grow with p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import stream
from .sample_store import MatrixSampleStore, SampleTree
from .sketch import Params, SketchDescription, s_row

MODES = ("exact-dot", "sampled-dot")


def mom_group_shape(xi: float, eta: float) -> tuple[int, int]:
    """(group count, group size) for additive error xi||x||||y|| with
    failure probability eta: Chebyshev gives 6/xi^2 per group, Chernoff
    9 ln(1/eta) groups."""
    if xi <= 0.0:
        raise ValueError("xi must be positive")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    return max(math.ceil(9.0 * math.log(1.0 / eta)), 1), math.ceil(6.0 / (xi * xi))


def estimate_inner(x_tree: SampleTree, y, xi: float, eta: float,
                   rng: np.random.Generator) -> float:
    """Estimate <x, y> from samples of i ~ x_i^2 / ||x||^2.

    The single-draw value z = y_i ||x||^2 / x_i is unbiased with second
    moment ||x||^2 ||y||^2; group means tame the variance and the median
    across groups boosts the success probability, so the result lands
    within xi ||x|| ||y|| of the truth with probability at least 1 - eta.
    Draws land on nonzero coordinates by construction.
    """
    groups, size = mom_group_shape(xi, eta)
    y = np.asarray(y, dtype=np.float64)
    vals = x_tree.values
    idx = x_tree.sample_indices(rng, groups * size)
    picked = vals[idx]
    assert picked.all(), "sampled a zero coordinate"
    z = y[idx] * (x_tree.sq_norm / picked)
    return float(np.median(z.reshape(groups, size).mean(axis=1)))


def qisls_score(store: MatrixSampleStore, sketch: SketchDescription, i: int,
                mode: str = "exact-dot", params: Params | None = None,
                rng: np.random.Generator | None = None) -> float:
    """Approximate leverage score of row i.

    Exact-dot needs only the sketch; sampled-dot additionally needs params
    (for xi and delta) and an rng. The k coordinate estimates each get an
    independent run of the estimator at per-coordinate success probability
    (1 - delta)^(1/k), and the precision target is absolute, xi ||S||_F,
    so the relative xi handed to the estimator is scaled by the row norm.
    """
    if sketch.v is None or sketch.sigma is None:
        raise ValueError("sketch carries no singular triplets")
    if not 0 <= i < store.m:
        raise ValueError("row index out of range")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    srow = s_row(store, sketch, i)
    if mode == "exact-dot":
        t = srow @ sketch.v
    else:
        if params is None or rng is None:
            raise ValueError("sampled-dot mode needs params and rng")
        sq = float(srow @ srow)
        if sq == 0.0:
            return 0.0
        tree = SampleTree(srow)
        eta = 1.0 - (1.0 - params.delta) ** (1.0 / params.k)
        xi_rel = params.xi_effective * sketch.frob_norm / math.sqrt(sq)
        t = np.array([estimate_inner(tree, sketch.v[:, j], xi_rel, eta, rng)
                      for j in range(sketch.k)])
    u_row = t / sketch.sigma
    return float(u_row @ u_row)


@dataclass
class LeverageReport:
    """Scores for a set of rows plus the coherence they imply."""
    rows: np.ndarray
    approx: np.ndarray
    exact: np.ndarray | None
    abs_err: np.ndarray | None
    coherence_row: int
    coherence: float
    mode: str
    seed: int
    params: Params


def qisls_all(store: MatrixSampleStore, sketch: SketchDescription,
              params: Params, rows=None, mode: str = "exact-dot",
              rng: np.random.Generator | None = None, seed: int = 0,
              exact=None) -> LeverageReport:
    """Score every requested row (all of them by default).

    ``exact``, when given, must cover all m rows; the report keeps the
    slice for the scored rows together with absolute errors. Coherence is
    the max approximate score; argmax ties resolve to the lowest index.
    """
    if rows is None:
        rows = np.arange(store.m, dtype=np.int64)
    else:
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            raise ValueError("empty row set")
        if rows.min() < 0 or rows.max() >= store.m:
            raise ValueError("row index out of range")
    if rng is None:
        rng = stream(seed)
    approx = np.array([qisls_score(store, sketch, int(i), mode=mode,
                                   params=params, rng=rng) for i in rows])
    exact_vals = abs_err = None
    if exact is not None:
        exact = np.asarray(exact, dtype=np.float64)
        if exact.shape != (store.m,):
            raise ValueError("exact scores must cover every row of the store")
        exact_vals = exact[rows]
        abs_err = np.abs(approx - exact_vals)
    top = int(np.argmax(approx))
    return LeverageReport(rows=rows, approx=approx, exact=exact_vals,
                          abs_err=abs_err, coherence_row=int(rows[top]),
                          coherence=float(approx[top]), mode=mode,
                          seed=int(seed), params=params)


def orthogonality_defect(store: MatrixSampleStore,
                         sketch: SketchDescription) -> float:
    """||U^T U - I||_F for the implied U = S V Sigma^-1, computed exactly
    through U^T U = Sigma^-1 V^T (S^T S) V Sigma^-1."""
    if sketch.v is None or sketch.sigma is None:
        raise ValueError("sketch carries no singular triplets")
    s = np.empty((store.m, sketch.p))
    scale = sketch.col_scale
    for t, j in enumerate(sketch.col_indices):
        s[:, t] = store.column_values(int(j)) * scale[t]
    gram = sketch.v.T @ (s.T @ s) @ sketch.v
    gram /= np.outer(sketch.sigma, sketch.sigma)
    gram -= np.eye(sketch.k)
    return math.sqrt(float((gram * gram).sum()))


_REPORT_FLOATS = ("epsilon", "delta", "kappa", "spectral_norm", "frob_norm",
                  "omega", "theta", "xi")


def write_report_csv(path, report: LeverageReport) -> None:
    """Header `i,approx,exact,abs_err`, 1-based indices, with metadata
    comments carrying mode, seed, coherence, and the full params."""
    p = report.params
    lines = [f"# mode={report.mode}",
             f"# seed={report.seed}",
             f"# coherence_row={report.coherence_row + 1}",
             f"# coherence={repr(report.coherence)}",
             f"# k={p.k}", f"# p={p.p}"]
    for name in _REPORT_FLOATS:
        lines.append(f"# {name}={repr(getattr(p, name))}")
    if p.p_override is not None:
        lines.append(f"# p_override={p.p_override}")
    if p.xi_override is not None:
        lines.append(f"# xi_override={repr(p.xi_override)}")
    lines.append("i,approx,exact,abs_err")
    nan = float("nan")
    for t in range(report.rows.size):
        e = nan if report.exact is None else float(report.exact[t])
        a = nan if report.abs_err is None else float(report.abs_err[t])
        lines.append(f"{int(report.rows[t]) + 1},"
                     f"{repr(float(report.approx[t]))},{repr(e)},{repr(a)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_report_csv(path) -> LeverageReport:
    meta: dict[str, str] = {}
    body: list[list[float]] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("i,"):
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key] = val
                continue
            body.append([float(x) for x in line.split(",")])
    params = Params(
        epsilon=float(meta["epsilon"]), delta=float(meta["delta"]),
        k=int(meta["k"]), kappa=float(meta["kappa"]),
        spectral_norm=float(meta["spectral_norm"]),
        frob_norm=float(meta["frob_norm"]), omega=float(meta["omega"]),
        theta=float(meta["theta"]), p=int(meta["p"]), xi=float(meta["xi"]),
        p_override=int(meta["p_override"]) if "p_override" in meta else None,
        xi_override=float(meta["xi_override"]) if "xi_override" in meta else None)
    data = np.array(body)
    exact = data[:, 2]
    abs_err = data[:, 3]
    if np.isnan(exact).all():
        exact = abs_err = None
    return LeverageReport(
        rows=data[:, 0].astype(np.int64) - 1, approx=data[:, 1],
        exact=exact, abs_err=abs_err,
        coherence_row=int(meta["coherence_row"]) - 1,
        coherence=float(meta["coherence"]), mode=meta["mode"],
        seed=int(meta["seed"]), params=params)
