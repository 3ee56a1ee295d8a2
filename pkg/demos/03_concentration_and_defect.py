"""Measure the two concentration lemmas and the near-orthonormality bound.

The tail bound promises P(deviation >= theta) <= 1/(theta^2 p) for both
approximation stages. Dense Monte Carlo checks that at desk scale. The
count-collapsed evaluator then reaches the THEORETICAL sample count - the
one with ten digits - where the implied singular vectors should be
orthonormal to within beta.
"""
import math

import numpy as np

from levsketch import (MatrixSampleStore, compute_params,
                       concentration_ratios, counted_sketch_spectrum,
                       deviation_bound, householder_qr, sigma_min_bound,
                       standard_normal, stream, trial_stream)


def main() -> None:
    store = MatrixSampleStore(standard_normal(stream(42), (40, 30)))
    theta, p, trials = 0.5, 100, 300
    ratios = np.array([concentration_ratios(store, p, trial_stream(4000, t))
                       for t in range(trials)])
    bound = deviation_bound(theta, p)
    print(f"theta={theta} p={p}: bound on exceed probability = {bound}")
    for name, col in (("||AA^T - SS^T||_F / ||A||_F^2", 0),
                      ("||S^T S - W^T W||_F / ||S||_F^2", 1)):
        vals = ratios[:, col]
        print(f"  {name}: mean={vals.mean():.3f} max={vals.max():.3f} "
              f"exceed={np.mean(vals >= theta):.3f}")

    rng = stream(12345)
    q1, _ = householder_qr(standard_normal(rng, (16, 2)))
    q2, _ = householder_qr(standard_normal(rng, (16, 2)))
    a = q1 @ q2.T
    params = compute_params(0.9, 0.2, 2, 1.0, 1.0, math.sqrt(2.0))
    print(f"\nrank-2 orthonormal-factor matrix, 16x16: "
          f"theoretical p={params.p:.2e}, beta={params.beta:.2e}")
    sigma, defect = counted_sketch_spectrum(a, params.p, 2, stream(9))
    print(f"counted evaluation at that p: sigma={sigma.round(6)}, "
          f"defect={defect:.2e} (<= beta: {defect <= params.beta})")
    print(f"sigma_min lower bound {sigma_min_bound(params):.6f} "
          f"vs observed {sigma[-1]:.6f}")


if __name__ == "__main__":
    main()
