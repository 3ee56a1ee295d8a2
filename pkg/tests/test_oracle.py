"""Exact scores, conditioning, QR, and the two synthetic dataset families."""
import numpy as np
import pytest

from levsketch import (exact_leverage, gen_example1, gen_example2,
                       householder_qr, numerical_rank,
                       spectral_norm_and_kappa, stream, standard_normal,
                       write_matrix_csv)

from oracles import hat_leverage


def test_identity_scores():
    np.testing.assert_allclose(exact_leverage(np.eye(3)), np.ones(3),
                               atol=1e-14)


def test_diagonal_with_zero_row():
    a = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_allclose(exact_leverage(a), [1.0, 1.0, 0.0], atol=1e-14)


def test_rank_deficient_matches_hat_matrix():
    rng = stream(55)
    a = standard_normal(rng, (40, 5)) @ standard_normal(rng, (5, 10))
    scores = exact_leverage(a)
    np.testing.assert_allclose(scores, hat_leverage(a), atol=1e-6)
    assert scores.sum() == pytest.approx(5.0, abs=1e-9)
    assert numerical_rank(a) == 5


def test_scores_bounded_and_sum_to_rank():
    a = gen_example1(80, 20, 6, seed=1)
    scores = exact_leverage(a)
    assert np.all(scores >= 0.0)
    assert np.all(scores <= 1.0 + 1e-10)
    assert scores.sum() == pytest.approx(numerical_rank(a), abs=1e-8)


def test_spectral_norm_and_kappa_diagonal():
    norm, kappa = spectral_norm_and_kappa(np.diag([4.0, 2.0]))
    assert norm == pytest.approx(4.0, abs=1e-14)
    assert kappa == pytest.approx(2.0, abs=1e-14)


def test_kappa_skips_zero_singular_values():
    norm, kappa = spectral_norm_and_kappa(np.diag([3.0, 0.0]))
    assert norm == pytest.approx(3.0, abs=1e-14)
    assert kappa == pytest.approx(1.0, abs=1e-14)


def test_zero_matrix_errors():
    with pytest.raises(ValueError, match="zero matrix"):
        exact_leverage(np.zeros((2, 2)))
    with pytest.raises(ValueError, match="zero matrix"):
        spectral_norm_and_kappa(np.zeros((2, 2)))
    assert numerical_rank(np.zeros((3, 2))) == 0


def test_householder_qr_factors():
    a = standard_normal(stream(8), (12, 5))
    q, r = householder_qr(a)
    assert q.shape == (12, 5)
    np.testing.assert_allclose(q.T @ q, np.eye(5), atol=1e-12)
    np.testing.assert_allclose(q @ r, a, atol=1e-12)
    np.testing.assert_array_equal(r, np.triu(r))
    assert np.all(np.diag(r) >= 0.0)


def test_householder_qr_wide_rejected():
    with pytest.raises(ValueError, match="m >= r"):
        householder_qr(np.ones((2, 3)))


def test_example1_rank_and_zeroed_columns():
    a = gen_example1(1000, 100, 70, seed=4)
    zero_cols = int((np.abs(a).sum(axis=0) == 0.0).sum())
    assert zero_cols == 70
    assert numerical_rank(a) == 30


def test_example1_full_rank_without_zeroed_columns():
    a = gen_example1(40, 10, 0, seed=2)
    assert numerical_rank(a) == 10


def test_example1_band_scaling():
    a = gen_example1(8, 50, 0, seed=3)
    band = np.sqrt((a * a).sum(axis=1)).reshape(4, 2).mean(axis=1)
    # bands scaled 1, 1e2, 1e3, 1e4: adjacent ratios 100, 10, 10 up to
    # the sampling spread of 50-entry Gaussian row norms
    assert 30.0 < band[1] / band[0] < 300.0
    assert 3.0 < band[2] / band[1] < 30.0
    assert 3.0 < band[3] / band[2] < 30.0


def test_example1_validation():
    with pytest.raises(ValueError, match="divisible by 4"):
        gen_example1(10, 5, 0, seed=0)
    with pytest.raises(ValueError, match="0 <= n_zero < n"):
        gen_example1(8, 5, 5, seed=0)


def test_example1_reproducible_csv(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_matrix_csv(p1, gen_example1(40, 12, 3, seed=9))
    write_matrix_csv(p2, gen_example1(40, 12, 3, seed=9))
    assert p1.read_bytes() == p2.read_bytes()


def test_example2_rank_one():
    a = gen_example2(30, 8, 1, kappa=1.0, a=1, b=10, seed=5)
    assert numerical_rank(a) == 1
    norm, kappa = spectral_norm_and_kappa(a)
    assert kappa == pytest.approx(1.0, rel=1e-6)
    assert norm == pytest.approx(round(norm), abs=1e-9)
    assert 1.0 - 1e-9 <= norm <= 10.0 + 1e-9


def test_example2_rank_matches_r():
    for seed, r in [(0, 2), (1, 5), (2, 12)]:
        a = gen_example2(40, 15, r, kappa=3.0, a=1, b=10, seed=seed)
        assert numerical_rank(a) == r


def test_example2_measured_kappa():
    a = gen_example2(60, 25, 5, kappa=10.0, a=2, b=9, seed=11)
    _, kappa = spectral_norm_and_kappa(a)
    assert kappa == pytest.approx(10.0, rel=1e-6)
    flat = gen_example2(60, 25, 5, kappa=1.0, a=2, b=9, seed=11)
    _, kappa_flat = spectral_norm_and_kappa(flat)
    assert kappa_flat == pytest.approx(1.0, rel=1e-6)


def test_example2_validation():
    with pytest.raises(ValueError, match="no distinct min and max"):
        gen_example2(10, 10, 1, kappa=2.0, a=1, b=10, seed=0)
    with pytest.raises(ValueError, match="1 <= r"):
        gen_example2(4, 3, 5, kappa=1.0, a=1, b=10, seed=0)
    with pytest.raises(ValueError, match="1 <= a <= b"):
        gen_example2(4, 3, 2, kappa=1.0, a=5, b=2, seed=0)
    with pytest.raises(ValueError, match="kappa"):
        gen_example2(4, 3, 2, kappa=0.5, a=1, b=2, seed=0)


def test_row_permutation_permutes_scores():
    a = gen_example1(16, 8, 2, seed=7)
    perm = stream(1).permutation(16)
    np.testing.assert_allclose(exact_leverage(a[perm]),
                               exact_leverage(a)[perm], atol=1e-6)


def test_right_orthogonal_invariance():
    a = gen_example1(16, 8, 0, seed=7)
    q, _ = householder_qr(standard_normal(stream(2), (8, 8)))
    np.testing.assert_allclose(exact_leverage(a @ q), exact_leverage(a),
                               atol=1e-6)
