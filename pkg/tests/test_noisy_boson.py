import io
import math

import numpy as np
import pytest

from nisqlab.boson import OutcomeDistribution, boson_distribution
from nisqlab.errors import DimensionError, PreconditionError
from nisqlab.linalg import gaussian_matrix, gaussian_matrix_batch, haar_orthonormal_rows
from nisqlab.noisy_boson import (
    NoisyConfig,
    combined_rate,
    correlation_decay_curve,
    distribution_correlation,
    mean_attenuation_check,
    mix_matrix,
    noise_semigroup_check,
    noisy_boson_distribution,
    total_variation,
    write_decay_csv,
)
from nisqlab.rng import RandomSource


# ----------------------------------------------------------------------
# mixing
# ----------------------------------------------------------------------

def test_mix_endpoints_exact():
    a = haar_orthonormal_rows(2, 4, RandomSource(5))
    g = gaussian_matrix(2, 4, RandomSource(6))
    assert np.array_equal(mix_matrix(a, g, 0.0), a)
    assert np.array_equal(mix_matrix(a, g, 1.0), g)


def test_mix_is_linear_in_both_arguments():
    rng = RandomSource(7)
    a = haar_orthonormal_rows(2, 3, rng)
    g = gaussian_matrix(2, 3, rng)
    t = 0.3
    assert np.allclose(mix_matrix(2 * a, g, t), 2 * math.sqrt(0.7) * a + math.sqrt(0.3) * g)


def test_mix_shape_mismatch():
    with pytest.raises(DimensionError):
        mix_matrix(np.eye(2), np.eye(3), 0.5)


def test_mix_rejects_bad_rate():
    with pytest.raises(PreconditionError):
        mix_matrix(np.eye(2), np.eye(2), 1.5)


def test_mixture_preserves_expected_row_norm():
    a = haar_orthonormal_rows(2, 4, RandomSource(8))
    gs = gaussian_matrix_batch(100000, 2, 4, RandomSource(9))
    mixed = math.sqrt(0.6) * a[None] + math.sqrt(0.4) * gs
    norms = np.sum(np.abs(mixed) ** 2, axis=2).ravel()
    se = norms.std() / math.sqrt(norms.size)
    assert abs(norms.mean() - 1.0) < 3 * se


# ----------------------------------------------------------------------
# noisy distribution
# ----------------------------------------------------------------------

def test_zero_noise_equals_ideal():
    a = haar_orthonormal_rows(2, 4, RandomSource(5))
    ideal = boson_distribution(a)
    noisy = noisy_boson_distribution(a, NoisyConfig(t=0.0, mc_samples=300), RandomSource(1))
    assert np.max(np.abs(noisy.probs - ideal.probs)) <= 1e-10


def test_full_noise_single_boson_symmetric():
    a = haar_orthonormal_rows(1, 2, RandomSource(2))
    noisy = noisy_boson_distribution(a, NoisyConfig(t=1.0, mc_samples=20000), RandomSource(3))
    for p, se in zip(noisy.probs, noisy.std_errs):
        assert abs(p - 0.5) <= 3 * se


def test_two_seeds_agree_within_error_bars_not_bitwise():
    a = haar_orthonormal_rows(2, 4, RandomSource(4))
    cfg = NoisyConfig(t=0.5, mc_samples=20000)
    d1 = noisy_boson_distribution(a, cfg, RandomSource(10))
    d2 = noisy_boson_distribution(a, cfg, RandomSource(11))
    assert not np.array_equal(d1.probs, d2.probs)
    gaps = np.abs(d1.probs - d2.probs)
    limits = 4 * np.hypot(d1.std_errs, d2.std_errs)
    assert np.all(gaps <= limits)


def test_noisy_distribution_normalized_and_seed_deterministic():
    a = haar_orthonormal_rows(2, 3, RandomSource(6))
    cfg = NoisyConfig(t=0.4, mc_samples=5000)
    d1 = noisy_boson_distribution(a, cfg, RandomSource(12))
    d2 = noisy_boson_distribution(a, cfg, RandomSource(12))
    assert abs(d1.total - 1.0) <= 1e-8
    assert np.array_equal(d1.probs, d2.probs)


def test_config_seed_used_when_no_source_given():
    a = haar_orthonormal_rows(2, 3, RandomSource(6))
    d1 = noisy_boson_distribution(a, NoisyConfig(t=0.4, mc_samples=2000, seed=77))
    d2 = noisy_boson_distribution(a, NoisyConfig(t=0.4, mc_samples=2000, seed=77))
    assert np.array_equal(d1.probs, d2.probs)
    with pytest.raises(PreconditionError):
        noisy_boson_distribution(a, NoisyConfig(t=0.4, mc_samples=10))


# ----------------------------------------------------------------------
# correlation and TVD
# ----------------------------------------------------------------------

def test_correlation_of_distribution_with_itself():
    p = OutcomeDistribution(["a", "b", "c"], np.array([0.2, 0.3, 0.5]))
    assert distribution_correlation(p, p) == pytest.approx(1.0, abs=1e-12)


def test_correlation_uniform_is_zero_by_convention():
    u = OutcomeDistribution(["a", "b", "c"], np.ones(3) / 3)
    p = OutcomeDistribution(["a", "b", "c"], np.array([1.0, 0.0, 0.0]))
    assert distribution_correlation(u, p) == 0.0


def test_correlation_of_disjoint_point_masses():
    p = OutcomeDistribution(["a", "b", "c"], np.array([1.0, 0.0, 0.0]))
    q = OutcomeDistribution(["a", "b", "c"], np.array([0.0, 1.0, 0.0]))
    assert distribution_correlation(p, q) == pytest.approx(-0.5, abs=1e-12)


def test_correlation_symmetric_and_bounded():
    g = RandomSource(13).generator
    for _ in range(10):
        x = g.random(6)
        y = g.random(6)
        p = OutcomeDistribution(list("abcdef"), x / x.sum())
        q = OutcomeDistribution(list("abcdef"), y / y.sum())
        c1 = distribution_correlation(p, q)
        c2 = distribution_correlation(q, p)
        assert c1 == pytest.approx(c2, abs=1e-14)
        assert -1.0 - 1e-12 <= c1 <= 1.0 + 1e-12


def test_correlation_outcome_mismatch_raises_key_error():
    p = OutcomeDistribution(["a", "b"], np.array([0.5, 0.5]))
    q = OutcomeDistribution(["b", "a"], np.array([0.5, 0.5]))
    with pytest.raises(KeyError):
        distribution_correlation(p, q)


def test_total_variation():
    p = OutcomeDistribution(["a", "b"], np.array([1.0, 0.0]))
    q = OutcomeDistribution(["a", "b"], np.array([0.0, 1.0]))
    assert total_variation(p, q) == pytest.approx(1.0)
    assert total_variation(p, p) == 0.0


# ----------------------------------------------------------------------
# mean attenuation
# ----------------------------------------------------------------------

def test_attenuation_noiseless_is_exact():
    a = haar_orthonormal_rows(2, 4, RandomSource(5))
    est, target, se = mean_attenuation_check(a, (1, 1, 0, 0), 0.0, 500, RandomSource(4))
    assert est == pytest.approx(target, abs=1e-12)


def test_attenuation_full_noise_has_zero_target():
    a = haar_orthonormal_rows(2, 4, RandomSource(5))
    est, target, se = mean_attenuation_check(a, (0, 1, 1, 0), 1.0, 20000, RandomSource(6))
    assert target == 0.0
    assert abs(est) <= 3 * se


def test_attenuation_matches_contraction_law():
    a = haar_orthonormal_rows(3, 9, RandomSource(21))
    occ = (1, 0, 1, 0, 1, 0, 0, 0, 0)
    est, target, se = mean_attenuation_check(a, occ, 0.3, 50000, RandomSource(33))
    assert abs(est - target) <= 3 * se


# ----------------------------------------------------------------------
# semigroup and decay curve
# ----------------------------------------------------------------------

def test_combined_rate():
    assert combined_rate(0.2, 0.2) == pytest.approx(0.36)
    assert combined_rate(0.0, 0.3) == pytest.approx(0.3)
    assert combined_rate(1.0, 1.0) == pytest.approx(1.0)


def test_semigroup_trivial_first_stage():
    a = haar_orthonormal_rows(2, 3, RandomSource(41))
    cfg = NoisyConfig(t=0.3, mc_samples=20000)
    two, one = noise_semigroup_check(a, 0.0, 0.3, cfg, RandomSource(42))
    gaps = np.abs(two.probs - one.probs)
    limits = 3 * np.hypot(two.std_errs, one.std_errs)
    assert np.all(gaps <= limits)


def test_semigroup_two_stage_matches_combined():
    a = haar_orthonormal_rows(2, 3, RandomSource(43))
    cfg = NoisyConfig(t=0.2, mc_samples=30000)
    two, one = noise_semigroup_check(a, 0.2, 0.2, cfg, RandomSource(44))
    gaps = np.abs(two.probs - one.probs)
    limits = 3 * np.hypot(two.std_errs, one.std_errs)
    assert np.all(gaps <= limits)


def test_decay_curve_zero_noise_column():
    rows = correlation_decay_curve([2, 3], [0.0], 200, RandomSource(100))
    for r in rows:
        assert abs(r.corr - 1.0) <= 1e-10
        assert r.tvd <= 1e-10
        assert r.m == r.n * r.n


def test_decay_curve_monotone_in_t_small():
    rows = correlation_decay_curve([3], [0.1, 0.5, 0.9], 4000, RandomSource(101))
    corrs = [r.corr for r in rows]
    assert corrs[0] > corrs[1] > corrs[2]


def test_decay_csv_writer():
    rows = correlation_decay_curve([2], [0.0, 0.5], 500, RandomSource(102))
    buf = io.StringIO()
    write_decay_csv(rows, buf, meta="seed=102")
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# seed=102"
    assert lines[1] == "n,m,t,corr,std_err,tvd"
    assert len(lines) == 4
