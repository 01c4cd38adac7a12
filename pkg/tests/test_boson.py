import io
import math

import numpy as np
import pytest

from nisqlab.boson import (
    OutcomeDistribution,
    boson_distribution,
    boson_submatrix,
    count_boson_outcomes,
    distribution_from_csv,
    distribution_to_csv,
    enumerate_boson_outcomes,
    enumerate_fermion_outcomes,
    fermion_distribution,
    sample_outcome,
    sample_outcomes,
    scaled_permanents,
)
from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.linalg import haar_orthonormal_rows, permanent_ryser
from nisqlab.rng import RandomSource

HADAMARD2 = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)


# ----------------------------------------------------------------------
# enumeration and submatrices
# ----------------------------------------------------------------------

def test_enumerate_single_boson():
    assert enumerate_boson_outcomes(1, 3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_enumerate_two_bosons_two_modes():
    assert enumerate_boson_outcomes(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_enumerate_count_matches_binomial():
    outs = enumerate_boson_outcomes(3, 5)
    assert len(outs) == 35 == count_boson_outcomes(3, 5)


def test_enumerate_cap():
    with pytest.raises(SizeCapError):
        enumerate_boson_outcomes(12, 30)


def test_submatrix_identity_selection():
    g = RandomSource(1).generator
    x = g.standard_normal((3, 3))
    assert np.array_equal(boson_submatrix(x, (1, 1, 1)), x)


def test_submatrix_column_repetition():
    sub = boson_submatrix(np.eye(2), (2, 0))
    assert np.array_equal(sub, np.array([[1, 1], [0, 0]]))


def test_submatrix_column_selection():
    g = RandomSource(2).generator
    x = g.standard_normal((2, 3))
    assert np.array_equal(boson_submatrix(x, (0, 1, 1)), x[:, [1, 2]])


def test_submatrix_length_mismatch():
    with pytest.raises(DimensionError):
        boson_submatrix(np.eye(2), (1, 1, 0))


# ----------------------------------------------------------------------
# distributions
# ----------------------------------------------------------------------

def test_boson_identity_input_antibunched():
    d = boson_distribution(np.eye(2)).as_dict()
    assert d[(1, 1)] == pytest.approx(1.0, abs=1e-12)
    assert d[(2, 0)] == pytest.approx(0.0, abs=1e-12)
    assert d[(0, 2)] == pytest.approx(0.0, abs=1e-12)


def test_boson_hadamard_bunches():
    d = boson_distribution(HADAMARD2).as_dict()
    assert d[(1, 1)] == pytest.approx(0.0, abs=1e-12)
    assert d[(2, 0)] == pytest.approx(0.5, abs=1e-12)
    assert d[(0, 2)] == pytest.approx(0.5, abs=1e-12)


def test_single_boson_law_is_amplitude_squared():
    x = haar_orthonormal_rows(1, 4, RandomSource(3))
    d = boson_distribution(x)
    assert np.allclose(d.probs, np.abs(x[0]) ** 2, atol=1e-12)


def test_boson_law_matches_per_outcome_permanents():
    # independent route: one explicit Ryser permanent per outcome
    x = haar_orthonormal_rows(3, 6, RandomSource(11))
    d = boson_distribution(x)
    for occ, p in zip(d.outcomes, d.probs):
        denom = np.prod([math.factorial(c) for c in occ])
        expected = abs(permanent_ryser(boson_submatrix(x, occ))) ** 2 / denom
        assert p == pytest.approx(expected, abs=1e-12)


def test_scaled_permanents_match_definition():
    x = haar_orthonormal_rows(2, 4, RandomSource(4))
    q = scaled_permanents(x)
    for occ, val in zip(enumerate_boson_outcomes(2, 4), q):
        denom = np.prod([math.factorial(c) for c in occ])
        assert val == pytest.approx(
            permanent_ryser(boson_submatrix(x, occ)) / denom, abs=1e-12
        )


@pytest.mark.parametrize("n,m", [(2, 4), (2, 8), (3, 6), (4, 8)])
def test_boson_normalization(n, m):
    x = haar_orthonormal_rows(n, m, RandomSource(100 + n * m))
    assert abs(boson_distribution(x).total - 1.0) <= 1e-8


def test_boson_rejects_non_orthonormal():
    with pytest.raises(PreconditionError):
        boson_distribution(np.ones((2, 3)))


def test_boson_mode_permutation_equivariance():
    x = haar_orthonormal_rows(2, 4, RandomSource(17))
    d = boson_distribution(x)
    perm = [2, 0, 3, 1]
    dp = boson_distribution(x[:, perm]).as_dict()
    for occ, p in zip(d.outcomes, d.probs):
        permuted = tuple(np.zeros(4, dtype=int))
        occ_arr = np.zeros(4, dtype=int)
        for new_j, old_j in enumerate(perm):
            occ_arr[new_j] = occ[old_j]
        assert dp[tuple(occ_arr)] == pytest.approx(p, abs=1e-10)


def test_fermion_identity_input():
    d = fermion_distribution(np.eye(2)).as_dict()
    assert d[(0, 1)] == pytest.approx(1.0, abs=1e-12)


def test_fermion_hadamard_antibunches():
    d = fermion_distribution(HADAMARD2).as_dict()
    assert d[(0, 1)] == pytest.approx(1.0, abs=1e-12)


def test_fermion_cauchy_binet_normalization():
    x = haar_orthonormal_rows(2, 5, RandomSource(23))
    assert abs(fermion_distribution(x).total - 1.0) <= 1e-10


def test_single_particle_boson_equals_fermion():
    x = haar_orthonormal_rows(1, 5, RandomSource(29))
    b = boson_distribution(x)
    f = fermion_distribution(x)
    assert np.allclose(b.probs, f.probs, atol=1e-12)


def test_fermion_outcome_enumeration():
    assert enumerate_fermion_outcomes(2, 3) == [(0, 1), (0, 2), (1, 2)]


# ----------------------------------------------------------------------
# OutcomeDistribution and sampling
# ----------------------------------------------------------------------

def test_distribution_rejects_negative_probability():
    with pytest.raises(PreconditionError):
        OutcomeDistribution(["a", "b"], np.array([1.1, -0.1]))


def test_distribution_clips_float_dust():
    d = OutcomeDistribution(["a", "b"], np.array([1.0, -1e-14]))
    assert d.probs[1] == 0.0


def test_sample_point_mass():
    d = OutcomeDistribution([(1, 1), (2, 0)], np.array([1.0, 0.0]))
    assert all(sample_outcome(d, RandomSource(i)) == (1, 1) for i in range(5))


def test_sample_frequencies_concentrate():
    d = OutcomeDistribution(["A", "B"], np.array([0.5, 0.5]))
    draws = sample_outcomes(d, 100000, RandomSource(31))
    freq = draws.count("A") / len(draws)
    assert 0.49 <= freq <= 0.51


def test_sampling_deterministic_by_seed():
    d = OutcomeDistribution(["A", "B", "C"], np.array([0.2, 0.3, 0.5]))
    a = sample_outcomes(d, 50, RandomSource(5))
    b = sample_outcomes(d, 50, RandomSource(5))
    assert a == b


def test_sample_rejects_unnormalized():
    d = OutcomeDistribution(["A", "B"], np.array([0.5, 0.2]))
    with pytest.raises(PreconditionError):
        sample_outcome(d, RandomSource(0))


def test_csv_round_trip():
    x = haar_orthonormal_rows(2, 3, RandomSource(37))
    d = boson_distribution(x)
    buf = io.StringIO()
    distribution_to_csv(d, buf)
    buf.seek(0)
    back = distribution_from_csv(buf)
    assert back.outcomes == d.outcomes
    assert np.allclose(back.probs, d.probs, rtol=0, atol=1e-16)
    header = buf.getvalue().splitlines()[0]
    assert header == "outcome,probability"
