import io
import math

import numpy as np
import pytest

from nisqlab.boolfn import (
    BooleanFunction,
    FourierSpectrum,
    degree_profile,
    empirical_stability,
    function_from_bits,
    function_from_json,
    function_to_bits,
    function_to_json,
    inverse_walsh_transform,
    low_degree_truncate,
    make_majority,
    make_parity,
    make_tribes,
    noise_operator,
    noise_stability,
    repetition_majority_logical_error,
    repetition_majority_mc,
    spectrum_to_csv,
    walsh_transform,
)
from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.rng import RandomSource


def _random_pm1(n, seed):
    g = RandomSource(seed).generator
    return BooleanFunction(n, np.where(g.random(1 << n) < 0.5, 1.0, -1.0))


# ----------------------------------------------------------------------
# transform
# ----------------------------------------------------------------------

def test_constant_function_spectrum():
    spec = walsh_transform(BooleanFunction(3, np.ones(8)))
    assert spec.coeffs[0] == pytest.approx(1.0)
    assert np.allclose(spec.coeffs[1:], 0.0)


def test_parity_spectrum_is_single_character():
    spec = walsh_transform(make_parity(3))
    assert spec.coeffs[0b111] == pytest.approx(1.0)
    mask = np.ones(8, dtype=bool)
    mask[0b111] = False
    assert np.allclose(spec.coeffs[mask], 0.0)


def test_majority3_spectrum():
    spec = walsh_transform(make_majority(3))
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 0.5
    expected[7] = -0.5
    assert np.allclose(spec.coeffs, expected, atol=1e-15)


def test_round_trip_n16():
    f = _random_pm1(16, 3)
    back = inverse_walsh_transform(walsh_transform(f))
    assert np.max(np.abs(back.table - f.table)) <= 1e-10


def test_parseval():
    for seed in range(3):
        f = _random_pm1(10, seed)
        assert walsh_transform(f).total_mass() == pytest.approx(1.0, abs=1e-10)


def test_table_length_validation():
    with pytest.raises(DimensionError):
        BooleanFunction(3, np.ones(7))
    with pytest.raises(SizeCapError):
        BooleanFunction(25, np.ones(2))


# ----------------------------------------------------------------------
# noise operator and stability
# ----------------------------------------------------------------------

def test_noise_operator_identity_and_collapse():
    spec = walsh_transform(_random_pm1(6, 5))
    same = noise_operator(spec, 1.0)
    assert np.array_equal(same.coeffs, spec.coeffs)
    flat = noise_operator(spec, 0.0)
    assert flat.coeffs[0] == spec.coeffs[0]
    assert np.allclose(flat.coeffs[1:], 0.0)


def test_noise_operator_on_parity():
    spec = noise_operator(walsh_transform(make_parity(4)), 0.5)
    assert spec.coeffs[0b1111] == pytest.approx(0.0625)


def test_noise_operator_semigroup():
    spec = walsh_transform(_random_pm1(10, 7))
    a = noise_operator(noise_operator(spec, 0.8), -0.5)
    b = noise_operator(spec, -0.4)
    assert np.max(np.abs(a.coeffs - b.coeffs)) <= 1e-10


def test_stability_dictator():
    dictator = BooleanFunction(2, np.array([1.0, 1.0, -1.0, -1.0]))  # value of x_1
    for rho in (0.2, 0.7):
        assert noise_stability(dictator, rho) == pytest.approx(rho, abs=1e-12)


def test_stability_parity_and_majority():
    for n in (2, 5, 8):
        f = make_parity(n)
        for rho in (0.1, 0.6, 0.9):
            assert noise_stability(f, rho) == pytest.approx(rho ** n, abs=1e-12)
    maj = make_majority(3)
    for rho in (0.3, 0.6, 1.0):
        assert noise_stability(maj, rho) == pytest.approx((3 * rho + rho ** 3) / 4, abs=1e-12)


def test_stability_monotone_in_rho():
    f = make_tribes(2, 3)
    grid = [noise_stability(f, r / 10) for r in range(11)]
    assert all(a <= b + 1e-12 for a, b in zip(grid, grid[1:]))


def test_stability_requires_boolean_table():
    with pytest.raises(PreconditionError):
        noise_stability(BooleanFunction(2, np.array([0.5, 1, -1, 1])), 0.5)


def test_empirical_stability_rho_one_is_exact():
    est, se = empirical_stability(make_majority(3), 1.0, 1000, RandomSource(1))
    assert est == 1.0


def test_empirical_stability_matches_analytic():
    rng = RandomSource(2)
    for f in (make_majority(3), make_parity(5), make_tribes(2, 2)):
        for rho in (0.3, 0.6, 0.9):
            est, se = empirical_stability(f, rho, 200000, rng)
            assert abs(est - noise_stability(f, rho)) <= 3 * se


def test_empirical_stability_independent_inputs():
    est, se = empirical_stability(make_parity(5), 0.0, 200000, RandomSource(3))
    assert abs(est) <= 3 * se


# ----------------------------------------------------------------------
# truncation and degree profile
# ----------------------------------------------------------------------

def test_truncate_full_degree_is_identity():
    f = _random_pm1(8, 9)
    spec = walsh_transform(f)
    trunc, tail = low_degree_truncate(spec, 8)
    assert tail == 0.0
    assert np.max(np.abs(trunc.table - f.table)) <= 1e-10


def test_truncate_parity_below_top_degree():
    spec = walsh_transform(make_parity(5))
    trunc, tail = low_degree_truncate(spec, 4)
    assert tail == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(trunc.table, 0.0)


def test_truncate_majority3_to_linear():
    spec = walsh_transform(make_majority(3))
    trunc, tail = low_degree_truncate(spec, 1)
    assert tail == pytest.approx(0.25, abs=1e-12)


def test_truncation_squared_distance_equals_tail():
    f = _random_pm1(8, 10)
    spec = walsh_transform(f)
    trunc, tail = low_degree_truncate(spec, 3)
    dist_sq = float(np.mean((f.table - trunc.table) ** 2))
    assert dist_sq == pytest.approx(tail, abs=1e-10)


def test_degree_profile_examples():
    p = degree_profile(walsh_transform(make_parity(4)))
    assert p.masses[4] == pytest.approx(1.0, abs=1e-12)
    assert p.masses[:4].sum() == pytest.approx(0.0, abs=1e-12)
    maj = degree_profile(walsh_transform(make_majority(3)))
    assert np.allclose(maj.masses, [0.0, 0.75, 0.0, 0.25], atol=1e-12)
    const = degree_profile(walsh_transform(BooleanFunction(3, np.ones(8))))
    assert const.masses[0] == pytest.approx(1.0)


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------

def test_majority_one_variable_is_dictator():
    f = make_majority(1)
    assert np.array_equal(f.table, [1.0, -1.0])


def test_majority3_pointwise():
    f = make_majority(3)
    # variables (+1, +1, -1): only variable 2 is FALSE, index has bit 2 set
    assert f.table[0b100] == 1.0
    assert f.table[0b011] == -1.0


def test_majority_rejects_even_n():
    with pytest.raises(PreconditionError):
        make_majority(4)


def test_tribes_all_false_input():
    f = make_tribes(2, 2)
    assert f.table[(1 << 4) - 1] == -1.0  # every variable -1
    assert f.table[0] == 1.0  # every variable +1


# ----------------------------------------------------------------------
# repetition code
# ----------------------------------------------------------------------

def test_repetition_single_bit():
    assert repetition_majority_logical_error(1, 0.3) == pytest.approx(0.3)


def test_repetition_symmetric_point():
    assert repetition_majority_logical_error(3, 0.5) == pytest.approx(0.5)


def test_repetition_l5_value():
    assert repetition_majority_logical_error(5, 0.1) == pytest.approx(0.00856, abs=1e-10)


def test_repetition_gain_and_monotonicity():
    for p in (0.05, 0.1, 0.2):
        errs = [repetition_majority_logical_error(L, p) for L in (3, 5, 7)]
        assert all(e < p for e in errs)
        assert errs[0] > errs[1] > errs[2]


def test_repetition_mc_matches_exact():
    est, se = repetition_majority_mc(5, 0.1, 500000, RandomSource(4))
    assert abs(est - 0.00856) <= 3 * se


def test_repetition_rejects_even_length():
    with pytest.raises(PreconditionError):
        repetition_majority_logical_error(4, 0.1)


# ----------------------------------------------------------------------
# interchange
# ----------------------------------------------------------------------

def test_bits_round_trip():
    f = make_majority(5)
    data = function_to_bits(f)
    assert len(data) == 4  # 32 bits
    back = function_from_bits(data, 5)
    assert np.array_equal(back.table, f.table)


def test_bits_little_endian_layout():
    # table TRUE only at x=1 -> second-lowest bit of the first byte
    f = BooleanFunction(2, np.array([-1.0, 1.0, -1.0, -1.0]))
    assert function_to_bits(f) == bytes([0b10])


def test_json_round_trip_and_01_mapping():
    f = make_majority(3)
    assert np.array_equal(function_from_json(function_to_json(f)).table, f.table)
    zero_one = function_from_json('{"n": 1, "table": [1, 0]}')
    assert np.array_equal(zero_one.table, [1.0, -1.0])


def test_spectrum_csv():
    buf = io.StringIO()
    spectrum_to_csv(walsh_transform(make_parity(2)), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "bitmask,coefficient"
    assert lines[4- 1 + 1] == "3,1"
