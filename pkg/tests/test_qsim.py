import json

import numpy as np
import pytest

from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.noisy_boson import total_variation
from nisqlab.qsim import (
    Circuit,
    Gate,
    NoiseModel,
    ShotBatch,
    apply_depolarizing,
    apply_gate_density,
    bitstrings,
    cat_circuit,
    check_density,
    circuit_from_json,
    circuit_to_json,
    cz_brickwork,
    gate,
    measurement_distribution,
    noise_from_json,
    noise_to_json,
    random_circuit,
    run_circuit_density,
    run_circuit_trajectories,
    zero_density,
)
from nisqlab.rng import RandomSource


def _random_density(n, seed):
    g = RandomSource(seed).generator
    z = g.standard_normal((1 << n, 1 << n)) + 1j * g.standard_normal((1 << n, 1 << n))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


# ----------------------------------------------------------------------
# gates and circuits
# ----------------------------------------------------------------------

def test_gate_validates_unitarity():
    with pytest.raises(PreconditionError):
        Gate("bad", (0,), np.array([[1, 0], [0, 2]]))


def test_gate_validates_targets_and_shape():
    with pytest.raises(DimensionError):
        Gate("cz", (0, 0), np.eye(4))
    with pytest.raises(DimensionError):
        Gate("h", (0, 1), np.eye(2))
    with pytest.raises(PreconditionError):
        gate("nope", 0)


def test_circuit_rejects_overlapping_cycle():
    with pytest.raises(DimensionError):
        Circuit(2, [[gate("h", 0), gate("x", 0)]], [0])


def test_circuit_rejects_bad_measured():
    with pytest.raises(DimensionError):
        Circuit(2, [], [0, 0])
    with pytest.raises(DimensionError):
        Circuit(2, [], [2])


# ----------------------------------------------------------------------
# density evolution
# ----------------------------------------------------------------------

def test_x_gate_flips_ground_state():
    rho = apply_gate_density(zero_density(1), gate("x", 0), 1)
    assert rho[1, 1] == pytest.approx(1.0)


def test_double_hadamard_is_identity():
    rho = _random_density(2, 1)
    out = apply_gate_density(apply_gate_density(rho, gate("h", 1), 2), gate("h", 1), 2)
    assert np.max(np.abs(out - rho)) <= 1e-12


def test_cnot_on_basis_state():
    c = Circuit(2, [[gate("x", 0)], [gate("cnot", 0, 1)]], [0, 1])
    _, out = run_circuit_density(c, NoiseModel())
    assert out.as_dict()["11"] == pytest.approx(1.0)


def test_depolarizing_zero_rate_is_identity():
    rho = _random_density(2, 2)
    assert np.array_equal(apply_depolarizing(rho, [0], 0.0, 2), rho)


def test_depolarizing_full_rate_gives_maximally_mixed():
    rho = apply_depolarizing(zero_density(1), [0], 1.0, 1)
    assert np.allclose(rho, np.eye(2) / 2)
    out = measurement_distribution(rho, [0], 1)
    assert np.allclose(out.probs, [0.5, 0.5])


def test_depolarizing_composition_rule():
    rho = _random_density(2, 3)
    a = apply_depolarizing(apply_depolarizing(rho, [1], 0.3, 2), [1], 0.4, 2)
    b = apply_depolarizing(rho, [1], 1 - 0.7 * 0.6, 2)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_channels_preserve_density_properties():
    rho = _random_density(3, 4)
    rho = apply_gate_density(rho, gate("cnot", 0, 2), 3)
    rho = apply_depolarizing(rho, [0, 1], 0.37, 3)
    report = check_density(rho)
    assert report["ok"], report


def test_cat_circuit_noiseless():
    _, out = run_circuit_density(cat_circuit(), NoiseModel())
    d = out.as_dict()
    assert d["00"] == pytest.approx(0.5, abs=1e-12)
    assert d["11"] == pytest.approx(0.5, abs=1e-12)
    assert d["01"] == pytest.approx(0.0, abs=1e-12)


def test_noisy_cat_closed_form():
    _, out = run_circuit_density(cat_circuit(), NoiseModel(t_gate=0.2))
    assert np.max(np.abs(out.probs - [0.45, 0.05, 0.05, 0.45])) <= 1e-10


def test_zero_cycle_circuit_is_point_mass():
    _, out = run_circuit_density(Circuit(3, [], [0, 1, 2]), NoiseModel(t_qubit=0.9))
    assert out.as_dict()["000"] == pytest.approx(1.0)


def test_measured_qubit_order_controls_bit_order():
    c = Circuit(2, [[gate("x", 0)]], [1, 0])
    _, out = run_circuit_density(c, NoiseModel())
    assert out.as_dict()["01"] == pytest.approx(1.0)


def test_density_qubit_cap():
    with pytest.raises(SizeCapError):
        run_circuit_density(Circuit(11, [], [0]), NoiseModel())


# ----------------------------------------------------------------------
# trajectories
# ----------------------------------------------------------------------

def test_trajectories_zero_noise_match_density_exactly():
    circ = random_circuit(3, 2, RandomSource(5))
    emp, rec = run_circuit_trajectories(circ, NoiseModel(), 50, RandomSource(6))
    _, dens = run_circuit_density(circ, NoiseModel())
    assert np.max(np.abs(emp.probs - dens.probs)) <= 1e-10
    assert rec.n_events == 0


def test_trajectories_converge_to_density_under_noise():
    noise = NoiseModel(t_gate=0.1, t_qubit=0.05)
    emp, _ = run_circuit_trajectories(cat_circuit(), noise, 30000, RandomSource(7))
    _, dens = run_circuit_density(cat_circuit(), noise)
    assert total_variation(emp, dens) < 0.01


def test_trajectories_seed_deterministic():
    circ = random_circuit(4, 3, RandomSource(8))
    noise = NoiseModel(t_gate=0.1, t_qubit=0.02)
    a, rec_a = run_circuit_trajectories(circ, noise, 3000, RandomSource(9))
    b, rec_b = run_circuit_trajectories(circ, noise, 3000, RandomSource(9))
    assert np.array_equal(a.probs, b.probs)
    assert np.array_equal(rec_a.shot, rec_b.shot)
    assert np.array_equal(rec_a.qubits, rec_b.qubits)


def test_trajectory_records_structure():
    noise = NoiseModel(t_gate=0.5)
    _, rec = run_circuit_trajectories(cat_circuit(), noise, 500, RandomSource(10))
    assert rec.n_events > 0
    assert rec.cycle.max() <= 1
    hits = rec.hit_matrix()
    assert hits.shape == (500, 2)
    ev = rec.events_for_shot(int(rec.shot[0]))
    assert ev and ev[0][2] == "gate"


def test_trajectory_qubit_cap():
    with pytest.raises(SizeCapError):
        ShotBatch(21, 4)


def test_shotbatch_measure_collapses_cat():
    batch = ShotBatch(2, 2000)
    batch.apply_gate(gate("h", 0))
    batch.apply_gate(gate("cnot", 0, 1))
    bits = batch.measure((0, 1), RandomSource(11).generator)
    assert np.array_equal(bits[:, 0], bits[:, 1])  # perfectly correlated
    frac = bits[:, 0].mean()
    assert 0.45 < frac < 0.55
    again = batch.measure((0, 1), RandomSource(12).generator)
    assert np.array_equal(bits, again)  # collapsed state is definite


def test_shotbatch_masked_gate():
    batch = ShotBatch(1, 4)
    mask = np.array([True, False, True, False])
    batch.apply_gate(gate("x", 0), mask)
    probs = batch.outcome_probs((0,))
    assert np.allclose(probs[:, 1], [1, 0, 1, 0])


# ----------------------------------------------------------------------
# random circuits and serialization
# ----------------------------------------------------------------------

def test_random_circuit_depth_zero_is_empty():
    c = random_circuit(4, 0, RandomSource(13))
    assert c.n_cycles == 0
    assert c.measured == [0, 1, 2, 3]


def test_random_circuit_structure():
    c = random_circuit(4, 3, RandomSource(14))
    assert c.n_cycles == 6
    for i, cyc in enumerate(c.cycles):
        if i % 2 == 0:
            assert len(cyc) == 4 and all(len(g.targets) == 1 for g in cyc)
        else:
            assert len(cyc) <= 2 and all(g.name == "cz" for g in cyc)


def test_random_circuit_deterministic():
    a = random_circuit(4, 3, RandomSource(15))
    b = random_circuit(4, 3, RandomSource(15))
    for ca, cb in zip(a.cycles, b.cycles):
        for ga, gb in zip(ca, cb):
            assert ga.targets == gb.targets
            assert np.array_equal(ga.matrix, gb.matrix)


def test_cz_brickwork_alternates_offsets():
    c = cz_brickwork(6, 2)
    assert [g.targets for g in c.cycles[0]] == [(0, 1), (2, 3), (4, 5)]
    assert [g.targets for g in c.cycles[1]] == [(1, 2), (3, 4)]


def test_circuit_json_round_trip():
    c = random_circuit(3, 2, RandomSource(16))
    back = circuit_from_json(circuit_to_json(c))
    _, o1 = run_circuit_density(c, NoiseModel())
    _, o2 = run_circuit_density(back, NoiseModel())
    assert np.array_equal(o1.probs, o2.probs)
    payload = json.loads(circuit_to_json(c))
    assert payload["n_qubits"] == 3
    assert "matrix" in payload["cycles"][0][0]  # haar gates carry matrices
    assert "matrix" not in json.loads(circuit_to_json(cat_circuit()))["cycles"][0][0]


def test_noise_json_round_trip():
    nm = NoiseModel(t_qubit=0.1, t_gate=0.2, jitter=0.5)
    back = noise_from_json(noise_to_json(nm))
    assert back == nm


def test_noise_model_validation():
    with pytest.raises(PreconditionError):
        NoiseModel(t_qubit=1.5)
    with pytest.raises(PreconditionError):
        NoiseModel(jitter=-0.1)


def test_bitstrings_order():
    assert bitstrings(2) == ["00", "01", "10", "11"]
