"""Release-gate checks: every acceptance criterion, runnable as one suite.

Each check pins its seed, tolerance, and scale, measures the quantity it
gates, and reports a pass/fail line with the measured values.  ``lab
validate`` runs all of them and exits nonzero on any failure; the pytest
acceptance module runs the same functions one test per check.
"""

from __future__ import annotations

import hashlib
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from nisqlab import boolfn, boson, circuit_stats, linalg, noisy_boson, qsim
from nisqlab.experiments import ExperimentConfig, run_experiment
from nisqlab.rng import RandomSource

VALIDATE_TIME_BUDGET = 20 * 60.0  # seconds, whole-suite bound


@dataclass
class CheckResult:
    check_id: int
    name: str
    passed: bool
    details: str
    elapsed: float


def _check_permanent_oracle():
    rng = RandomSource(101)
    g = rng.generator
    worst = 0.0
    start = time.perf_counter()
    for n in range(2, 8):
        for _ in range(100):
            a = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
            pr = linalg.permanent_ryser(a)
            pn = linalg.permanent_naive(a)
            worst = max(worst, abs(pr - pn) / max(1.0, abs(pn)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    return ok, f"max rel err {worst:.3e} <= 1e-9 over 600 matrices, {elapsed:.2f}s < 5s"


def _haar_inputs():
    cases = []
    for i, (n, m) in enumerate([(2, 4), (3, 6), (4, 8)]):
        for j in range(20):
            cases.append((n, m, linalg.haar_orthonormal_rows(n, m, RandomSource(500 + i, j))))
    return cases


def _check_boson_normalization():
    worst = 0.0
    for n, m, a in _haar_inputs():
        d = boson.boson_distribution(a)
        worst = max(worst, abs(d.total - 1.0))
    return worst <= 1e-8, f"max |sum p - 1| = {worst:.3e} <= 1e-8 over 60 Haar inputs"


def _check_fermion_cauchy_binet():
    worst = 0.0
    for n, m, a in _haar_inputs():
        d = boson.fermion_distribution(a)
        worst = max(worst, abs(d.total - 1.0))
    return worst <= 1e-10, f"max |sum p - 1| = {worst:.3e} <= 1e-10 over 60 Haar inputs"


def _check_hong_ou_mandel():
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)
    d = boson.boson_distribution(h).as_dict()
    mixed = d[(1, 1)]
    b20 = abs(d[(2, 0)] - 0.5)
    b02 = abs(d[(0, 2)] - 0.5)
    ok = mixed <= 1e-12 and b20 <= 1e-12 and b02 <= 1e-12
    return ok, (
        f"P(1,1)={mixed:.2e} <= 1e-12, |P(2,0)-1/2|={b20:.2e}, |P(0,2)-1/2|={b02:.2e}"
    )


def _check_mean_attenuation():
    n, m = 3, 9
    outcomes = boson.enumerate_boson_outcomes(n, m)
    lines = []
    ok = True
    for pair, src in enumerate(RandomSource(777).split(5)):
        rng_a, rng_s, rng_mc = src.split(3)
        a = linalg.haar_orthonormal_rows(n, m, rng_a)
        occ = outcomes[int(rng_s.generator.integers(len(outcomes)))]
        for t in (0.1, 0.3, 0.7):
            est, target, se = noisy_boson.mean_attenuation_check(a, occ, t, 100000, rng_mc)
            gap = abs(est - target)
            ok = ok and gap <= 3.0 * se
            lines.append(f"pair{pair} t={t}: gap={gap:.2e} vs 3se={3 * se:.2e}")
    return ok, "; ".join(lines[:6]) + (" ..." if len(lines) > 6 else "")


def _check_noise_semigroup():
    a = linalg.haar_orthonormal_rows(2, 3, RandomSource(888))
    cfg = noisy_boson.NoisyConfig(t=0.2, mc_samples=100000)
    two, one = noisy_boson.noise_semigroup_check(a, 0.2, 0.2, cfg, RandomSource(889))
    gaps = np.abs(two.probs - one.probs)
    limits = 3.0 * np.hypot(two.std_errs, one.std_errs)
    worst = float(np.max(gaps - limits))
    combined = noisy_boson.combined_rate(0.2, 0.2)
    ok = bool(np.all(gaps <= limits))
    return ok, (
        f"combined t={combined:.4f}; worst (gap - 3se) = {worst:.3e} "
        f"over {gaps.size} outcomes (negative = pass)"
    )


def _check_theorem3_trend():
    rows_t = noisy_boson.correlation_decay_curve([4], [0.1, 0.3, 0.5, 0.8], 20000, RandomSource(2026))
    rows_n = noisy_boson.correlation_decay_curve([2, 3, 4, 5], [0.3], 20000, RandomSource(2027))

    def strictly_decreasing(rows):
        msgs, ok = [], True
        for a, b in zip(rows, rows[1:]):
            gap = a.corr - b.corr
            need = 3.0 * math.hypot(a.std_err, b.std_err)
            ok = ok and gap > need
            msgs.append(f"{gap:.4f}>{need:.4f}")
        return ok, msgs

    ok_t, msg_t = strictly_decreasing(rows_t)
    ok_n, msg_n = strictly_decreasing(rows_n)
    return ok_t and ok_n, (
        "t-sweep gaps vs 3se: " + ", ".join(msg_t) + "; n-sweep: " + ", ".join(msg_n)
    )


def _check_boolean_exactness():
    worst_par = 0.0
    rhos = [round(0.1 * i, 1) for i in range(1, 10)]
    for n in range(1, 11):
        f = boolfn.make_parity(n)
        for rho in rhos:
            worst_par = max(worst_par, abs(boolfn.noise_stability(f, rho) - rho ** n))
    maj3 = boolfn.make_majority(3)
    worst_maj = 0.0
    for rho in rhos:
        worst_maj = max(
            worst_maj, abs(boolfn.noise_stability(maj3, rho) - (3 * rho + rho ** 3) / 4)
        )
    emp_ok = True
    worst_sigma = 0.0
    rng = RandomSource(31415)
    for label, f in (("maj3", maj3), ("parity5", boolfn.make_parity(5))):
        for rho in rhos:
            est, se = boolfn.empirical_stability(f, rho, 10 ** 6, rng)
            sig = abs(est - boolfn.noise_stability(f, rho)) / se
            worst_sigma = max(worst_sigma, sig)
            emp_ok = emp_ok and sig <= 3.0
    ok = worst_par <= 1e-12 and worst_maj <= 1e-12 and emp_ok
    return ok, (
        f"parity err {worst_par:.2e} <= 1e-12, maj3 err {worst_maj:.2e} <= 1e-12, "
        f"empirical worst {worst_sigma:.2f} sigma <= 3 at 1e6 shots"
    )


def _check_operator_semigroup():
    g = RandomSource(161).generator
    worst = 0.0
    for _ in range(50):
        table = np.where(g.random(1 << 10) < 0.5, 1.0, -1.0)
        spec = boolfn.walsh_transform(boolfn.BooleanFunction(10, table))
        r1, r2 = g.uniform(-1, 1, size=2)
        a = boolfn.noise_operator(boolfn.noise_operator(spec, r1), r2)
        b = boolfn.noise_operator(spec, r1 * r2)
        worst = max(worst, float(np.max(np.abs(a.coeffs - b.coeffs))))
    return worst <= 1e-10, f"max coefficient gap {worst:.3e} <= 1e-10 over 50 random n=10 functions"


def _check_repetition_decoding():
    exact = boolfn.repetition_majority_logical_error(5, 0.1)
    analytic_gap = abs(exact - 0.00856)
    est, se = boolfn.repetition_majority_mc(5, 0.1, 10 ** 6, RandomSource(271))
    mc_sigma = abs(est - exact) / se
    gain_ok = all(
        boolfn.repetition_majority_logical_error(length, p) < p
        for length in (3, 5, 7)
        for p in (0.05, 0.1, 0.2)
    )
    ok = analytic_gap <= 1e-10 and mc_sigma <= 3.0 and gain_ok
    return ok, (
        f"|exact - 0.00856| = {analytic_gap:.2e} <= 1e-10, MC at {mc_sigma:.2f} sigma, "
        f"logical < physical on the full (L, p) grid: {gain_ok}"
    )


def _check_trajectory_density():
    noise = qsim.NoiseModel(t_qubit=0.05, t_gate=0.05)
    msgs, ok = [], True
    for label, circ, seed in (
        ("cat", qsim.cat_circuit(), 901),
        ("random n=6 depth=6", qsim.random_circuit(6, 6, RandomSource(123)), 902),
    ):
        emp, _ = qsim.run_circuit_trajectories(circ, noise, 100000, RandomSource(seed))
        _, dens = qsim.run_circuit_density(circ, noise)
        tvd = noisy_boson.total_variation(emp, dens)
        ok = ok and tvd < 0.01
        msgs.append(f"{label}: TVD={tvd:.5f} < 0.01")
    return ok, "; ".join(msgs)


def _check_noisy_cat_closed_form():
    _, out = qsim.run_circuit_density(qsim.cat_circuit(), qsim.NoiseModel(t_gate=0.2))
    target = np.array([0.45, 0.05, 0.05, 0.45])
    worst = float(np.max(np.abs(out.probs - target)))
    return worst <= 1e-10, f"max |p - (0.45,0.05,0.05,0.45)| = {worst:.2e} <= 1e-10"


def _check_cat_error_correlation():
    noise = qsim.NoiseModel(t_gate=0.1, t_qubit=0.02)
    _, rec = qsim.run_circuit_trajectories(qsim.cat_circuit(), noise, 100000, RandomSource(4242))
    r, (lo, hi) = circuit_stats.error_correlation(rec, (0, 1))
    return lo > 0.0, f"pearson={r:.4f}, 95% CI=({lo:.4f}, {hi:.4f}), lower bound > 0"


def _check_error_synchronization():
    circ = qsim.cz_brickwork(6, 4)
    _, rec_gate = qsim.run_circuit_trajectories(
        circ, qsim.NoiseModel(t_gate=0.1), 100000, RandomSource(1717)
    )
    s_gate = circuit_stats.error_synchronization_stats(rec_gate, 6, rng=RandomSource(1718))
    _, rec_q = qsim.run_circuit_trajectories(
        circ, qsim.NoiseModel(t_qubit=0.05), 100000, RandomSource(1719)
    )
    s_q = circuit_stats.error_synchronization_stats(rec_q, 6, rng=RandomSource(1720))
    gate_ok = s_gate.ratio > 1.0 + 3.0 * s_gate.ratio_std_err
    indep_ok = abs(s_q.ratio - 1.0) <= 3.0 * s_q.ratio_std_err
    return gate_ok and indep_ok, (
        f"gate-dominated ratio {s_gate.ratio:.3f} > 1 + {3 * s_gate.ratio_std_err:.4f}; "
        f"independent ratio {s_q.ratio:.3f} within {3 * s_q.ratio_std_err:.4f} of 1"
    )


def _check_fourier_profile_trend():
    circ = qsim.random_circuit(8, 12, RandomSource(1500))
    masses = {}
    for t in (0.02, 0.2):
        _, out = qsim.run_circuit_density(circ, qsim.NoiseModel(t_qubit=t, t_gate=t))
        masses[t] = circuit_stats.output_fourier_profile(out).mass_above(4)
    ok = masses[0.2] < masses[0.02]
    return ok, (
        f"relative mass above degree 4: {masses[0.2]:.4f} at t=0.2 < "
        f"{masses[0.02]:.4f} at t=0.02"
    )


def _check_chaos_probe():
    rng_circ, rng_probe = RandomSource(4).split(2)
    circ = qsim.random_circuit(6, 28, rng_circ)
    noise = qsim.NoiseModel(t_qubit=0.05, t_gate=0.05, jitter=0.5)
    res = circuit_stats.chaos_probe(circ, noise, 20, rng_probe)
    jitter_ok = res.cross_corr_mean < 1.0 - 3.0 * res.cross_corr_std
    res0 = circuit_stats.chaos_probe(
        circ, qsim.NoiseModel(t_qubit=0.05, t_gate=0.05, jitter=0.0), 5, RandomSource(5)
    )
    zero_ok = abs(res0.cross_corr_mean - 1.0) <= 1e-10
    return jitter_ok and zero_ok, (
        f"r=0.5: mean={res.cross_corr_mean:.4f} < 1 - 3*{res.cross_corr_std:.4f}; "
        f"r=0: mean={res0.cross_corr_mean:.12f} = 1 within 1e-10"
    )


def _check_determinism():
    cfg_params = {"shots": 20000, "seed": 2}
    digests = []
    elapsed0 = time.perf_counter()
    for run in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            run_experiment(
                ExperimentConfig("cat-error-correlation", dict(cfg_params), tmp)
            )
            data = (Path(tmp) / "cat-error-correlation.csv").read_bytes()
            digests.append(hashlib.sha256(data).hexdigest())
    ok = digests[0] == digests[1]
    elapsed = time.perf_counter() - elapsed0
    return ok, (
        f"two runs of cat-error-correlation: digests "
        f"{'match' if ok else 'DIFFER'} ({digests[0][:12]}..), {elapsed:.1f}s"
    )


CHECKS = [
    (1, "permanent-oracle", "inclusion-exclusion permanent equals the n!-term sum", _check_permanent_oracle),
    (2, "boson-normalization", "squared-permanent weights form a distribution", _check_boson_normalization),
    (3, "fermion-cauchy-binet", "squared determinants sum to 1 exactly", _check_fermion_cauchy_binet),
    (4, "hong-ou-mandel", "balanced two-photon splitter never splits the pair", _check_hong_ou_mandel),
    (5, "mean-attenuation", "Gaussian mixing contracts the mean permanent by (1-t)^(n/2)", _check_mean_attenuation),
    (6, "noise-semigroup", "two mixing stages compose to one combined rate", _check_noise_semigroup),
    (7, "correlation-decay-trend", "ideal/noisy correlation falls with n and with t", _check_theorem3_trend),
    (8, "boolean-exactness", "stability closed forms for parity and majority", _check_boolean_exactness),
    (9, "operator-semigroup", "attenuation operators compose multiplicatively", _check_operator_semigroup),
    (10, "repetition-decoding", "majority decoding beats the bare bit below 1/2", _check_repetition_decoding),
    (11, "trajectory-density-consistency", "trajectory average reproduces the exact channel", _check_trajectory_density),
    (12, "noisy-cat-closed-form", "gate-depolarized cat output matches its closed form", _check_noisy_cat_closed_form),
    (13, "cat-error-correlation", "cat-state qubits see positively correlated errors", _check_cat_error_correlation),
    (14, "error-synchronization", "joint gate errors give super-binomial count spread", _check_error_synchronization),
    (15, "fourier-profile-trend", "more noise concentrates output Walsh mass at low degree", _check_fourier_profile_trend),
    (16, "chaos-probe", "low-noise outputs decorrelate under rate jitter", _check_chaos_probe),
    (17, "run-determinism", "identical configs give byte-identical data files", _check_determinism),
]

CHECK_IDS = [cid for cid, _, _, _ in CHECKS]


def run_check(check_id: int) -> CheckResult:
    for cid, name, _anchor, fn in CHECKS:
        if cid == check_id:
            start = time.perf_counter()
            passed, details = fn()
            return CheckResult(cid, name, passed, details, time.perf_counter() - start)
    raise KeyError(f"no acceptance check with id {check_id}")


def validate_suite(stream=None) -> tuple[list[CheckResult], bool]:
    """Run every acceptance check; print one line per check and a summary."""
    import sys

    out = stream if stream is not None else sys.stdout
    results = []
    suite_start = time.perf_counter()
    for cid, name, anchor, fn in CHECKS:
        start = time.perf_counter()
        try:
            passed, details = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, details = False, f"raised {type(exc).__name__}: {exc}"
        res = CheckResult(cid, name, passed, details, time.perf_counter() - start)
        results.append(res)
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag} [{cid:2d}] {name} ({res.elapsed:.1f}s)", file=out)
        print(f"          claim: {anchor}", file=out)
        print(f"          {details}", file=out)
    total = time.perf_counter() - suite_start
    in_budget = total < VALIDATE_TIME_BUDGET
    all_passed = all(r.passed for r in results) and in_budget
    print(
        f"{'PASS' if all_passed else 'FAIL'} total: "
        f"{sum(r.passed for r in results)}/{len(results)} checks, "
        f"{total:.1f}s (budget {VALIDATE_TIME_BUDGET:.0f}s)",
        file=out,
    )
    return results, all_passed
