"""Output-distribution and error statistics for noisy circuits.

These are the measurable witnesses used by the experiment harness: how far
the noisy output law sits from the ideal one, how its Walsh mass spreads
over degrees, how sensitive it is to noise-parameter jitter, and how
correlated / synchronized the per-shot noise firings are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from nisqlab.boolfn import BooleanFunction, DegreeProfile, degree_profile, walsh_transform
from nisqlab.boson import OutcomeDistribution
from nisqlab.errors import DimensionError, PreconditionError, UndefinedStatisticError
from nisqlab.noisy_boson import distribution_correlation, total_variation
from nisqlab.qsim import Circuit, ErrorRecords, NoiseModel, bitstrings, run_circuit_density
from nisqlab.rng import RandomSource


def ideal_vs_noisy_correlation(circ: Circuit, noise: NoiseModel) -> tuple[float, float]:
    """(Pearson correlation, total-variation distance) between the noiseless
    and noisy output distributions of the circuit."""
    _, ideal = run_circuit_density(circ, NoiseModel())
    _, noisy = run_circuit_density(circ, noise)
    return distribution_correlation(ideal, noisy), total_variation(ideal, noisy)


def output_fourier_profile(out: OutcomeDistribution) -> DegreeProfile:
    """Degree decomposition of the output law viewed as a function on {0,1}^k.

    Walsh-transforms the probability vector and reports the per-degree mass
    of the non-constant part, normalized by the total non-constant mass.
    A uniform input has no non-constant part; the profile is returned all
    zero with ``degenerate`` set.
    """
    size = len(out.outcomes)
    k = size.bit_length() - 1
    if (1 << k) != size or out.outcomes != bitstrings(k):
        raise DimensionError("profile requires the complete ordered set of k-bit outcomes")
    spec = walsh_transform(BooleanFunction(k, out.probs))
    profile = degree_profile(spec)
    masses = profile.masses.copy()
    masses[0] = 0.0
    nonconst = masses.sum()
    if nonconst <= 1e-30:
        return DegreeProfile(np.zeros(k + 1), degenerate=True)
    return DegreeProfile(masses / nonconst)


# ----------------------------------------------------------------------
# Chaos probe: sensitivity of the output law to noise-parameter jitter
# ----------------------------------------------------------------------

@dataclass
class ChaosResult:
    self_corr: float
    cross_corr_mean: float
    cross_corr_std: float
    cross_corr_spread: float
    trial_rates: list[tuple[float, float]]
    pair_corrs: np.ndarray


def chaos_probe(
    circ: Circuit, noise: NoiseModel, trials: int, rng: RandomSource
) -> ChaosResult:
    """Output correlations across lognormal perturbations of the noise rates.

    Each trial multiplies t_qubit and t_gate by independent lognormal
    factors with mean 1 and relative spread ``noise.jitter``, then computes
    the exact output law.  ``cross_corr_mean`` averages the correlations
    over all trial pairs; ``cross_corr_std`` is its delete-one-trial
    jackknife standard error (pairs sharing a trial are dependent, so a
    plain std over pairs would not be an uncertainty for the mean), and
    ``cross_corr_spread`` is the population std of the pair correlations.
    ``self_corr`` recomputes each trial and correlates it with itself, a
    consistency check that must give 1.
    """
    r = noise.jitter
    if trials < 2:
        raise PreconditionError(f"need at least 2 trials, got {trials}")
    sigma = math.sqrt(math.log1p(r * r))
    g = rng.generator
    dists = []
    rates = []
    self_corrs = []
    for _ in range(trials):
        if sigma > 0.0:
            fq, fg = np.exp(sigma * g.standard_normal(2) - sigma * sigma / 2.0)
        else:
            fq = fg = 1.0
        tq = min(noise.t_qubit * fq, 1.0)
        tg = min(noise.t_gate * fg, 1.0)
        rates.append((float(tq), float(tg)))
        nm = NoiseModel(t_qubit=tq, t_gate=tg)
        _, out = run_circuit_density(circ, nm)
        _, again = run_circuit_density(circ, nm)
        self_corrs.append(distribution_correlation(out, again))
        dists.append(out)

    pair_mat = np.eye(trials)
    for i in range(trials):
        for j in range(i + 1, trials):
            c = distribution_correlation(dists[i], dists[j])
            pair_mat[i, j] = pair_mat[j, i] = c
    iu = np.triu_indices(trials, 1)
    pairs = pair_mat[iu]

    jack = np.empty(trials)
    for i in range(trials):
        keep = np.array([k for k in range(trials) if k != i])
        sub = pair_mat[np.ix_(keep, keep)]
        jack[i] = sub[np.triu_indices(trials - 1, 1)].mean()
    se = math.sqrt((trials - 1) / trials * float(np.sum((jack - jack.mean()) ** 2)))

    return ChaosResult(
        self_corr=float(np.mean(self_corrs)),
        cross_corr_mean=float(pairs.mean()),
        cross_corr_std=se,
        cross_corr_spread=float(pairs.std(ddof=1)) if pairs.size > 1 else 0.0,
        trial_rates=rates,
        pair_corrs=pairs,
    )


# ----------------------------------------------------------------------
# Error-record statistics
# ----------------------------------------------------------------------

def error_correlation(
    records: ErrorRecords, qubit_pair: tuple[int, int]
) -> tuple[float, tuple[float, float]]:
    """Pearson correlation of the per-shot hit indicators of two qubits.

    A qubit counts as hit when any noise event touched it during the shot.
    Returns (r, 95% CI) with the Fisher-z normal approximation; zero
    variance in either indicator raises UndefinedStatisticError.
    """
    if records.n_events == 0:
        raise UndefinedStatisticError("no noise events recorded")
    qa, qb = qubit_pair
    hits = records.hit_matrix()
    x = hits[:, qa].astype(np.float64)
    y = hits[:, qb].astype(np.float64)
    if x.std() == 0.0 or y.std() == 0.0:
        raise UndefinedStatisticError(
            f"hit indicator of qubit pair ({qa}, {qb}) has zero variance"
        )
    r = float(np.corrcoef(x, y)[0, 1])
    n = x.size
    if abs(r) >= 1.0 or n <= 3:
        return r, (r, r)
    z = math.atanh(r)
    half = 1.959963984540054 / math.sqrt(n - 3)
    return r, (math.tanh(z - half), math.tanh(z + half))


@dataclass
class SyncStats:
    """Per-shot distinct-qubit error-count fluctuation statistics."""

    mean: float
    std: float
    binomial_std: float
    ratio: float
    ratio_std_err: float
    tail: list[tuple[int, float]]


def error_synchronization_stats(
    records: ErrorRecords,
    n_qubits: int,
    bootstrap: int = 200,
    rng: RandomSource | None = None,
) -> SyncStats:
    """Fluctuation of the per-shot count of distinct qubits hit.

    The baseline is the independent Poisson-binomial matched to each
    qubit's empirical marginal hit rate: under independent per-qubit noise
    the ratio std/binomial_std is 1, while jointly firing multi-qubit
    events push it above 1.  ``ratio_std_err`` comes from a Poisson
    bootstrap over shots.
    """
    if records.n_shots < 2:
        raise PreconditionError("need at least 2 shots")
    hits = records.hit_matrix().astype(np.float64)
    counts = hits.sum(axis=1)
    mean = float(counts.mean())
    std = float(counts.std(ddof=1))
    marg = hits.mean(axis=0)
    binom_std = float(np.sqrt(np.sum(marg * (1.0 - marg))))
    tail = [
        (theta, float(np.mean(counts >= theta))) for theta in range(n_qubits + 1)
    ]
    if binom_std == 0.0:
        return SyncStats(mean, std, binom_std, float("nan"), float("nan"), tail)

    src = rng if rng is not None else RandomSource(0x5C4B)
    g = src.generator
    n = counts.size
    ratios = np.empty(bootstrap)
    c2 = counts * counts
    for b in range(bootstrap):
        w = g.poisson(1.0, size=n).astype(np.float64)
        tot = w.sum()
        if tot < 2:
            ratios[b] = np.nan
            continue
        mu = float(w @ counts) / tot
        var = float(w @ c2) / tot - mu * mu
        pm = (w @ hits) / tot
        base = float(np.sum(pm * (1.0 - pm)))
        ratios[b] = np.sqrt(max(var, 0.0) / base) if base > 0 else np.nan
    ok = np.isfinite(ratios)
    se = float(np.std(ratios[ok], ddof=1)) if ok.sum() > 1 else float("nan")
    return SyncStats(mean, std, binom_std, std / binom_std, se, tail)
