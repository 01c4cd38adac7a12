"""Gaussian-mixing noisy boson sampling and its witness statistics.

The noise model replaces the orthonormal-row input A by
sqrt(1-t) A + sqrt(t) G with G an i.i.d. complex Gaussian matrix whose
expected squared row norm is 1, and averages the (per-draw renormalized)
boson-sampling distributions over G.  The statistics below measure the two
desk-scale signatures of that model: the mean of Per(M_S) contracts by
(1-t)^{n/2}, and the correlation between the averaged noisy distribution
and the ideal one decays as n or t grows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from nisqlab._kernels import forms_mc_sweep
from nisqlab.boson import (
    OutcomeDistribution,
    _mode_index,
    boson_distribution,
    boson_submatrix,
    enumerate_boson_outcomes,
)
from nisqlab.errors import DimensionError, PreconditionError
from nisqlab.linalg import (
    as_matrix,
    gaussian_matrix_batch,
    orthonormality_defect,
    permanent_batch,
    permanent_ryser,
)
from nisqlab.rng import RandomSource

BOOTSTRAP_RESAMPLES = 200
DEFAULT_BATCHES = 100


def _check_rate(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise PreconditionError(f"noise rate must lie in [0, 1], got {t}")
    return t


@dataclass
class NoisyConfig:
    """Monte Carlo settings for the noisy sampling estimators."""

    t: float
    mc_samples: int
    seed: int | None = None

    def __post_init__(self):
        _check_rate(self.t)
        if self.mc_samples < 1:
            raise PreconditionError(f"mc_samples must be >= 1, got {self.mc_samples}")

    def source(self, rng: RandomSource | None) -> RandomSource:
        if rng is not None:
            return rng
        if self.seed is None:
            raise PreconditionError("either cfg.seed or an explicit RandomSource is required")
        return RandomSource(self.seed)


def mix_matrix(a, g, t: float) -> np.ndarray:
    """Entrywise sqrt(1-t) A + sqrt(t) G."""
    t = _check_rate(t)
    a = as_matrix(a)
    g = as_matrix(g)
    if a.shape != g.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {g.shape}")
    return math.sqrt(1.0 - t) * a + math.sqrt(t) * g


# ----------------------------------------------------------------------
# Monte Carlo core
# ----------------------------------------------------------------------

def _chunk_size(n_outcomes: int) -> int:
    # keep the (chunk x modes) draw buffers and DP state modest
    return max(1, min(4_000_000 // max(n_outcomes, 1), 5000))


def _mc_average(a, draw_batch, mc_samples, rng, n_batches=DEFAULT_BATCHES):
    """Average per-draw renormalized boson distributions over noise draws.

    ``draw_batch(b, rng)`` yields a (b, n, m) stack of mixed matrices.
    Returns (mean, std_err, batch_means, used, skipped); ``batch_means``
    partitions the draws into ``n_batches`` contiguous groups for bootstrap
    error bars downstream.
    """
    a = as_matrix(a)
    n, m = a.shape
    index = _mode_index(n, m)
    n_out = int(index.sizes[n])
    n_batches = min(n_batches, mc_samples)

    sum_p = np.zeros(n_out)
    sum_p2 = np.zeros(n_out)
    batch_sums = np.zeros((n_batches, n_out))
    batch_counts = np.zeros(n_batches, dtype=np.int64)
    skipped = 0

    chunk = _chunk_size(n_out)
    done = 0
    while done < mc_samples:
        b = min(chunk, mc_samples - done)
        ms = np.ascontiguousarray(draw_batch(b, rng))
        buckets = np.minimum(
            (done + np.arange(b, dtype=np.int64)) * n_batches // mc_samples,
            n_batches - 1,
        )
        skipped += int(
            forms_mc_sweep(
                ms,
                index.maps_flat,
                index.offsets,
                index.sizes,
                index.fact,
                sum_p,
                sum_p2,
                batch_sums,
                batch_counts,
                buckets,
            )
        )
        done += b

    used = mc_samples - skipped
    if used == 0:
        raise ArithmeticError("every noise draw produced a degenerate distribution")
    mean = sum_p / used
    var = np.maximum(sum_p2 / used - mean ** 2, 0.0)
    std_err = np.sqrt(var / used)
    nonempty = batch_counts > 0
    batch_means = batch_sums[nonempty] / batch_counts[nonempty, None]
    return mean, std_err, batch_means, used, skipped


def noisy_boson_distribution(
    a, cfg: NoisyConfig, rng: RandomSource | None = None
) -> OutcomeDistribution:
    """Monte Carlo average over G of the renormalized mixed-matrix law.

    Each draw's distribution is renormalized over the full outcome set
    before averaging (the mixed matrix is not row-orthonormal, so the raw
    weights do not sum to 1 on their own)."""
    a = as_matrix(a)
    if orthonormality_defect(a) > 1e-8:
        raise PreconditionError("input rows must be orthonormal within 1e-8")
    n, m = a.shape
    src = cfg.source(rng)
    sa = math.sqrt(1.0 - cfg.t)
    sg = math.sqrt(cfg.t)

    def draw(b, r):
        return sa * a[None, :, :] + sg * gaussian_matrix_batch(b, n, m, r)

    mean, std_err, _, _, _ = _mc_average(a, draw, cfg.mc_samples, src)
    return OutcomeDistribution(enumerate_boson_outcomes(n, m), mean, std_errs=std_err)


# ----------------------------------------------------------------------
# Distribution comparison
# ----------------------------------------------------------------------

def _check_same_outcomes(p: OutcomeDistribution, q: OutcomeDistribution):
    if p.outcomes != q.outcomes:
        raise KeyError("distributions are over different outcome sets or orders")


def _is_constant(v: np.ndarray) -> bool:
    return np.ptp(v) <= 1e-13 * max(1.0, float(np.abs(v).max(initial=0.0)))


def distribution_correlation(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    """Pearson correlation of the two probability vectors.

    Both vectors are centered by their means; a constant vector has zero
    variance, for which the correlation is defined to be 0.
    """
    _check_same_outcomes(p, q)
    return _vector_correlation(p.probs, q.probs)


def _vector_correlation(x: np.ndarray, y: np.ndarray) -> float:
    if _is_constant(x) or _is_constant(y):
        return 0.0
    xc = x - x.mean()
    yc = y - y.mean()
    return float(np.dot(xc, yc) / (np.linalg.norm(xc) * np.linalg.norm(yc)))


def total_variation(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    """Total-variation distance, 0.5 * sum |p - q|."""
    _check_same_outcomes(p, q)
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


# ----------------------------------------------------------------------
# Mean attenuation (exponential contraction of the permanent's mean)
# ----------------------------------------------------------------------

def mean_attenuation_check(
    a, occupation, t: float, mc_samples: int, rng: RandomSource
) -> tuple[complex, complex, float]:
    """Estimate E_G[Per(M_S)] against the analytic target (1-t)^{n/2} Per(A_S).

    Per(M) is multilinear with one factor per row, and rows of G are
    independent, so the expectation passes inside: E Per(M_S) =
    Per(E M_S) = (1-t)^{n/2} Per(A_S).  Returns (estimate, target, std_err)
    with std_err the scalar standard error of the complex mean.
    """
    t = _check_rate(t)
    a = as_matrix(a)
    n, m = a.shape
    sub_a = boson_submatrix(a, occupation)
    target = (1.0 - t) ** (n / 2.0) * permanent_ryser(sub_a)

    cols = [j for j, c in enumerate(occupation) for _ in range(int(c))]
    sa = math.sqrt(1.0 - t)
    sg = math.sqrt(t)
    total = 0.0 + 0.0j
    total_sq = 0.0
    chunk = 20000
    done = 0
    while done < mc_samples:
        b = min(chunk, mc_samples - done)
        g = gaussian_matrix_batch(b, n, m, rng)
        ms = sa * a[None, :, :] + sg * g
        per = permanent_batch(ms[:, :, cols])
        total += per.sum()
        total_sq += float((per.real ** 2 + per.imag ** 2).sum())
        done += b
    est = total / mc_samples
    var = max(total_sq / mc_samples - abs(est) ** 2, 0.0)
    std_err = math.sqrt(var / mc_samples)
    return complex(est), complex(target), std_err


# ----------------------------------------------------------------------
# Noise semigroup (two-stage mixing == one stage at the combined rate)
# ----------------------------------------------------------------------

def combined_rate(t1: float, t2: float) -> float:
    return 1.0 - (1.0 - _check_rate(t1)) * (1.0 - _check_rate(t2))


def noise_semigroup_check(
    a, t1: float, t2: float, cfg: NoisyConfig, rng: RandomSource | None = None
) -> tuple[OutcomeDistribution, OutcomeDistribution]:
    """Mix twice (fresh G at t1, then t2) versus once at 1-(1-t1)(1-t2).

    By Gaussian stability the two mixed matrices are equal in distribution,
    so the averaged outcome laws must agree within Monte Carlo error.  Both
    returned distributions carry per-outcome standard errors.
    """
    a = as_matrix(a)
    n, m = a.shape
    src = cfg.source(rng)
    rng_two, rng_one = src.split(2)
    outcomes = enumerate_boson_outcomes(n, m)

    s1a, s1g = math.sqrt(1.0 - t1), math.sqrt(t1)
    s2a, s2g = math.sqrt(1.0 - t2), math.sqrt(t2)

    def draw_two(b, r):
        g1 = gaussian_matrix_batch(b, n, m, r)
        g2 = gaussian_matrix_batch(b, n, m, r)
        stage1 = s1a * a[None, :, :] + s1g * g1
        return s2a * stage1 + s2g * g2

    tc = combined_rate(t1, t2)
    sca, scg = math.sqrt(1.0 - tc), math.sqrt(tc)

    def draw_one(b, r):
        return sca * a[None, :, :] + scg * gaussian_matrix_batch(b, n, m, r)

    mean2, se2, _, _, _ = _mc_average(a, draw_two, cfg.mc_samples, rng_two)
    mean1, se1, _, _, _ = _mc_average(a, draw_one, cfg.mc_samples, rng_one)
    return (
        OutcomeDistribution(outcomes, mean2, std_errs=se2),
        OutcomeDistribution(outcomes, mean1, std_errs=se1),
    )


# ----------------------------------------------------------------------
# Correlation decay curves
# ----------------------------------------------------------------------

@dataclass
class DecayPoint:
    n: int
    m: int
    t: float
    corr: float
    std_err: float
    tvd: float


def default_mode_rule(n: int) -> int:
    """m = n^2, the standard collision-moderating mode count."""
    return n * n


def correlation_decay_curve(
    n_list,
    t_list,
    mc_samples: int,
    rng: RandomSource,
    m_rule=None,
    bootstrap: int = BOOTSTRAP_RESAMPLES,
) -> list[DecayPoint]:
    """Correlation between ideal and noisy laws on a (n, t) grid.

    One fresh Haar input is drawn per n and shared across the t grid so the
    t-trend is not confounded by instance-to-instance variation.  Standard
    errors come from a bootstrap (``bootstrap`` resamples) over contiguous
    batch means of the Monte Carlo draws.
    """
    from nisqlab.linalg import haar_orthonormal_rows

    if m_rule is None:
        m_rule = default_mode_rule
    rows: list[DecayPoint] = []
    for n in n_list:
        m = int(m_rule(n))
        rng_input, rng_mc, rng_boot = rng.split(3)
        a = haar_orthonormal_rows(n, m, rng_input)
        ideal = boson_distribution(a)
        for t in t_list:
            t = _check_rate(t)
            sa, sg = math.sqrt(1.0 - t), math.sqrt(t)

            def draw(b, r, _sa=sa, _sg=sg, _a=a, _n=n, _m=m):
                return _sa * _a[None, :, :] + _sg * gaussian_matrix_batch(b, _n, _m, r)

            mean, _, batch_means, _, _ = _mc_average(a, draw, mc_samples, rng_mc)
            noisy = OutcomeDistribution(ideal.outcomes, mean)
            corr = distribution_correlation(ideal, noisy)
            tvd = total_variation(ideal, noisy)
            se = _bootstrap_corr_stderr(ideal.probs, batch_means, bootstrap, rng_boot)
            rows.append(DecayPoint(n=n, m=m, t=t, corr=corr, std_err=se, tvd=tvd))
    return rows


def _bootstrap_corr_stderr(ideal, batch_means, resamples, rng: RandomSource) -> float:
    k = batch_means.shape[0]
    if k < 2:
        return 0.0
    g = rng.generator
    counts = g.multinomial(k, np.full(k, 1.0 / k), size=resamples).astype(np.float64)
    boot = counts @ batch_means / k  # (resamples, n_outcomes)
    ic = ideal - ideal.mean()
    ic_norm = np.linalg.norm(ic)
    if ic_norm == 0.0:
        return 0.0
    bc = boot - boot.mean(axis=1, keepdims=True)
    denom = np.linalg.norm(bc, axis=1) * ic_norm
    corrs = np.where(denom > 0, (bc @ ic) / np.where(denom > 0, denom, 1.0), 0.0)
    return float(np.std(corrs, ddof=1))


def write_decay_csv(rows: list[DecayPoint], fh, meta: str | None = None):
    """CSV with header n,m,t,corr,std_err,tvd (17 significant digits)."""
    w = csv.writer(fh, lineterminator="\n")
    if meta:
        fh.write(f"# {meta}\n")
    w.writerow(["n", "m", "t", "corr", "std_err", "tvd"])
    for r in rows:
        w.writerow(
            [r.n, r.m, f"{r.t:.17g}", f"{r.corr:.17g}", f"{r.std_err:.17g}", f"{r.tvd:.17g}"]
        )
