"""Exact boson- and fermion-sampling distributions.

A boson-sampling outcome is a size-n column multiset of an n x m matrix,
stored as an occupation vector (bosons per mode).  Outcomes are enumerated
in lexicographic order of the sorted mode-index tuples, i.e. the order of
``itertools.combinations_with_replacement``, so serialized output is
canonical.

The full distribution is computed by expanding the product of the n row
linear forms prod_i (sum_j M[i,j] x_j): the coefficient of the monomial
x^S equals Per(M_S) / prod_j S_j!, which gives every outcome's permanent in
one dynamic-programming sweep instead of one Ryser run per outcome.  The
per-outcome Ryser route is kept as the independent oracle in the tests.
"""

from __future__ import annotations

import csv
import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.linalg import as_matrix, orthonormality_defect
from nisqlab.rng import RandomSource

OUTCOME_CAP = 10 ** 6
ORTHONORMALITY_TOL = 1e-8


# ----------------------------------------------------------------------
# Outcome enumeration
# ----------------------------------------------------------------------

def count_boson_outcomes(n: int, m: int) -> int:
    return math.comb(n + m - 1, n)


def enumerate_boson_outcomes(n: int, m: int) -> list[tuple[int, ...]]:
    """All occupation vectors of n bosons in m modes, canonical order."""
    total = count_boson_outcomes(n, m)
    if total > OUTCOME_CAP:
        raise SizeCapError(
            f"{total} boson outcomes for (n={n}, m={m}) exceeds cap {OUTCOME_CAP}"
        )
    out = []
    for combo in itertools.combinations_with_replacement(range(m), n):
        occ = [0] * m
        for j in combo:
            occ[j] += 1
        out.append(tuple(occ))
    return out


def enumerate_fermion_outcomes(n: int, m: int) -> list[tuple[int, ...]]:
    """All sorted n-element column subsets of m modes."""
    total = math.comb(m, n)
    if total > OUTCOME_CAP:
        raise SizeCapError(
            f"{total} fermion outcomes for (n={n}, m={m}) exceeds cap {OUTCOME_CAP}"
        )
    return list(itertools.combinations(range(m), n))


def boson_submatrix(x, occupation) -> np.ndarray:
    """n x n matrix repeating column j of ``x`` occupation[j] times, in mode order."""
    a = as_matrix(x)
    occ = tuple(int(c) for c in occupation)
    if len(occ) != a.shape[1]:
        raise DimensionError(
            f"occupation length {len(occ)} != number of modes {a.shape[1]}"
        )
    if any(c < 0 for c in occ):
        raise DimensionError("occupation counts must be non-negative")
    if sum(occ) != a.shape[0]:
        raise DimensionError(
            f"occupation sums to {sum(occ)}, expected n={a.shape[0]}"
        )
    cols = [j for j, c in enumerate(occ) for _ in range(c)]
    return a[:, cols]


# ----------------------------------------------------------------------
# Distributions
# ----------------------------------------------------------------------

@dataclass
class OutcomeDistribution:
    """A finite distribution over ordered outcome keys.

    ``outcomes`` are hashable keys (occupation tuples, subset tuples, or bit
    strings); ``probs`` is the matching probability vector.  ``std_errs``
    carries per-outcome Monte Carlo standard errors when the distribution is
    an empirical average.
    """

    outcomes: list
    probs: np.ndarray
    std_errs: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.probs = np.array(self.probs, dtype=np.float64, copy=True)
        if len(self.outcomes) != self.probs.size:
            raise DimensionError(
                f"{len(self.outcomes)} outcomes vs {self.probs.size} probabilities"
            )
        if np.any(self.probs < -1e-12):
            raise PreconditionError(
                f"negative probability {self.probs.min():.3e} below tolerance"
            )
        np.clip(self.probs, 0.0, None, out=self.probs)

    @property
    def total(self) -> float:
        return float(self.probs.sum())

    def is_normalized(self, tol: float = 1e-8) -> bool:
        return abs(self.total - 1.0) <= tol

    def as_dict(self) -> dict:
        return dict(zip(self.outcomes, self.probs))


def _check_orthonormal_rows(x: np.ndarray):
    defect = orthonormality_defect(x)
    if defect > ORTHONORMALITY_TOL:
        raise PreconditionError(
            f"rows not orthonormal: defect {defect:.3e} > {ORTHONORMALITY_TOL}"
        )


class ModeIndex:
    """DP tables over the multiset-of-modes lattice for (n, m), cached per shape.

    Level i holds the multisets of size i in canonical order; the add-mode
    maps send the rank of a level-i multiset S to the rank of S + e_j at
    level i+1.  Adding a fixed mode is injective, so the maps support
    collision-free fancy scatter-adds.  ``fact`` is prod_j S_j! over the top
    level.  ``maps_flat``/``offsets`` hold the same maps concatenated for the
    compiled sweep kernel.
    """

    def __init__(self, n: int, m: int):
        if count_boson_outcomes(n, m) > OUTCOME_CAP:
            raise SizeCapError(
                f"{count_boson_outcomes(n, m)} outcomes for (n={n}, m={m}) "
                f"exceeds cap {OUTCOME_CAP}"
            )
        self.n, self.m = n, m
        levels = []
        for i in range(n + 1):
            occs = np.zeros((count_boson_outcomes(i, m), m), dtype=np.int16)
            for r, combo in enumerate(itertools.combinations_with_replacement(range(m), i)):
                for j in combo:
                    occs[r, j] += 1
            levels.append(occs)
        self.levels = levels
        self.sizes = np.array([lv.shape[0] for lv in levels], dtype=np.int64)

        self.add_maps = []
        for i in range(n):
            rank = {row.tobytes(): r for r, row in enumerate(levels[i + 1])}
            maps_i = np.empty((m, levels[i].shape[0]), dtype=np.int64)
            for r in range(levels[i].shape[0]):
                ba = bytearray(levels[i][r].tobytes())
                for j in range(m):
                    pos = 2 * j  # int16 little-endian, low byte first
                    ba[pos] += 1
                    maps_i[j, r] = rank[bytes(ba)]
                    ba[pos] -= 1
            self.add_maps.append(maps_i)

        self.offsets = np.zeros(n * m, dtype=np.int64)
        chunks, off = [], 0
        for i in range(n):
            for j in range(m):
                self.offsets[i * m + j] = off
                chunks.append(self.add_maps[i][j])
                off += levels[i].shape[0]
        self.maps_flat = (
            np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
        )

        top = levels[n].astype(np.int64)
        fact = np.ones(top.shape[0], dtype=np.float64)
        fact_table = np.array([math.factorial(k) for k in range(n + 1)], dtype=np.float64)
        for j in range(m):
            fact *= fact_table[top[:, j]]
        self.fact = fact


@functools.lru_cache(maxsize=16)
def _mode_index(n: int, m: int) -> ModeIndex:
    return ModeIndex(n, m)


def scaled_permanents(m_matrix) -> np.ndarray:
    """Per(M_S) / prod_j S_j! for every size-n column multiset S, in order."""
    a = as_matrix(m_matrix)
    return scaled_permanents_batch(a[None, :, :])[0]


def scaled_permanents_batch(stack) -> np.ndarray:
    """Batched :func:`scaled_permanents` over a (B, n, m) stack -> (B, N)."""
    ms = np.asarray(stack, dtype=np.complex128)
    if ms.ndim != 3:
        raise DimensionError(f"expected (B, n, m) stack, got shape {ms.shape}")
    b, n, m = ms.shape
    index = _mode_index(n, m)
    # outcome-major layout keeps the scatter writes block-contiguous
    coeff = np.ones((1, b), dtype=np.complex128)
    for i in range(n):
        maps_i = index.add_maps[i]
        new = np.zeros((index.sizes[i + 1], b), dtype=np.complex128)
        row = ms[:, i, :]
        for j in range(m):
            new[maps_i[j], :] += coeff * row[None, :, j]
        coeff = new
    return coeff.T.copy()


def boson_distribution(x) -> OutcomeDistribution:
    """Exact boson-sampling law P(S) = |Per(X_S)|^2 / prod_j S_j!.

    Requires orthonormal rows (within 1e-8); the input is used as-is, never
    re-orthonormalized.  The returned probabilities sum to 1 within 1e-8.
    """
    a = as_matrix(x)
    n, m = a.shape
    _check_orthonormal_rows(a)
    outcomes = enumerate_boson_outcomes(n, m)
    fact = _mode_index(n, m).fact
    q = scaled_permanents(a)
    probs = (q.real ** 2 + q.imag ** 2) * fact
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise ArithmeticError(
            f"boson probabilities sum to {total!r}; input defect "
            f"{orthonormality_defect(a):.3e}"
        )
    return OutcomeDistribution(outcomes, probs)


def fermion_distribution(x) -> OutcomeDistribution:
    """Exact fermion-sampling law P(S) = |det(X_S)|^2 over column subsets.

    Sums to 1 by the Cauchy-Binet identity (checked at 1e-10).
    """
    a = as_matrix(x)
    n, m = a.shape
    _check_orthonormal_rows(a)
    outcomes = enumerate_fermion_outcomes(n, m)
    idx = np.asarray(outcomes, dtype=np.int64)
    subs = np.transpose(a[:, idx], (1, 0, 2))  # (N, n, n)
    dets = np.linalg.det(subs)
    probs = dets.real ** 2 + dets.imag ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-10:
        raise ArithmeticError(
            f"fermion probabilities sum to {total!r}; input defect "
            f"{orthonormality_defect(a):.3e}"
        )
    return OutcomeDistribution(outcomes, probs)


def sample_outcome(dist: OutcomeDistribution, rng: RandomSource):
    """Draw one outcome key by inverse CDF over the stored outcome order."""
    if not dist.is_normalized():
        raise PreconditionError(
            f"distribution not normalized: total {dist.total!r}"
        )
    u = rng.generator.random()
    cdf = np.cumsum(dist.probs)
    idx = int(np.searchsorted(cdf, u, side="right"))
    return dist.outcomes[min(idx, len(dist.outcomes) - 1)]


def sample_outcomes(dist: OutcomeDistribution, count: int, rng: RandomSource) -> list:
    """Draw ``count`` outcomes i.i.d. (one inverse-CDF pass, vectorized)."""
    if not dist.is_normalized():
        raise PreconditionError(
            f"distribution not normalized: total {dist.total!r}"
        )
    u = rng.generator.random(count)
    cdf = np.cumsum(dist.probs)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(dist.outcomes) - 1)
    return [dist.outcomes[i] for i in idx]


# ----------------------------------------------------------------------
# CSV interchange
# ----------------------------------------------------------------------

def format_outcome(key) -> str:
    if isinstance(key, str):
        return key
    return ",".join(str(int(v)) for v in key)


def distribution_to_csv(dist: OutcomeDistribution, fh):
    """Write one row per outcome: key, probability at 17 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["outcome", "probability"])
    for key, p in zip(dist.outcomes, dist.probs):
        w.writerow([format_outcome(key), f"{p:.17g}"])


def distribution_from_csv(fh) -> OutcomeDistribution:
    r = csv.reader(fh)
    header = next(r)
    if header[:2] != ["outcome", "probability"]:
        raise PreconditionError(f"unexpected CSV header {header!r}")
    outcomes, probs = [], []
    for row in r:
        if not row:
            continue
        key = row[0]
        if "," in key or key.lstrip("-").isdigit():
            outcomes.append(tuple(int(v) for v in key.split(",")))
        else:
            outcomes.append(key)
        probs.append(float(row[1]))
    return OutcomeDistribution(outcomes, np.asarray(probs))
