"""Boolean-function Fourier analysis: noise operator, stability, truncation.

Functions live on {-1,+1}^n with TRUE = +1.  A point is indexed by
x in [0, 2^n): bit i of x set means variable i takes the value -1, so index
0 is the all-TRUE input.  The character chi_S(x) = prod_{i in S} x_i equals
(-1)^{popcount(x & S)} with S a bitmask, which is what the fast butterfly
transform below diagonalizes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.linalg import popcount
from nisqlab.rng import RandomSource

MAX_VARS = 24  # dense 2^n tables


def _check_nvars(n: int):
    if n < 0:
        raise DimensionError(f"variable count must be non-negative, got {n}")
    if n > MAX_VARS:
        raise SizeCapError(f"dense tables capped at n={MAX_VARS} variables, got {n}")


@dataclass
class BooleanFunction:
    """A real-valued function on the n-cube, stored as a dense 2^n table.

    Genuine Boolean functions are +-1 valued; low-degree truncations are
    general real tables.
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        _check_nvars(self.n)
        self.table = np.asarray(self.table, dtype=np.float64)
        if self.table.size != 1 << self.n:
            raise DimensionError(
                f"table length {self.table.size} != 2^{self.n}"
            )

    def is_boolean(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.table) - 1.0) <= tol))


@dataclass
class FourierSpectrum:
    """Walsh coefficients indexed by subset bitmask S in [0, 2^n)."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_nvars(self.n)
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.size != 1 << self.n:
            raise DimensionError(
                f"coefficient length {self.coeffs.size} != 2^{self.n}"
            )

    def total_mass(self) -> float:
        return float(np.sum(self.coeffs ** 2))


@dataclass
class DegreeProfile:
    """Squared-coefficient mass per degree; masses[k] = sum_{|S|=k} c(S)^2."""

    masses: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=np.float64)

    def mass_above(self, d: int) -> float:
        return float(self.masses[d + 1 :].sum())


def _fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized in-place fast Walsh butterfly, O(n 2^n)."""
    a = values.astype(np.float64).copy()
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2 * h)
        top = a[:, :h] + a[:, h:]
        bot = a[:, :h] - a[:, h:]
        a[:, :h] = top
        a[:, h:] = bot
        a = a.reshape(-1)
        h *= 2
    return a


def _subset_sizes(n: int) -> np.ndarray:
    return popcount(np.arange(1 << n, dtype=np.int64))


def walsh_transform(f: BooleanFunction) -> FourierSpectrum:
    """Coefficients in the +-1 character basis: c(S) = E_x[f(x) chi_S(x)]."""
    return FourierSpectrum(f.n, _fwht(f.table) / (1 << f.n))


def inverse_walsh_transform(spec: FourierSpectrum) -> BooleanFunction:
    """Rebuild the point table from Walsh coefficients."""
    return BooleanFunction(spec.n, _fwht(spec.coeffs))


def noise_operator(spec: FourierSpectrum, rho: float) -> FourierSpectrum:
    """Attenuate each coefficient by rho^|S| (the semigroup operator)."""
    if not -1.0 <= rho <= 1.0:
        raise PreconditionError(f"rho must lie in [-1, 1], got {rho}")
    weights = np.power(float(rho), _subset_sizes(spec.n))
    return FourierSpectrum(spec.n, spec.coeffs * weights)


def noise_stability(f: BooleanFunction, rho: float) -> float:
    """sum_S rho^|S| c(S)^2 = E[f(x) f(y)] over rho-correlated uniform pairs."""
    if not f.is_boolean():
        raise PreconditionError("noise stability requires a +-1 valued table")
    if not -1.0 <= rho <= 1.0:
        raise PreconditionError(f"rho must lie in [-1, 1], got {rho}")
    c = walsh_transform(f).coeffs
    return float(np.sum(np.power(float(rho), _subset_sizes(f.n)) * c * c))


def empirical_stability(
    f: BooleanFunction, rho: float, shots: int, rng: RandomSource
) -> tuple[float, float]:
    """Monte Carlo estimate of E[f(x) f(y)], y from x by flipping each bit
    independently with probability (1 - rho) / 2.  Returns (estimate, std_err).
    """
    if not 0.0 <= rho <= 1.0:
        raise PreconditionError(f"rho must lie in [0, 1], got {rho}")
    g = rng.generator
    eps = (1.0 - rho) / 2.0
    x = g.integers(0, 1 << f.n, size=shots, dtype=np.int64)
    mask = np.zeros(shots, dtype=np.int64)
    for i in range(f.n):
        mask |= (g.random(shots) < eps).astype(np.int64) << i
    prod = f.table[x] * f.table[x ^ mask]
    est = float(prod.mean())
    se = float(prod.std(ddof=1) / math.sqrt(shots)) if shots > 1 else 0.0
    return est, se


def low_degree_truncate(
    spec: FourierSpectrum, d: int
) -> tuple[BooleanFunction, float]:
    """Zero all coefficients of degree > d and invert.

    Returns the (generally real-valued) truncation and the tail mass
    sum_{|S|>d} c(S)^2, the squared L2 truncation error.
    """
    if not 0 <= d <= spec.n:
        raise PreconditionError(f"degree bound must lie in [0, {spec.n}], got {d}")
    sizes = _subset_sizes(spec.n)
    kept = np.where(sizes <= d, spec.coeffs, 0.0)
    tail = float(np.sum(spec.coeffs[sizes > d] ** 2))
    return inverse_walsh_transform(FourierSpectrum(spec.n, kept)), tail


def degree_profile(spec: FourierSpectrum) -> DegreeProfile:
    """Per-degree squared-coefficient mass of the spectrum."""
    sizes = _subset_sizes(spec.n)
    masses = np.bincount(sizes, weights=spec.coeffs ** 2, minlength=spec.n + 1)
    return DegreeProfile(masses)


# ----------------------------------------------------------------------
# Standard constructions
# ----------------------------------------------------------------------

def make_majority(n: int) -> BooleanFunction:
    """Majority on an odd number of variables (+1 iff more than half are +1)."""
    if n % 2 == 0:
        raise PreconditionError(f"majority needs an odd variable count, got {n}")
    _check_nvars(n)
    minus_ones = popcount(np.arange(1 << n, dtype=np.int64))
    return BooleanFunction(n, np.where(minus_ones < (n + 1) / 2, 1.0, -1.0))


def make_parity(n: int) -> BooleanFunction:
    """Product of all variables, chi_{[n]}."""
    _check_nvars(n)
    return BooleanFunction(n, 1.0 - 2.0 * (popcount(np.arange(1 << n, dtype=np.int64)) & 1))


def make_tribes(width: int, count: int) -> BooleanFunction:
    """OR of ``count`` disjoint ANDs of ``width`` variables each."""
    n = width * count
    _check_nvars(n)
    x = np.arange(1 << n, dtype=np.int64)
    tribe_mask = (1 << width) - 1
    any_true = np.zeros(x.size, dtype=bool)
    for k in range(count):
        # a tribe is TRUE when all its variables are +1, i.e. all bits clear
        any_true |= ((x >> (k * width)) & tribe_mask) == 0
    return BooleanFunction(n, np.where(any_true, 1.0, -1.0))


# ----------------------------------------------------------------------
# Classical repetition + majority decoding
# ----------------------------------------------------------------------

def repetition_majority_logical_error(length: int, p: float) -> float:
    """P(majority decoding fails) for a length-L repetition code under
    i.i.d. bit flips with probability p: sum_{k > L/2} C(L,k) p^k (1-p)^{L-k}.
    """
    if length % 2 == 0 or length < 1:
        raise PreconditionError(f"repetition length must be odd, got {length}")
    if not 0.0 <= p <= 0.5:
        raise PreconditionError(f"flip probability must lie in [0, 1/2], got {p}")
    return float(
        sum(
            math.comb(length, k) * p ** k * (1.0 - p) ** (length - k)
            for k in range(length // 2 + 1, length + 1)
        )
    )


def repetition_majority_mc(
    length: int, p: float, shots: int, rng: RandomSource
) -> tuple[float, float]:
    """Monte Carlo companion to the exact decoding-failure formula."""
    if length % 2 == 0 or length < 1:
        raise PreconditionError(f"repetition length must be odd, got {length}")
    flips = rng.generator.binomial(length, p, size=shots)
    fails = flips > length // 2
    est = float(fails.mean())
    se = math.sqrt(max(est * (1.0 - est), 0.0) / shots)
    return est, se


# ----------------------------------------------------------------------
# Interchange: packed bits, JSON tables, spectrum CSV
# ----------------------------------------------------------------------

def function_to_bits(f: BooleanFunction) -> bytes:
    """Pack the table as 2^n bits, little-endian within bytes (1 = TRUE = +1)."""
    if not f.is_boolean():
        raise PreconditionError("bit packing requires a +-1 valued table")
    bits = (f.table > 0).astype(np.uint8)
    return np.packbits(bits, bitorder="little").tobytes()


def function_from_bits(data: bytes, n: int) -> BooleanFunction:
    _check_nvars(n)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if bits.size < (1 << n):
        raise DimensionError(
            f"{len(data)} bytes holds {bits.size} bits, need 2^{n}"
        )
    return BooleanFunction(n, np.where(bits[: 1 << n] == 1, 1.0, -1.0))


def function_to_json(f: BooleanFunction) -> str:
    return json.dumps({"n": f.n, "table": [float(v) for v in f.table]})


def function_from_json(text: str) -> BooleanFunction:
    """Load a truth table; 0/1 tables are mapped to -1/+1 with 1 = TRUE."""
    obj = json.loads(text)
    table = np.asarray(obj["table"], dtype=np.float64)
    values = set(np.unique(table).tolist())
    if values <= {0.0, 1.0}:
        table = 2.0 * table - 1.0
    return BooleanFunction(int(obj["n"]), table)


def spectrum_to_csv(spec: FourierSpectrum, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["bitmask", "coefficient"])
    for s, c in enumerate(spec.coeffs):
        w.writerow([s, f"{c:.17g}"])
