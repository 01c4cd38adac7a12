"""Complex linear-algebra kernels: permanents, determinants, random ensembles.

Matrices are plain ``numpy.ndarray`` values (complex128, row-major).  The
permanent routines are the exponential-cost workhorses of the boson-sampling
model; everything here is pure and deterministic given its inputs.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from nisqlab.errors import DimensionError, SizeCapError
from nisqlab.rng import RandomSource

RYSER_MAX_N = 30
NAIVE_MAX_N = 8

_RYSER_CHUNK = 4096


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array and reject non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise DimensionError("matrix entries must be finite")
    return a


def _require_square(a: np.ndarray) -> int:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"square matrix required, got {a.shape[0]}x{a.shape[1]}")
    return a.shape[0]


def popcount(x: np.ndarray) -> np.ndarray:
    """Vectorized population count for non-negative int64 arrays (< 2**62)."""
    x = x.astype(np.uint64)
    m1 = np.uint64(0x5555555555555555)
    m2 = np.uint64(0x3333333333333333)
    m4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    h = np.uint64(0x0101010101010101)
    x = x - ((x >> np.uint64(1)) & m1)
    x = (x & m2) + ((x >> np.uint64(2)) & m2)
    x = (x + (x >> np.uint64(4))) & m4
    return ((x * h) >> np.uint64(56)).astype(np.int64)


def permanent_ryser(m) -> complex:
    """Permanent of a square matrix by Ryser's inclusion-exclusion.

    Column sums are updated along a Gray-code walk over the 2^n - 1 nonempty
    column subsets, one toggled column per step, for O(n 2^n) total work.
    The walk is processed in vectorized chunks, with the running sums
    recomputed exactly at each chunk boundary so rounding error does not
    accumulate over the whole walk.
    """
    a = as_matrix(m)
    n = _require_square(a)
    if n > RYSER_MAX_N:
        raise SizeCapError(f"permanent_ryser capped at n={RYSER_MAX_N}, got {n}")
    if n == 0:
        return complex(1.0)

    total = 0.0 + 0.0j
    cols = a.T.copy()  # cols[j] = column j, contiguous for fast gathers
    n_steps = (1 << n) - 1
    for start in range(1, n_steps + 1, _RYSER_CHUNK):
        ks = np.arange(start, min(start + _RYSER_CHUNK, n_steps + 1), dtype=np.int64)
        gray = ks ^ (ks >> 1)
        low = ks & -ks
        j = np.log2(low.astype(np.float64)).astype(np.int64)  # toggled column
        sgn = np.where((gray >> j) & 1 == 1, 1.0, -1.0)
        # Exact column-sum state just before this chunk.
        prev = (start - 1) ^ ((start - 1) >> 1)
        in_prev = (prev >> np.arange(n)) & 1
        base = cols[in_prev == 1].sum(axis=0) if prev else np.zeros(n, dtype=np.complex128)
        sums = base + np.cumsum(sgn[:, None] * cols[j], axis=0)
        prods = np.prod(sums, axis=1)
        size = popcount(gray)
        term_sgn = 1.0 - 2.0 * ((n - size) & 1)
        total += np.sum(term_sgn * prods)
    return complex(total)


def permanent_naive(m) -> complex:
    """Permanent by explicit sum over all n! permutations (test oracle)."""
    a = as_matrix(m)
    n = _require_square(a)
    if n > NAIVE_MAX_N:
        raise SizeCapError(f"permanent_naive capped at n={NAIVE_MAX_N}, got {n}")
    if n == 0:
        return complex(1.0)
    rows = np.arange(n)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        total += np.prod(a[rows, perm])
    return complex(total)


def permanent_batch(ms) -> np.ndarray:
    """Permanents of a stack of square matrices, shape (B, n, n) -> (B,).

    Runs one Gray-code walk shared by the whole stack; used by Monte Carlo
    routines that need many small permanents per draw.
    """
    a = np.asarray(ms, dtype=np.complex128)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionError(f"expected a (B, n, n) stack, got shape {a.shape}")
    b, n = a.shape[0], a.shape[1]
    if n > RYSER_MAX_N:
        raise SizeCapError(f"permanent_batch capped at n={RYSER_MAX_N}, got {n}")
    if n == 0:
        return np.ones(b, dtype=np.complex128)

    sums = np.zeros((b, n), dtype=np.complex128)
    total = np.zeros(b, dtype=np.complex128)
    gray = 0
    for k in range(1, (1 << n)):
        new_gray = k ^ (k >> 1)
        j = (gray ^ new_gray).bit_length() - 1
        if new_gray & (1 << j):
            sums += a[:, :, j]
        else:
            sums -= a[:, :, j]
        gray = new_gray
        size = gray.bit_count()
        sign = 1.0 if ((n - size) & 1) == 0 else -1.0
        total += sign * np.prod(sums, axis=1)
    return total


def determinant(m) -> complex:
    """Determinant via LAPACK's partially pivoted LU factorization."""
    a = as_matrix(m)
    _require_square(a)
    return complex(np.linalg.det(a))


def haar_orthonormal_rows(n: int, m: int, rng: RandomSource) -> np.ndarray:
    """First n rows of a Haar-random m x m unitary.

    Built by QR-orthonormalizing a complex Ginibre matrix and absorbing the
    phases of R's diagonal into Q, which makes the factorization unique and
    the resulting unitary exactly Haar distributed.
    """
    if n > m:
        raise DimensionError(f"need n <= m, got n={n}, m={m}")
    g = rng.generator
    z = (g.standard_normal((m, m)) + 1j * g.standard_normal((m, m))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q[:n, :].copy()


def gaussian_matrix(n: int, m: int, rng: RandomSource) -> np.ndarray:
    """i.i.d. complex Gaussian n x m matrix with per-entry variance 1/m.

    Normalized so the expected squared norm of every row is exactly 1,
    matching the scale of an orthonormal-row matrix of the same width.
    """
    if n < 1 or m < 1:
        raise DimensionError(f"need n, m >= 1, got n={n}, m={m}")
    g = rng.generator
    scale = math.sqrt(1.0 / (2.0 * m))
    return scale * (g.standard_normal((n, m)) + 1j * g.standard_normal((n, m)))


def gaussian_matrix_batch(b: int, n: int, m: int, rng: RandomSource) -> np.ndarray:
    """Stack of ``b`` independent draws from :func:`gaussian_matrix`, (B, n, m)."""
    if n < 1 or m < 1:
        raise DimensionError(f"need n, m >= 1, got n={n}, m={m}")
    g = rng.generator
    scale = math.sqrt(1.0 / (2.0 * m))
    return scale * (g.standard_normal((b, n, m)) + 1j * g.standard_normal((b, n, m)))


def orthonormality_defect(x: np.ndarray) -> float:
    """max |(X X^dagger - I)_ij|, the row-orthonormality residual."""
    x = as_matrix(x)
    gram = x @ x.conj().T
    return float(np.max(np.abs(gram - np.eye(x.shape[0]))))


# ----------------------------------------------------------------------
# JSON interchange
# ----------------------------------------------------------------------

def matrix_to_json(m) -> dict:
    """Encode a matrix as {"rows", "cols", "re", "im"} with row-major lists."""
    a = as_matrix(m)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [float(v) for v in a.real.ravel()],
        "im": [float(v) for v in a.imag.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Decode a matrix from the JSON form produced by :func:`matrix_to_json`."""
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=np.float64)
    im = np.asarray(obj["im"], dtype=np.float64)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionError(
            f"entry lists must have length rows*cols={rows * cols}, "
            f"got re={re.size}, im={im.size}"
        )
    return as_matrix((re + 1j * im).reshape(rows, cols))
