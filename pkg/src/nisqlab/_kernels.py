"""Optional numba-compiled hot loops.

The product-of-linear-forms sweep behind the noisy boson-sampling Monte
Carlo is the one true hot path of the package (hundreds of thousands of
multiset coefficients per noise draw).  When numba is importable the fused
kernel below runs it; otherwise callers fall back to the vectorized numpy
implementation, which is identical in semantics but several times slower.
"""

from __future__ import annotations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - environment without numba
    numba = None

HAVE_NUMBA = numba is not None


def _forms_mc_sweep_py(
    mats, maps_flat, offsets, sizes, fact, sum_p, sum_p2, batch_sums, batch_counts, bucket_ids
):
    """Reference implementation of the fused Monte Carlo sweep (see below)."""
    b_count, nrow, mm = mats.shape
    c_top = sizes[nrow]
    skipped = 0
    for s in range(b_count):
        cur = np.zeros(1, dtype=np.complex128)
        cur[0] = 1.0
        for i in range(nrow):
            nxt = np.zeros(sizes[i + 1], dtype=np.complex128)
            for j in range(mm):
                off = offsets[i * mm + j]
                tgt = maps_flat[off : off + sizes[i]]
                nxt[tgt] += cur * mats[s, i, j]
            cur = nxt
        w = (cur.real ** 2 + cur.imag ** 2) * fact[:c_top]
        tot = w.sum()
        if tot <= 0.0:
            skipped += 1
            continue
        p = w / tot
        sum_p += p
        sum_p2 += p * p
        bk = bucket_ids[s]
        batch_sums[bk] += p
        batch_counts[bk] += 1
    return skipped


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def forms_mc_sweep(
        mats, maps_flat, offsets, sizes, fact, sum_p, sum_p2, batch_sums, batch_counts, bucket_ids
    ):  # pragma: no cover - exercised through the public API
        """Fused sweep: per draw, expand prod_i(sum_j M[i,j] x_j) over the
        multiset lattice, renormalize |coeff|^2 * prod(S!), and accumulate
        the running mean, second moment, and batch sums in place.

        Returns the number of degenerate draws (all-zero weight) skipped.
        """
        b_count, nrow, mm = mats.shape
        c_top = sizes[nrow]
        buf_a = np.empty(c_top, np.complex128)
        buf_b = np.empty(c_top, np.complex128)
        w = np.empty(c_top, np.float64)
        skipped = 0
        for s in range(b_count):
            cur = buf_a
            nxt = buf_b
            cur[0] = 1.0 + 0.0j
            for i in range(nrow):
                for r in range(sizes[i + 1]):
                    nxt[r] = 0.0 + 0.0j
                for j in range(mm):
                    off = offsets[i * mm + j]
                    mij = mats[s, i, j]
                    for r in range(sizes[i]):
                        nxt[maps_flat[off + r]] += cur[r] * mij
                tmp = cur
                cur = nxt
                nxt = tmp
            tot = 0.0
            for r in range(c_top):
                v = cur[r]
                wr = (v.real * v.real + v.imag * v.imag) * fact[r]
                w[r] = wr
                tot += wr
            if tot <= 0.0:
                skipped += 1
                continue
            inv = 1.0 / tot
            bk = bucket_ids[s]
            for r in range(c_top):
                p = w[r] * inv
                sum_p[r] += p
                sum_p2[r] += p * p
                batch_sums[bk, r] += p
            batch_counts[bk] += 1
        return skipped

else:  # pragma: no cover
    forms_mc_sweep = _forms_mc_sweep_py
