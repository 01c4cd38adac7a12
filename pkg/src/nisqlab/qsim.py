"""Small noisy quantum circuits under depolarizing noise.

Two execution paths compute the same channel:

* a dense density-matrix evolution (exact, n <= 10), where a noise event on
  a qubit set replaces its marginal with the maximally mixed state, and
* a pure-state trajectory unraveling (n <= 20, vectorized across shots),
  where a firing event projectively decouples the hit qubits by measuring
  them in a Haar-random basis (discarding the result) and re-tensors an
  independent Haar-random pure state in their place.  Averaged over
  trajectories this reproduces the density channel, and every firing is
  logged per shot for error-correlation statistics.

Basis convention is big-endian: qubit 0 is the most significant bit of a
basis index, so bit strings read left to right as qubit 0, 1, ...
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from nisqlab.boson import OutcomeDistribution
from nisqlab.errors import DimensionError, PreconditionError, SizeCapError
from nisqlab.rng import RandomSource

DENSITY_MAX_QUBITS = 10
TRAJECTORY_MAX_QUBITS = 20
UNITARITY_TOL = 1e-12

_SQ2 = 1.0 / math.sqrt(2.0)

GATE_MATRICES = {
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "s": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=np.complex128),
    "cnot": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    "cz": np.diag([1, 1, 1, -1]).astype(np.complex128),
}


@dataclass(frozen=True)
class Gate:
    """A named 1- or 2-qubit unitary applied to specific targets.

    Two-qubit matrices act on the index 2*b(targets[0]) + b(targets[1]);
    for cnot, targets[0] is the control.
    """

    name: str
    targets: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", mat)
        k = len(self.targets)
        if k not in (1, 2) or len(set(self.targets)) != k:
            raise DimensionError(f"gate needs 1 or 2 distinct targets, got {self.targets}")
        if mat.shape != (1 << k, 1 << k):
            raise DimensionError(
                f"gate on {k} qubit(s) needs a {1 << k}x{1 << k} matrix, got {mat.shape}"
            )
        defect = np.max(np.abs(mat @ mat.conj().T - np.eye(1 << k)))
        if defect > UNITARITY_TOL:
            raise PreconditionError(f"gate matrix not unitary: defect {defect:.3e}")


def gate(name: str, *targets: int, matrix=None) -> Gate:
    """Build a gate from the registered set, or from an explicit unitary."""
    if matrix is None:
        if name not in GATE_MATRICES:
            raise PreconditionError(
                f"unknown gate {name!r}; registered: {sorted(GATE_MATRICES)}"
            )
        matrix = GATE_MATRICES[name]
    return Gate(name, tuple(int(t) for t in targets), np.asarray(matrix))


@dataclass
class Circuit:
    """A cycle-structured gate list; gates within a cycle act in parallel."""

    n_qubits: int
    cycles: list[list[Gate]]
    measured: list[int]

    def __post_init__(self):
        for cyc in self.cycles:
            seen: set[int] = set()
            for g in cyc:
                for q in g.targets:
                    if not 0 <= q < self.n_qubits:
                        raise DimensionError(f"target {q} out of range for {self.n_qubits} qubits")
                    if q in seen:
                        raise DimensionError(f"qubit {q} used twice in one cycle")
                    seen.add(q)
        if len(set(self.measured)) != len(self.measured):
            raise DimensionError("measured qubits must be distinct")
        for q in self.measured:
            if not 0 <= q < self.n_qubits:
                raise DimensionError(f"measured qubit {q} out of range")

    @property
    def n_cycles(self) -> int:
        return len(self.cycles)


@dataclass
class NoiseModel:
    """Depolarizing rates: per qubit per cycle, and per gate application.

    ``jitter`` is the relative spread of the lognormal rate perturbation
    used by the chaos probe; it does not affect plain runs.
    """

    t_qubit: float = 0.0
    t_gate: float = 0.0
    jitter: float = 0.0

    def __post_init__(self):
        for label, v in (("t_qubit", self.t_qubit), ("t_gate", self.t_gate)):
            if not 0.0 <= v <= 1.0:
                raise PreconditionError(f"{label} must lie in [0, 1], got {v}")
        if self.jitter < 0.0:
            raise PreconditionError(f"jitter must be non-negative, got {self.jitter}")

    def is_zero(self) -> bool:
        return self.t_qubit == 0.0 and self.t_gate == 0.0


def cat_circuit() -> Circuit:
    """H then CNOT: prepares (|00> + |11>)/sqrt(2), both qubits measured."""
    return Circuit(2, [[gate("h", 0)], [gate("cnot", 0, 1)]], [0, 1])


def cz_brickwork(n: int, depth: int) -> Circuit:
    """Two-qubit-gate-only brickwork of CZ cycles with alternating offset.

    Useful as a worst case for jointly firing gate errors: every noise event
    under a gate-only model hits a pair of qubits at once.
    """
    if n < 2:
        raise DimensionError(f"brickwork needs n >= 2, got {n}")
    cycles = []
    for layer in range(depth):
        offset = layer % 2
        cycles.append([gate("cz", q, q + 1) for q in range(offset, n - 1, 2)])
    return Circuit(n, cycles, list(range(n)))


# ----------------------------------------------------------------------
# Density-matrix path
# ----------------------------------------------------------------------

def zero_density(n: int) -> np.ndarray:
    rho = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    rho[0, 0] = 1.0
    return rho


def _apply_unitary_tensor(rho_t: np.ndarray, u: np.ndarray, axes: list[int], n: int):
    k = len(axes)
    ut = u.reshape((2,) * (2 * k))
    out = np.tensordot(ut, rho_t, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply_gate_density(rho: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """rho -> U rho U^dagger on the gate's targets."""
    for q in g.targets:
        if not 0 <= q < n:
            raise DimensionError(f"target {q} out of range for {n} qubits")
    t = rho.reshape((2,) * (2 * n))
    ket_axes = list(g.targets)
    bra_axes = [n + q for q in g.targets]
    t = _apply_unitary_tensor(t, g.matrix, ket_axes, n)
    t = _apply_unitary_tensor(t, g.matrix.conj(), bra_axes, n)
    return t.reshape(1 << n, 1 << n)


def apply_depolarizing(rho: np.ndarray, qubits, t: float, n: int) -> np.ndarray:
    """rho -> (1-t) rho + t (maximally mixed on ``qubits``) x Tr_qubits(rho)."""
    qubits = sorted(int(q) for q in qubits)
    if len(set(qubits)) != len(qubits):
        raise DimensionError("depolarized qubits must be distinct")
    for q in qubits:
        if not 0 <= q < n:
            raise DimensionError(f"qubit {q} out of range for {n} qubits")
    if not 0.0 <= t <= 1.0:
        raise PreconditionError(f"rate must lie in [0, 1], got {t}")
    if t == 0.0 or not qubits:
        return rho.copy()
    k = len(qubits)
    d = 1 << k
    rt = rho.reshape((2,) * (2 * n))
    axes = qubits + [n + q for q in qubits]
    moved = np.moveaxis(rt, axes, range(2 * k))
    rest_shape = moved.shape[2 * k :]
    flat = moved.reshape(d, d, -1)
    traced = np.einsum("aab->b", flat)
    mixed = np.zeros_like(flat)
    idx = np.arange(d)
    mixed[idx, idx, :] = traced[None, :] / d
    out = (1.0 - t) * flat + t * mixed
    out = np.moveaxis(out.reshape((2,) * (2 * k) + rest_shape), range(2 * k), axes)
    return out.reshape(1 << n, 1 << n)


def bitstrings(k: int) -> list[str]:
    return [format(i, f"0{k}b") for i in range(1 << k)] if k else [""]


def measurement_distribution(rho: np.ndarray, measured, n: int) -> OutcomeDistribution:
    """Computational-basis law of the measured qubits, by diagonal marginalization."""
    diag = np.real(np.diagonal(rho)).reshape((2,) * n)
    keep = list(measured)
    drop = [q for q in range(n) if q not in keep]
    marg = diag.sum(axis=tuple(drop)) if drop else diag
    if len(keep) > 1:
        # remaining axes sit in increasing qubit order; permute to listed order
        ranks = np.argsort(np.argsort(keep))
        marg = np.transpose(marg, axes=tuple(ranks))
    probs = marg.reshape(-1)
    return OutcomeDistribution(bitstrings(len(keep)), probs)


def run_circuit_density(circ: Circuit, noise: NoiseModel):
    """Exact noisy evolution: each gate is followed by its gate-error channel
    on its own targets, then every qubit sees the per-cycle channel.

    Returns (final density matrix, outcome distribution of the measured qubits).
    """
    n = circ.n_qubits
    if n > DENSITY_MAX_QUBITS:
        raise SizeCapError(f"density evolution capped at {DENSITY_MAX_QUBITS} qubits, got {n}")
    rho = zero_density(n)
    for cyc in circ.cycles:
        for g in cyc:
            rho = apply_gate_density(rho, g, n)
            if noise.t_gate > 0.0:
                rho = apply_depolarizing(rho, g.targets, noise.t_gate, n)
        if noise.t_qubit > 0.0:
            for q in range(n):
                rho = apply_depolarizing(rho, [q], noise.t_qubit, n)
    return rho, measurement_distribution(rho, circ.measured, n)


def check_density(rho: np.ndarray, tol: float = 1e-10) -> dict:
    """Trace, Hermiticity and positivity residuals (for tests and audits)."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag))
    min_eig = float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)))
    return {"herm": herm, "trace_dev": trace, "min_eig": min_eig, "ok": herm <= tol and trace <= tol and min_eig >= -1e-9}


# ----------------------------------------------------------------------
# Trajectory path (vectorized across shots)
# ----------------------------------------------------------------------

KIND_QUBIT = 0
KIND_GATE = 1


@dataclass
class ErrorRecords:
    """Per-shot log of noise firings: (cycle, qubits hit, qubit|gate kind)."""

    n_shots: int
    n_qubits: int
    shot: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    cycle: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int32))
    kind: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int8))
    qubits: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int16))

    def append(self, shots, cycle, kind, qubit_pair):
        count = len(shots)
        self.shot = np.concatenate([self.shot, np.asarray(shots, dtype=np.int64)])
        self.cycle = np.concatenate([self.cycle, np.full(count, cycle, dtype=np.int32)])
        self.kind = np.concatenate([self.kind, np.full(count, kind, dtype=np.int8)])
        pair = np.tile(np.asarray(qubit_pair, dtype=np.int16), (count, 1))
        self.qubits = np.concatenate([self.qubits, pair])

    @property
    def n_events(self) -> int:
        return self.shot.size

    def hit_matrix(self) -> np.ndarray:
        """Boolean (n_shots, n_qubits): qubit touched by any event in the shot."""
        hits = np.zeros((self.n_shots, self.n_qubits), dtype=bool)
        for col in range(self.qubits.shape[1]):
            q = self.qubits[:, col]
            valid = q >= 0
            hits[self.shot[valid], q[valid]] = True
        return hits

    def per_shot_counts(self) -> np.ndarray:
        """Number of distinct qubits hit in each shot."""
        return self.hit_matrix().sum(axis=1)

    def events_for_shot(self, s: int) -> list[tuple[int, tuple[int, ...], str]]:
        out = []
        for e in np.nonzero(self.shot == s)[0]:
            qs = tuple(int(q) for q in self.qubits[e] if q >= 0)
            out.append((int(self.cycle[e]), qs, "gate" if self.kind[e] == KIND_GATE else "qubit"))
        return out


def _haar_unitaries(count: int, dim: int, g: np.random.Generator) -> np.ndarray:
    z = (g.standard_normal((count, dim, dim)) + 1j * g.standard_normal((count, dim, dim)))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _haar_states(count: int, dim: int, g: np.random.Generator) -> np.ndarray:
    z = g.standard_normal((count, dim)) + 1j * g.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


class ShotBatch:
    """A batch of pure-state trajectories sharing a circuit schedule."""

    def __init__(self, n_qubits: int, shots: int):
        if n_qubits > TRAJECTORY_MAX_QUBITS:
            raise SizeCapError(
                f"trajectories capped at {TRAJECTORY_MAX_QUBITS} qubits, got {n_qubits}"
            )
        self.n = n_qubits
        self.shots = shots
        self.psi = np.zeros((shots, 1 << n_qubits), dtype=np.complex128)
        self.psi[:, 0] = 1.0

    def _axes_last(self, qubits):
        t = self.psi.reshape((self.shots,) + (2,) * self.n)
        k = len(qubits)
        src = [1 + q for q in qubits]
        dst = list(range(self.n + 1 - k, self.n + 1))
        return np.moveaxis(t, src, dst), k

    def apply_gate(self, g: Gate, mask: np.ndarray | None = None):
        view, k = self._axes_last(g.targets)
        d = 1 << k
        if mask is None:
            sub = view.reshape(self.shots, -1, d)
            view[...] = (sub @ g.matrix.T).reshape(view.shape)
        else:
            count = int(mask.sum())
            if count == 0:
                return
            sub = view[mask].reshape(count, -1, d)
            view[mask] = (sub @ g.matrix.T).reshape((count,) + view.shape[1:])

    def haar_replace(self, qubits, mask: np.ndarray, g: np.random.Generator):
        """Noise firing on ``qubits`` for the masked shots: measure them in a
        fresh Haar basis, discard the outcome, and tensor in an independent
        Haar-random pure state.  Channel average = depolarizing replacement.
        """
        count = int(mask.sum())
        if count == 0:
            return
        view, k = self._axes_last(qubits)
        d = 1 << k
        sub = view[mask].reshape(count, -1, d)
        basis = _haar_unitaries(count, d, g)
        amps = np.einsum("frq,fqo->fro", sub, basis.conj())
        probs = np.einsum("fro,fro->fo", amps, amps.conj()).real
        probs /= probs.sum(axis=1, keepdims=True)
        u = g.random(count)
        cdf = np.cumsum(probs, axis=1)
        outcome = np.minimum((cdf < u[:, None]).sum(axis=1), d - 1)
        chosen = np.take_along_axis(amps, outcome[:, None, None], axis=2)[:, :, 0]
        norm = np.sqrt(np.take_along_axis(probs, outcome[:, None], axis=1))[:, 0]
        rest = chosen / norm[:, None]
        fresh = _haar_states(count, d, g)
        view[mask] = (rest[:, :, None] * fresh[:, None, :]).reshape(view[mask].shape)

    def measure(self, qubits, g: np.random.Generator) -> np.ndarray:
        """Computational-basis measurement with collapse; returns bits
        (shots, k) ordered as ``qubits``."""
        view, k = self._axes_last(qubits)
        d = 1 << k
        sub = view.reshape(self.shots, -1, d)
        probs = np.einsum("fro,fro->fo", sub, sub.conj()).real
        probs /= probs.sum(axis=1, keepdims=True)
        u = g.random(self.shots)
        cdf = np.cumsum(probs, axis=1)
        outcome = np.minimum((cdf < u[:, None]).sum(axis=1), d - 1)
        norm = np.sqrt(np.take_along_axis(probs, outcome[:, None], axis=1))[:, 0]
        collapsed = np.zeros_like(sub)
        sel = np.take_along_axis(sub, outcome[:, None, None], axis=2)
        np.put_along_axis(collapsed, outcome[:, None, None], sel / norm[:, None, None], axis=2)
        view[...] = collapsed.reshape(view.shape)
        bits = (outcome[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1
        return bits.astype(np.int8)

    def outcome_probs(self, qubits) -> np.ndarray:
        """Per-shot computational-basis law of ``qubits``, shape (shots, 2^k)."""
        view, k = self._axes_last(qubits)
        d = 1 << k
        sub = view.reshape(self.shots, -1, d)
        probs = np.einsum("fro,fro->fo", sub, sub.conj()).real
        return probs / probs.sum(axis=1, keepdims=True)


TRAJECTORY_CHUNK = 4096


def run_circuit_trajectories(
    circ: Circuit,
    noise: NoiseModel,
    shots: int,
    rng: RandomSource,
    chunk: int = TRAJECTORY_CHUNK,
):
    """Stochastic unraveling of the depolarizing channel, ``shots`` trajectories.

    Each trajectory contributes its exact terminal measurement law, so the
    returned average converges to the density-matrix output with variance
    driven only by the noise firings.  Returns (empirical
    OutcomeDistribution over the measured qubits, ErrorRecords of every
    firing).  The draw order is fixed by (chunk, cycle, site), so results
    are reproducible for a given seed.
    """
    n = circ.n_qubits
    k = len(circ.measured)
    g = rng.generator
    prob_sum = np.zeros(1 << k, dtype=np.float64)
    records = ErrorRecords(n_shots=shots, n_qubits=n)

    done = 0
    while done < shots:
        b = min(chunk, shots - done)
        batch = ShotBatch(n, b)
        for c, cyc in enumerate(circ.cycles):
            for gt in cyc:
                batch.apply_gate(gt)
                if noise.t_gate > 0.0:
                    fired = g.random(b) < noise.t_gate
                    if fired.any():
                        batch.haar_replace(gt.targets, fired, g)
                        pair = list(gt.targets) + [-1] * (2 - len(gt.targets))
                        records.append(done + np.nonzero(fired)[0], c, KIND_GATE, pair)
            if noise.t_qubit > 0.0:
                for q in range(n):
                    fired = g.random(b) < noise.t_qubit
                    if fired.any():
                        batch.haar_replace((q,), fired, g)
                        records.append(done + np.nonzero(fired)[0], c, KIND_QUBIT, [q, -1])
        prob_sum += batch.outcome_probs(circ.measured).sum(axis=0)
        done += b

    empirical = OutcomeDistribution(bitstrings(k), prob_sum / shots)
    return empirical, records


# ----------------------------------------------------------------------
# Random circuits
# ----------------------------------------------------------------------

def random_circuit(n: int, depth: int, rng: RandomSource) -> Circuit:
    """Brickwork ensemble: a cycle of fresh Haar single-qubit gates on every
    qubit, then a cycle of CZ on a pairing that shifts by one each layer.
    ``depth`` counts such cycle pairs; all qubits are measured.
    """
    if n < 2:
        raise DimensionError(f"random circuits need n >= 2, got {n}")
    g = rng.generator
    cycles: list[list[Gate]] = []
    for layer in range(depth):
        us = _haar_unitaries(n, 2, g)
        cycles.append([Gate("u", (q,), us[q]) for q in range(n)])
        offset = layer % 2
        cz_cycle = [gate("cz", q, q + 1) for q in range(offset, n - 1, 2)]
        cycles.append(cz_cycle)
    return Circuit(n, cycles, list(range(n)))


# ----------------------------------------------------------------------
# JSON interchange
# ----------------------------------------------------------------------

def circuit_to_json(circ: Circuit) -> str:
    def enc_gate(g: Gate):
        d = {"gate": g.name, "targets": list(g.targets)}
        if g.name not in GATE_MATRICES:
            d["matrix"] = {
                "re": [float(v) for v in g.matrix.real.ravel()],
                "im": [float(v) for v in g.matrix.imag.ravel()],
            }
        return d

    return json.dumps(
        {
            "n_qubits": circ.n_qubits,
            "cycles": [[enc_gate(g) for g in cyc] for cyc in circ.cycles],
            "measured": list(circ.measured),
        }
    )


def circuit_from_json(text: str) -> Circuit:
    obj = json.loads(text)
    cycles = []
    for cyc in obj["cycles"]:
        row = []
        for gd in cyc:
            name = gd["gate"]
            targets = gd["targets"]
            if "matrix" in gd:
                d = 1 << len(targets)
                re = np.asarray(gd["matrix"]["re"]).reshape(d, d)
                im = np.asarray(gd["matrix"]["im"]).reshape(d, d)
                row.append(Gate(name, tuple(targets), re + 1j * im))
            else:
                row.append(gate(name, *targets))
        cycles.append(row)
    return Circuit(int(obj["n_qubits"]), cycles, list(obj["measured"]))


def noise_to_json(nm: NoiseModel) -> str:
    return json.dumps({"t_qubit": nm.t_qubit, "t_gate": nm.t_gate, "jitter": nm.jitter})


def noise_from_json(text: str) -> NoiseModel:
    obj = json.loads(text)
    return NoiseModel(
        t_qubit=float(obj.get("t_qubit", 0.0)),
        t_gate=float(obj.get("t_gate", 0.0)),
        jitter=float(obj.get("jitter", 0.0)),
    )
