"""Three-qubit bit-flip repetition code under depolarizing noise.

The encoded register holds data qubits 0-2 and syndrome ancillas 3-4.  A run
encodes |0_L>, idles for a configurable number of memory cycles, extracts
both parity syndromes with four CNOTs, measures the ancillas, applies the
syndrome-decoded correction classically to the measured data bits (X before
a computational measurement only flips the recorded bit), and majority-votes
the corrected bits.  The physical baseline is one unencoded qubit idling for
the same number of cycles under the same per-cycle rate.

A depolarizing hit replaces a qubit's state with a Haar-random pure one, so
it flips a computational-basis bit with probability 1/2: a rate-t channel
acts on measured bits like a bit-flip channel of strength t/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from nisqlab.errors import PreconditionError
from nisqlab.qsim import KIND_GATE, KIND_QUBIT, Gate, ShotBatch, gate
from nisqlab.rng import RandomSource

_Z95 = 1.959963984540054

DATA = (0, 1, 2)
ANCILLAS = (3, 4)


@dataclass
class CodeResult:
    logical_error: float
    logical_ci: tuple[float, float]
    physical_error: float
    physical_ci: tuple[float, float]
    shots: int


def _ci(p: float, n: int) -> tuple[float, float]:
    half = _Z95 * math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return (max(p - half, 0.0), min(p + half, 1.0))


def _encoded_cycles(memory_cycles: int) -> list[list[Gate]]:
    cycles: list[list[Gate]] = [
        [gate("cnot", 0, 1)],
        [gate("cnot", 0, 2)],
    ]
    cycles += [[] for _ in range(memory_cycles)]
    cycles += [
        [gate("cnot", 0, 3), gate("cnot", 1, 4)],
        [gate("cnot", 1, 3), gate("cnot", 2, 4)],
    ]
    return cycles


def bitflip_code_experiment(
    t_gate: float,
    t_qubit: float,
    shots: int,
    rng: RandomSource,
    memory_cycles: int = 1,
    noise_scope: str = "all",
    chunk: int = 4096,
) -> CodeResult:
    """Logical vs physical error rate of one syndrome-extraction round.

    ``noise_scope`` selects where per-cycle qubit noise acts: "all" (every
    qubit, every cycle; gate noise active) or "memory-data" (data qubits
    during memory cycles only, no gate noise), the configuration with the
    closed-form majority failure law 3q^2 - 2q^3 at q = t_qubit / 2.
    """
    if shots < 1:
        raise PreconditionError(f"shots must be >= 1, got {shots}")
    if noise_scope not in ("all", "memory-data"):
        raise PreconditionError(f"unknown noise_scope {noise_scope!r}")
    if memory_cycles < 0:
        raise PreconditionError("memory_cycles must be >= 0")

    cycles = _encoded_cycles(memory_cycles)
    memory_range = range(2, 2 + memory_cycles)
    g = rng.generator

    logical_fails = 0
    physical_fails = 0
    done = 0
    while done < shots:
        b = min(chunk, shots - done)

        # encoded register
        batch = ShotBatch(5, b)
        for c, cyc in enumerate(cycles):
            for gt in cyc:
                batch.apply_gate(gt)
                if noise_scope == "all" and t_gate > 0.0:
                    fired = g.random(b) < t_gate
                    batch.haar_replace(gt.targets, fired, g)
            if noise_scope == "all":
                noisy_qubits = range(5) if t_qubit > 0.0 else ()
            else:
                noisy_qubits = DATA if (c in memory_range and t_qubit > 0.0) else ()
            for q in noisy_qubits:
                fired = g.random(b) < t_qubit
                batch.haar_replace((q,), fired, g)
        syndrome = batch.measure(ANCILLAS, g)
        data_bits = batch.measure(DATA, g)
        s1, s2 = syndrome[:, 0].astype(bool), syndrome[:, 1].astype(bool)
        # classical correction: flip the data bit the syndrome points at
        data_bits[s1 & ~s2, 0] ^= 1
        data_bits[s1 & s2, 1] ^= 1
        data_bits[~s1 & s2, 2] ^= 1
        votes = data_bits.sum(axis=1) >= 2
        logical_fails += int(votes.sum())

        # unencoded baseline: same cycle count, same per-cycle rate
        base = ShotBatch(1, b)
        for c in range(len(cycles)):
            if noise_scope == "all":
                active = t_qubit > 0.0
            else:
                active = c in memory_range and t_qubit > 0.0
            if active:
                fired = g.random(b) < t_qubit
                base.haar_replace((0,), fired, g)
        bit = base.measure((0,), g)[:, 0]
        physical_fails += int(bit.sum())

        done += b

    p_log = logical_fails / shots
    p_phys = physical_fails / shots
    return CodeResult(
        logical_error=p_log,
        logical_ci=_ci(p_log, shots),
        physical_error=p_phys,
        physical_ci=_ci(p_phys, shots),
        shots=shots,
    )
