"""Desk-scale numerical experiments on noisy quantum sampling.

Subpackages cover exact boson/fermion sampling, the Gaussian-mixing noisy
boson-sampling model, Boolean-function noise stability, and a depolarizing
noisy-circuit simulator, plus a reproducible experiment harness (``lab`` CLI).
"""

from nisqlab.rng import RandomSource

__all__ = ["RandomSource"]
__version__ = "0.1.0"
