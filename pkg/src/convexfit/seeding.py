"""Deterministic seed derivation.

Every stochastic component (fold shuffles, bootstrap resamples, smearing
noise, random split directions) draws from a generator seeded through
:func:`mix`, so a single 64-bit root seed pins the entire pipeline down
to the bit level.  Derived streams for distinct key tuples are distinct:
each mixing step adds ``GOLDEN * (key + 1)`` (odd multiplier, hence
injective mod 2**64) and applies the splitmix64 finalizer, a bijection.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def mix(seed: int, *keys: int) -> int:
    """Derive a new 64-bit seed from ``seed`` and a tuple of integer keys."""
    h = seed & _MASK
    for k in keys:
        h = (h + _GOLDEN * (int(k) + 1)) & _MASK
        h = _finalize(h)
    return h


def rng_from(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for the derived stream ``mix(seed, *keys)``."""
    return np.random.default_rng(mix(seed, *keys))


def kfold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    """Fold id per index: seeded shuffle, then dealt round-robin.

    Raises ``ValueError`` when ``n < folds`` (a fold would be empty).
    """
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    if n < folds:
        raise ValueError(f"cannot split {n} observations into {folds} folds")
    perm = rng_from(seed, 0xF01D).permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[perm] = np.arange(n, dtype=np.int64) % folds
    return fold_of
