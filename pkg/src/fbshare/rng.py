"""Seeded random banks and signals.

Draws come from numpy's PCG64 bit generator.  A coefficient is +1 when the
top bit of the next raw 64-bit draw is set, -1 otherwise.  Seed 50 is the
conventional default; it does not reproduce any other tool's stream.
"""

from __future__ import annotations

import os

import numpy as np

from .core import FilterBank, validate_bank

DEFAULT_SEED = 50
SEED_ENV = "FBSHARE_SEED"


def default_seed() -> int:
    """``FBSHARE_SEED`` if set, else :data:`DEFAULT_SEED`."""
    value = os.environ.get(SEED_ENV)
    return int(value) if value not in (None, "") else DEFAULT_SEED


def _bit_generator(seed: int, stream: int | None = None) -> np.random.PCG64:
    if stream is None:
        return np.random.PCG64(np.random.SeedSequence(seed))
    return np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_signs(n: int, seed: int, stream: int | None = None) -> np.ndarray:
    raw = _bit_generator(seed, stream).random_raw(n)
    top = (np.asarray(raw, dtype=np.uint64) >> np.uint64(63)).astype(np.int8)
    return 2 * top - 1


def random_bank(K: int, M: int, seed: int, stream: int | None = None) -> FilterBank:
    """Equiprobable +/-1 bank; ``stream`` selects an independent substream
    (one per Monte-Carlo trial) so trials can run in any order."""
    if K < 1 or M < 1:
        raise ValueError(f"K and M must be positive, got K={K}, M={M}")
    return validate_bank(random_signs(K * M, seed, stream).reshape(K, M))


def random_signal(n: int, seed: int, width: int = 16, stream: int | None = None) -> np.ndarray:
    """Uniform integers in ``(-2**(width-1), 2**(width-1))``."""
    gen = np.random.Generator(_bit_generator(seed, stream))
    lim = 2 ** (width - 1)
    return gen.integers(-lim + 1, lim, size=n, dtype=np.int64)
