"""Seeded, splittable random-number streams and basic distribution draws.

Every stochastic routine in the package derives its generators through
:func:`substream`, keyed by an integer seed plus a tuple of non-negative
integers identifying the consumer (replicate index, sweep cell, method id,
...).  Streams with different keys are statistically independent, and the
stream for a given key depends only on ``(seed, key)`` -- never on how many
other streams exist or in which order they are created.  That is what makes
results reproducible across serial, chunked, and multi-process execution.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError


def substream(seed: int | tuple, *key: int) -> np.random.Generator:
    """Return an independent generator for ``(seed, key)``.

    ``seed`` may be an int or a tuple of ints (a composite seed, as used by
    sweep cells).  Equivalent to taking the ``key``-th child of
    ``np.random.SeedSequence(seed)`` through nested ``spawn`` calls, but
    constructed directly so no spawn bookkeeping is shared between callers.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def unit_exponential(rng: np.random.Generator, size=None):
    """Draw from Exponential(rate=1)."""
    return rng.standard_exponential(size)


def uniform(rng: np.random.Generator, size=None):
    """Draw from Uniform[0, 1)."""
    return rng.random(size)


def standard_normal(rng: np.random.Generator, size=None):
    """Draw from Normal(0, 1)."""
    return rng.standard_normal(size)


def categorical(n: int, rng: np.random.Generator, size=None):
    """Draw uniformly distributed indices from ``{0, ..., n-1}``."""
    if n < 1:
        raise InputError("categorical requires n >= 1")
    return rng.integers(0, n, size=size)
