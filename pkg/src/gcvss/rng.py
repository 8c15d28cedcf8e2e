"""Reproducible random streams derived from one 64-bit seed.

Each stream is keyed by a tuple of labels, so ``stream(seed, "trial", 17)``
is the same no matter how many other streams were drawn before it. That keeps
trial ``i`` of a sweep identical when the sweep is lengthened or split across
worker processes.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_words(labels) -> list[int]:
    h = hashlib.blake2b(digest_size=16)
    for label in labels:
        h.update(repr(label).encode())
        h.update(b"\x00")
    digest = h.digest()
    return [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]


def stream(seed: int, *labels) -> np.random.Generator:
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=_label_words(labels))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an int seed, or None (fresh OS entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.default_rng()
    if isinstance(rng, (int, np.integer)):
        return stream(int(rng))
    # duck-typed stand-ins (test doubles) pass through
    return rng
