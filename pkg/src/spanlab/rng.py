"""Seedable, splittable random streams for reproducible experiments.

Every experiment records one 64-bit master seed.  Substreams (per trial,
per role) are derived with ``numpy.random.SeedSequence`` spawn keys, so
trial ``t`` of an experiment can be replayed in isolation and trials can
run in parallel without any shared RNG state.
"""

from __future__ import annotations

import secrets

from numpy.random import PCG64, Generator, SeedSequence

# Role tags used as the first spawn-key component of derived streams.
TREE = 0  # spanning-tree sampling
SUBSET = 1  # random vertex subsets
RECONF = 2  # new-parent choices during leaf reconfiguration
MODEL = 3  # one-out draws in the bipartite degree model
BOOTSTRAP = 4  # confidence-interval resampling
GENERATE = 5  # graph generation


def resolve_seed(seed: int | None = None) -> int:
    """Return ``seed`` as a 64-bit int, drawing a fresh one if ``None``."""
    if seed is None:
        return secrets.randbits(64)
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a non-negative 64-bit integer")
    return seed


def stream(master: int, *path: int) -> Generator:
    """Derive the PCG64 generator addressed by spawn-key ``path``.

    ``stream(s)`` is the root stream for master seed ``s``;
    ``stream(s, role, t)`` is the stream for role ``role`` of trial ``t``.

    Hot loops in the samplers draw batches of float64s from these
    generators and index with ``int(u * k)``: that is about 6x faster
    than scalar ``Generator.integers`` calls, never reaches ``k`` (the
    largest float64 below 1 times ``k`` rounds down), and carries a
    per-draw bias of order ``k * 2**-53``, far below anything the
    statistical tests can resolve.
    """
    return Generator(PCG64(SeedSequence(master, spawn_key=path)))
