"""
Named, seeded random streams.

All randomness derives from a single integer seed. Each consumer asks for a
named substream so that stages stay independently reproducible: changing the
number of shuffles never perturbs the initial parameters, and so on.
The generator is NumPy's PCG64 seeded through SeedSequence with a fixed
spawn key per stream name.
"""
import numpy as np

from .errors import DomainError

STREAMS = {
    "data": 0,
    "init": 1,
    "shuffle": 2,
    "target": 3,
    "transform": 4,
}


def substream(seed: int, name: str) -> np.random.Generator:
    """Return the generator for stream `name` under `seed`.

    Raises:
        DomainError: If the stream name is unknown or the seed is negative
    """
    if name not in STREAMS:
        raise DomainError(f"Unknown random stream '{name}'")
    if seed < 0:
        raise DomainError(f"Seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=(STREAMS[name],))
    return np.random.Generator(np.random.PCG64(sequence))
