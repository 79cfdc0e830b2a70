from __future__ import annotations

import numpy as np


def _as_entropy(key: int | str) -> int:
    if isinstance(key, str):
        return int.from_bytes(key.encode("utf-8"), "little")
    return int(key)


def derive_seed(master: int, *keys: int | str) -> int:
    """Derive an independent 64-bit seed from a master seed and a job key.

    Keys may be integers or short strings (method tags). Distinct keys give
    statistically independent streams through ``numpy.random.SeedSequence``.
    """
    entropy = [_as_entropy(master), *(_as_entropy(k) for k in keys)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)
