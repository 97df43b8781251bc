"""Named, reproducible random substreams derived from one master seed."""

from __future__ import annotations

import hashlib

import numpy as np


def _stage_words(stage: str) -> tuple[int, ...]:
    digest = hashlib.sha256(stage.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))


def substream(seed: int, stage: str) -> np.random.Generator:
    """Generator for a named stage, independent of other stages' streams.

    The mapping (seed, stage) -> stream is stable across platforms and
    process runs (stage names are hashed with sha256, not ``hash()``).
    """
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + _stage_words(stage)))


def substream_seed(seed: int, stage: str) -> int:
    """Plain integer seed for APIs that take one, same derivation as substream."""
    ss = np.random.SeedSequence((int(seed),) + _stage_words(stage))
    state = ss.generate_state(2, dtype=np.uint64)
    return int(state[0] ^ (state[1] >> 1))
