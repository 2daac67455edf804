"""Seeded Monte-Carlo estimates of P, used to screen search candidates.

Each configuration draws from its own PCG64 stream, seeded from the user
seed and a stable 64-bit digest of the frequencies, so results do not
depend on evaluation order or on how work is split across processes.
Draws are consumed strictly in stream order: the first ``k`` accepted
samples are the same whatever block sizes are used to fetch them.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .core import Configuration

#: Draws where some |cos(a x)| falls below this are replaced by fresh ones.
BOUNDARY_GUARD = 1e-12
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    samples: int
    stderr: float
    seed: int
    successes: int = 0

    @classmethod
    def from_counts(cls, successes: int, samples: int, seed: int) -> "McEstimate":
        p = successes / samples
        return cls(p, samples, math.sqrt(p * (1.0 - p) / samples), seed, successes)

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "samples": self.samples, "stderr": self.stderr, "seed": self.seed}


def config_digest(config: Configuration) -> int:
    text = ",".join(map(str, config.freqs)).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def stream_for(config: Configuration, seed: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed & _SEED_MASK, spawn_key=(config_digest(config),))
    return np.random.Generator(np.random.PCG64(seq))


class SignSampler:
    """Counts sign agreements over the accepted draws of one stream.

    A draw is y uniform in [0, 1), i.e. x = 2*pi*y. The sign of cos(a x) is
    read from the phase a*y mod 1: positive on [0, 1/4) and (3/4, 1). The
    signed distance ``q`` of the phase from those quarter points satisfies
    |cos(a x)| = |sin(2 pi q)|, so the boundary guard becomes |q| < guard/(2 pi).
    """

    _guard = BOUNDARY_GUARD / (2.0 * math.pi)

    def __init__(self, config: Configuration, seed: int):
        self.rng = stream_for(config, seed)
        self.freqs = np.asarray(config.freqs, dtype=np.float64)[:, None]
        self.drawn = 0
        self.successes = 0

    def draw(self, k: int) -> int:
        hits = 0
        need = k
        while need:
            z = self.freqs * self.rng.random(need)
            q = np.abs(z - np.floor(z) - 0.5) - 0.25  # > 0 iff cos(a x) > 0
            bad = np.abs(q).min(axis=0) < self._guard
            agree = (q.min(axis=0) > 0) | (q.max(axis=0) < 0)
            hits += int(np.count_nonzero(agree & ~bad))
            need = int(np.count_nonzero(bad))
        self.drawn += k
        self.successes += hits
        return hits


def estimate(config: Configuration, samples: int, seed: int) -> McEstimate:
    if samples < 1:
        raise ValueError("samples must be positive")
    sampler = SignSampler(config, seed)
    sampler.draw(samples)
    return McEstimate.from_counts(sampler.successes, samples, seed)


def screen(
    config: Configuration,
    samples: int,
    seed: int,
    incumbent: float,
    margin: float,
    first_block: int = 512,
) -> tuple[bool, McEstimate]:
    """Sequential screen against an exact incumbent value.

    Samples in doubling blocks up to ``samples``; returns ``(False, est)`` as
    soon as ``estimate - margin * stderr > incumbent``, else ``(True, est)``
    where ``est`` equals ``estimate(config, samples, seed)``.
    """
    sampler = SignSampler(config, seed)
    block = min(first_block, samples)
    while True:
        sampler.draw(min(block, samples - sampler.drawn))
        est = McEstimate.from_counts(sampler.successes, sampler.drawn, seed)
        if est.estimate - margin * est.stderr > incumbent:
            return False, est
        if sampler.drawn >= samples:
            return True, est
        block = sampler.drawn
