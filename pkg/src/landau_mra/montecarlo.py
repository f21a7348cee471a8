"""Deterministic parallel Monte Carlo plumbing.

Every chunk of samples draws from its own Philox stream keyed by
(seed, *key, chunk index).  Chunk boundaries depend only on the point count,
so the sampled values, and hence every reduction, are independent of how
many worker threads run them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK_SIZE = 8192


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(n_points: int, chunk_size: int = CHUNK_SIZE) -> list[int]:
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    full, rest = divmod(n_points, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_chunks(work, seed: int, key: tuple[int, ...], n_points: int,
               chunk_size: int = CHUNK_SIZE, threads: int = 1) -> np.ndarray:
    """Concatenate work(rng, size) over all chunks, in chunk order."""
    jobs = [(stream(seed, *key, i), size) for i, size in enumerate(chunk_sizes(n_points, chunk_size))]
    if threads <= 1 or len(jobs) == 1:
        parts = [work(rng, size) for rng, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: work(*job), jobs))
    return np.concatenate(parts)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n_points: int
    imag: float = 0.0
    imag_stderr: float = 0.0

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n_points": self.n_points,
            "imag": self.imag,
            "imag_stderr": self.imag_stderr,
        }


def batch_stderr(samples: np.ndarray, n_batches: int = 32) -> float:
    """Standard error of the mean from contiguous batch means."""
    n = samples.size
    k = max(2, min(n_batches, n))
    usable = (n // k) * k
    means = samples[:usable].reshape(k, -1).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(k))


def summarize(samples: np.ndarray, n_batches: int = 32) -> Estimate:
    samples = np.asarray(samples)
    re = samples.real.astype(float)
    out = Estimate(float(re.mean()), batch_stderr(re, n_batches), samples.size)
    if np.iscomplexobj(samples):
        im = samples.imag
        out = Estimate(out.value, out.stderr, out.n_points, float(im.mean()), batch_stderr(im, n_batches))
    return out
