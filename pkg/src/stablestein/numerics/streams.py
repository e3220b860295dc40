#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Reproducible random streams and parallel streamed moments
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RngStream",
    "normal_stream",
    "uniform_stream",
    "exponential_stream",
    "parallel_moments",
    "merge_moments",
]

# spawn-key words are 32 bit; worker keys end in this word, child keys never hold it
_WORKER_TAG = 2 ** 32 - 1


@dataclass(frozen=True)
class RngStream:
    """Value-typed random stream

    Every call to generator() starts the same sequence, so the samples a
    consumer draws are a pure function of (seed, stream_id, key) and its own
    arguments. Children obtained with child() are statistically independent
    of their parent and of each other.
    """
    seed: int
    stream_id: int = 0
    key: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if int(self.stream_id) < 0:
            raise ValueError(f"stream_id must be non-negative, got {self.stream_id}")

    def generator(self):
        seq = np.random.SeedSequence(int(self.seed),
                                     spawn_key=(int(self.stream_id),) + tuple(self.key))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, index):
        index = int(index)
        if not 0 <= index < _WORKER_TAG:
            raise ValueError(f"child index must lie in [0, {_WORKER_TAG}), got {index}")
        return RngStream(self.seed, self.stream_id, tuple(self.key) + (index,))

    def worker(self, index):
        """Stream owned by worker number index, disjoint from every child()"""
        index = int(index)
        if not 0 <= index < 2 ** 32:
            raise ValueError(f"worker index must fit in 32 unsigned bits, got {index}")
        return RngStream(self.seed, index, tuple(self.key) + (int(self.stream_id), _WORKER_TAG))


def normal_stream(rng, n):
    """n standard normal variates from rng"""
    return rng.generator().standard_normal(int(n))


def uniform_stream(rng, n):
    """n uniform variates on [0, 1) from rng"""
    return rng.generator().random(int(n))


def exponential_stream(rng, n):
    """n unit-rate exponential variates from rng"""
    return rng.generator().standard_exponential(int(n))


def merge_moments(parts):
    """Merge (count, mean, m2) triples in the given order

    Pairwise update of Chan, Golub and LeVeque; m2 is the sum of squared
    deviations from the mean.
    """
    count, mean, m2 = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in parts:
        if n_b == 0:
            continue
        total = count + n_b
        delta = mean_b - mean
        mean = mean + delta * n_b / total
        m2 = m2 + m2_b + delta ** 2 * count * n_b / total
        count = total
    return count, mean, m2


def _moments(values):
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return 0, 0.0, 0.0
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


def parallel_moments(fn, n, rng, workers=1, chunk=20000):
    """Streamed mean and variance of fn over n draws split across workers

    Parameters
    ----------
    fn : callable
        fn(size, stream) returns an array of size values drawn from stream
    n : int
        Total number of draws
    rng : RngStream
        Parent stream; worker i draws from rng.worker(i)
    workers : int
        Number of worker threads
    chunk : int
        Draws per call of fn; each chunk uses its own child stream

    Returns
    -------
    tuple
        (count, mean, m2) merged in worker order, so the result depends only
        on (rng, n, workers, chunk)
    """
    workers = max(1, int(workers))
    sizes = [n // workers + (1 if i < n % workers else 0) for i in range(workers)]

    def run(i):
        stream = rng.worker(i)
        parts, done, k = [], 0, 0
        while done < sizes[i]:
            size = min(chunk, sizes[i] - done)
            parts.append(_moments(fn(size, stream.child(k))))
            done += size
            k += 1
        return merge_moments(parts)

    if workers == 1:
        results = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(workers)))
    return merge_moments(results)
