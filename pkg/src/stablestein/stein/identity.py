#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Monte Carlo check of the characterising identity E[A g(X)] = 0
"""

import math
from dataclasses import dataclass

from stablestein.numerics.streams import parallel_moments
from stablestein.stable.levy import IDDTriplet
from stablestein.stable.params import StableParams, derive_params
from stablestein.stable.sample import sample, sample_idd

__all__ = [
    "MCEstimate",
    "sampler_for",
    "mc_mean",
    "stein_identity_mc",
]


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error"""
    mean: float
    std_error: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not self.std_error >= 0:
            raise ValueError(f"std_error must be non-negative, got {self.std_error}")

    def passes(self, k=3.0):
        """True when |mean| <= k standard errors"""
        return abs(self.mean) <= k * self.std_error

    @property
    def z_score(self):
        if self.std_error == 0:
            return 0.0 if self.mean == 0 else math.inf
        return abs(self.mean) / self.std_error


def sampler_for(target):
    """sampler(size, stream) for a StableParams, an IDDTriplet or a callable"""
    if isinstance(target, StableParams):
        derived = derive_params(target)
        return lambda size, stream: sample(target, size, stream, derived)
    if isinstance(target, IDDTriplet):
        return lambda size, stream: sample_idd(target, size, stream)
    if callable(target):
        return target
    raise TypeError(f"cannot sample from {type(target).__name__}")


def mc_mean(fn, target, n, rng, workers=1, chunk=20000):
    """Streamed Monte Carlo mean of fn(X) for X drawn from target"""
    draw = sampler_for(target)
    count, mean, m2 = parallel_moments(lambda size, stream: fn(draw(size, stream)),
                                       int(n), rng, workers, chunk)
    return MCEstimate(mean, math.sqrt(m2 / (count - 1) / count), count)


def stein_identity_mc(op, target, g, n, rng, workers=1, chunk=20000):
    """Estimate E[op(g, X)] for X drawn from target

    Parameters
    ----------
    op : callable
        Operator closure op(g, x) returning a SteinOpResult
    target : StableParams, IDDTriplet or callable
        Law of X, or a sampler(size, stream)
    g : TestFunction
        Test function
    n : int
        Number of samples, at least 1000
    rng : RngStream
        Parent random stream
    workers : int
        Worker threads, each owning rng.worker(i)

    Returns
    -------
    MCEstimate
        Mean and standard error; the identity is accepted when
        MCEstimate.passes() holds
    """
    if n < 1000:
        raise ValueError(f"n must be at least 1000, got {n}")
    return mc_mean(lambda x: op(g, x).value, target, n, rng, workers, chunk)
