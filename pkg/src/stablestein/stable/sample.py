#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Sampling from stable and compound-Poisson infinitely divisible laws
"""

import math
from dataclasses import dataclass

import numpy as np

from stablestein.errors import WrongType
from stablestein.numerics.streams import RngStream, parallel_moments
from stablestein.stable.params import derive_params

__all__ = [
    "sample",
    "sample_standard",
    "sample_idd",
    "FractionalMoment",
    "fractional_moment",
]


def sample_standard(alpha, theta, size, gen):
    """Standard stable variates with cf exp{-|t|^alpha (1 - i theta sgn(t) tan(pi alpha/2))}

    At alpha = 1 the cf is exp{-|t| (1 + i theta sgn(t) (2/pi) log|t|)}.
    Transform of a uniform angle and a unit exponential.
    """
    v = np.pi * (gen.random(size) - 0.5)
    w = gen.standard_exponential(size)
    if alpha == 1:
        half_pi = 0.5 * np.pi
        shifted = half_pi + theta * v
        return (2 / np.pi) * (shifted * np.tan(v)
                              - theta * np.log(half_pi * w * np.cos(v) / shifted))
    tan_a = np.tan(0.5 * np.pi * alpha)
    b = np.arctan(theta * tan_a) / alpha
    s = (1 + theta * theta * tan_a * tan_a) ** (0.5 / alpha)
    av = alpha * (v + b)
    return (s * np.sin(av) / np.cos(v) ** (1 / alpha)
            * (np.cos(v - av) / w) ** ((1 - alpha) / alpha))


def sample(params, n, rng, derived=None):
    """Draw n variates of S(alpha, beta)

    Samples are produced in the closed-form parameterisation, scaled by
    d^{1/alpha} and shifted by gamma_alpha.

    Parameters
    ----------
    params : StableParams
        Stable law
    n : int
        Sample size
    rng : RngStream
        Random stream; identical streams give identical samples
    derived : DerivedParams, optional
        Precomputed derived parameters

    Returns
    -------
    numpy.ndarray
        Samples
    """
    derived = derive_params(params) if derived is None else derived
    a, d, theta = params.alpha, derived.d_alpha, derived.theta
    z = sample_standard(a, theta, int(n), rng.generator())
    if a == 1:
        return derived.gamma_alpha + d * z + (2 / np.pi) * theta * d * math.log(d)
    return derived.gamma_alpha + d ** (1 / a) * z


def _jump_inverse(levy, n_grid=8193):
    lo, hi = levy.support
    u = np.linspace(lo, hi, n_grid)
    dens = np.asarray(levy.density(u), dtype=float)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(u))])
    mass = cdf[-1]
    return mass, lambda p: np.interp(p * mass, cdf, u)


def sample_idd(triplet, n, rng):
    """Draw n variates of a Gaussian and/or compound-Poisson triplet

    The Lévy part is sampled as a compound Poisson sum with jumps drawn by
    inverting the tabulated jump distribution; the drift is
    beta - int_{|u|<=1} u nu(du).
    """
    levy = triplet.levy
    gen = rng.generator()
    out = np.zeros(int(n))
    drift = triplet.beta
    if not levy.is_zero:
        if levy.idd_type != "A":
            raise WrongType(f"only finite Lévy measures can be sampled, got type {levy.idd_type}")
        rate, inverse = _jump_inverse(levy)
        counts = gen.poisson(rate, int(n))
        jumps = inverse(gen.random(int(counts.sum())))
        out += np.bincount(np.repeat(np.arange(int(n)), counts), weights=jumps, minlength=int(n))
        drift -= levy.small_moment()
    if triplet.sigma2 > 0:
        out += math.sqrt(triplet.sigma2) * gen.standard_normal(int(n))
    return out + drift


@dataclass(frozen=True)
class FractionalMoment:
    """Monte Carlo estimate of E|X|^delta; value is inf when the moment does not exist"""
    value: float
    std_error: float
    n: int

    @property
    def finite(self):
        return math.isfinite(self.value)


def fractional_moment(params, delta, n=100000, rng=None, workers=1):
    """E|X|^delta for X ~ S(alpha, beta)

    The moment is finite exactly when delta < alpha.
    """
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    if delta == 0:
        return FractionalMoment(1.0, 0.0, int(n))
    if delta >= params.alpha:
        return FractionalMoment(math.inf, math.inf, int(n))
    rng = RngStream(0) if rng is None else rng
    derived = derive_params(params)

    def draw(size, stream):
        return np.abs(sample(params, size, stream, derived)) ** delta

    count, mean, m2 = parallel_moments(draw, int(n), rng, workers)
    return FractionalMoment(mean, math.sqrt(m2 / (count - 1) / count), count)
