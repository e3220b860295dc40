#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Stable densities by Fourier inversion of the closed-form cf
"""

import math

import numpy as np

from stablestein.numerics.fourier import GridSpec, TailSpec, fourier_invert
from stablestein.numerics.streams import RngStream
from stablestein.stable.cf import cf_stable_closed
from stablestein.stable.params import derive_params

__all__ = [
    "density",
    "tails_for",
    "default_density_grid",
]

_MAX_POINTS = 2 ** 20


def tails_for(params, derived=None):
    """Power-law density tails p(x) ~ m1 x^{-1-alpha} and m2 |x|^{-1-alpha}"""
    derived = derive_params(params) if derived is None else derived
    return TailSpec(params.alpha, params.m1, params.m2, loc=derived.gamma_alpha)


def default_density_grid(params, n_points=4096, rng=None, n_samples=20000, derived=None):
    """Grid spanning the sampled 0.001 and 0.999 quantiles

    The number of points starts at n_points and is doubled until the
    Nyquist frequency of the grid reaches the frequency where |cf| falls
    below 1e-6, up to 2^20 points.
    """
    from stablestein.stable.sample import sample

    derived = derive_params(params) if derived is None else derived
    rng = RngStream(0) if rng is None else rng
    draws = sample(params, n_samples, rng, derived=derived)
    lo, hi = np.quantile(draws, [0.001, 0.999])
    centre, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    # at least ten scale units either side of the centre
    half = max(half, 10.0 * derived.d_alpha ** (1.0 / params.alpha), 1e-3)
    span = 2.0 * half
    t_star = (math.log(1e6) / derived.d_alpha) ** (1.0 / params.alpha)
    needed = span * t_star / math.pi
    n = int(n_points)
    while n < needed and n < _MAX_POINTS:
        n *= 2
    return GridSpec.centred(centre, half, min(n, _MAX_POINTS))


def density(params, grid=None, tail_correct=False, derived=None, check=True):
    """Stable density p(x) on a grid

    Parameters
    ----------
    params : StableParams
        Stable law
    grid : GridSpec, optional
        Output grid; default_density_grid() when omitted
    tail_correct : bool
        Remove the periodic images of the power-law tails
    check : bool
        Emit AliasWarning for under-resolved grids

    Returns
    -------
    x : numpy.ndarray
        Grid points
    p : numpy.ndarray
        Density values
    """
    derived = derive_params(params) if derived is None else derived
    grid = default_density_grid(params, derived=derived) if grid is None else grid
    tails = tails_for(params, derived) if tail_correct else None
    values = fourier_invert(lambda t: cf_stable_closed(params, t, derived), grid,
                            tails=tails, check=check)
    return grid.points, values
