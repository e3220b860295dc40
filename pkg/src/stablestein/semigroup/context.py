#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Precomputed state for the Ornstein-Uhlenbeck type semigroup of a stable law

P_t f(x) = E f(x e^{-t} + Y_t), where Y_t has the self-decomposability cf
ratio psi(xi)/psi(e^{-t} xi). Y_t is again stable with the same index and
skewness, location gamma (1 - e^{-t}) and scale d (1 - e^{-alpha t}).
"""

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from stablestein.errors import OutOfScope
from stablestein.numerics.fourier import GridSpec, TailSpec, fourier_invert
from stablestein.stable.cf import log_cf_stable_closed
from stablestein.stable.params import derive_params

__all__ = [
    "SemigroupContext",
    "build_context",
    "remainder_grid",
    "remainder_density",
]

_MIN_POINTS = 2 ** 12
_MAX_POINTS = 2 ** 20


def _require_alpha(params):
    if params.alpha == 1:
        raise OutOfScope("semigroup approach unavailable at alpha=1: the self-decomposable "
                         "representation of the Stein solution fails for stable laws with alpha=1")


def remainder_grid(params, t, half_width=250.0, derived=None):
    """Grid for the density of Y_t

    Centred at the location of Y_t, with a step fine enough that the cf ratio
    falls below 1e-12 at the Nyquist frequency (at most 2^20 points).
    """
    derived = derive_params(params) if derived is None else derived
    a = params.alpha
    loc = derived.gamma_alpha * -math.expm1(-t)
    scale = derived.d_alpha * -math.expm1(-a * t)
    xi_max = (math.log(1e12) / scale) ** (1 / a)
    needed = 2 * half_width * xi_max / math.pi
    n = _MIN_POINTS
    while n < needed and n < _MAX_POINTS:
        n *= 2
    return GridSpec.centred(loc, half_width, n)


def remainder_density(params, t, grid=None, tail_correct=True, derived=None):
    """Density of Y_t sampled on a grid

    Parameters
    ----------
    params : StableParams
        Stable law, alpha != 1
    t : float
        Time, positive
    grid : GridSpec, optional
        Output grid; remainder_grid() when omitted
    tail_correct : bool
        Remove the periodic images of the power-law tails

    Returns
    -------
    grid : GridSpec
        Grid used
    values : numpy.ndarray
        Density values
    """
    _require_alpha(params)
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    derived = derive_params(params) if derived is None else derived
    grid = remainder_grid(params, t, derived=derived) if grid is None else grid
    eta = math.exp(-t)
    shrink = -math.expm1(-params.alpha * t)
    tails = None
    if tail_correct:
        tails = TailSpec(params.alpha, params.m1 * shrink, params.m2 * shrink,
                         loc=derived.gamma_alpha * (1 - eta))

    def ratio(xi):
        return np.exp(log_cf_stable_closed(params, xi, derived)
                      - log_cf_stable_closed(params, eta * xi, derived))
    return grid, fourier_invert(ratio, grid, tails=tails)


@dataclass(frozen=True)
class SemigroupContext:
    """Stable law, evaluation grid and time grid of a Stein-equation solve

    Remainder densities are built on first use and cached per t; concurrent
    callers asking for the same t share one inversion.
    """
    params: object
    derived: object
    x_grid: GridSpec
    t_grid: np.ndarray
    t_tol: float = 1e-3
    xi_panel: float = 0.25
    xi_levels: int = 30
    remainder_half_width: float = 250.0
    verbose: bool = False
    _remainders: dict = field(default_factory=dict, repr=False, compare=False)
    _pending: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: object = field(default_factory=threading.Lock, repr=False, compare=False)

    def log_ratio(self, xi, t):
        """log psi(xi) - log psi(e^{-t} xi); log psi(xi) itself for t = inf"""
        lp = log_cf_stable_closed(self.params, xi, self.derived)
        if math.isinf(t):
            return lp
        return lp - log_cf_stable_closed(self.params, math.exp(-t) * np.asarray(xi), self.derived)

    def ratio_cutoff(self, t):
        """Frequency beyond which |psi(xi)/psi(e^{-t} xi)| < 1e-16"""
        shrink = 1.0 if math.isinf(t) else -math.expm1(-self.params.alpha * t)
        if shrink == 0:
            return math.inf
        return (math.log(1e16) / (self.derived.d_alpha * shrink)) ** (1 / self.params.alpha)

    def remainder(self, t):
        """(grid, density) of Y_t"""
        key = float(t)
        with self._lock:
            pending = self._pending.setdefault(key, threading.Lock())
        with pending:
            if key not in self._remainders:
                grid = remainder_grid(self.params, key, self.remainder_half_width, self.derived)
                if self.verbose:
                    print(f"Inverting remainder density at t={key:.4g} on {grid.n_points} points...")
                grid, values = remainder_density(self.params, key, grid, derived=self.derived)
                mass = float(np.sum(values) * grid.step)
                if abs(mass - 1) > 1e-2:
                    raise ValueError(f"remainder density at t={key} has mass {mass:.4f}")
                self._remainders[key] = (grid, values)
            return self._remainders[key]


def build_context(params, x_grid=None, t_min=1e-3, t_max=20.0, n_t=64, verbose=False, **kwargs):
    """Context for semigroup evaluation and Stein-equation solving

    Parameters
    ----------
    params : StableParams
        Stable law; alpha = 1 raises OutOfScope
    x_grid : GridSpec, optional
        Evaluation grid, default 401 points on [-20, 20]
    t_min, t_max, n_t : float, float, int
        Geometric time nodes; t = 0 is prepended
    verbose : bool
        Print progress

    Returns
    -------
    SemigroupContext
        Context
    """
    _require_alpha(params)
    if not 0 < t_min < t_max:
        raise ValueError(f"need 0 < t_min < t_max, got {t_min}, {t_max}")
    if int(n_t) < 2 or int(n_t) % 2:
        raise ValueError(f"n_t must be even and at least 2, got {n_t}")
    x_grid = GridSpec(-20.0, 20.0, 401) if x_grid is None else x_grid
    t_grid = np.concatenate([[0.0], np.geomspace(t_min, t_max, int(n_t))])
    derived = derive_params(params)
    if verbose:
        print(f"Semigroup context for alpha={params.alpha}: gamma={derived.gamma_alpha:.6g}, "
              f"d={derived.d_alpha:.6g}, theta={derived.theta:.6g}")
    return SemigroupContext(params, derived, x_grid, t_grid, verbose=verbose, **kwargs)
