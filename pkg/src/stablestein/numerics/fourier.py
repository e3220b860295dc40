#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Density recovery from characteristic functions by FFT-paired trapezoid sums
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft
from scipy.special import zeta

from stablestein.errors import AliasWarning

__all__ = [
    "GridSpec",
    "TailSpec",
    "fourier_invert",
    "density_to_cf",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid x_min, x_min + dx, ..., x_max with n_points nodes"""
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min ({self.x_min}) must be below x_max ({self.x_max})")
        if int(self.n_points) < 8:
            raise ValueError(f"n_points must be at least 8, got {self.n_points}")

    @classmethod
    def centred(cls, centre, half_width, n_points):
        return cls(centre - half_width, centre + half_width, n_points)

    @property
    def points(self):
        return np.linspace(self.x_min, self.x_max, int(self.n_points))

    @property
    def step(self):
        return (self.x_max - self.x_min) / (int(self.n_points) - 1)

    @property
    def period(self):
        """Periodisation length of the discrete Fourier pairing"""
        return int(self.n_points) * self.step

    def core(self, fraction=0.8):
        """Boolean mask of the central fraction of the grid"""
        x = self.points
        centre = 0.5 * (self.x_min + self.x_max)
        half = 0.5 * fraction * (self.x_max - self.x_min)
        return np.abs(x - centre) <= half + 1e-12 * half


@dataclass(frozen=True)
class TailSpec:
    """Power-law density tails p(y) ~ c_plus y^{-1-alpha} (right) and
    c_minus |y|^{-1-alpha} (left) about loc"""
    alpha: float
    c_plus: float
    c_minus: float
    loc: float = 0.0


def fourier_invert(cf, grid, tails=None, check=True):
    """Invert a characteristic function onto a grid

    The x-grid is paired with the frequency grid t_k = (k - n//2) dt,
    dt = 2pi/(n dx), so that the trapezoid sum
    (1/2pi) sum_k cf(t_k) exp(-i t_k x_j) dt is one FFT.

    Parameters
    ----------
    cf : callable
        Vectorised characteristic function, cf(0) = 1
    grid : GridSpec
        Output grid
    tails : TailSpec, optional
        Power-law tail constants. When given, the periodic images of the tails
        wrapped back onto the grid are subtracted
    check : bool
        Warn with AliasWarning when the cf has not decayed at the highest
        frequency or the density has not decayed at the grid edges

    Returns
    -------
    numpy.ndarray
        Density values on grid.points
    """
    n = int(grid.n_points)
    dx = grid.step
    dt = 2.0 * np.pi / (n * dx)
    shift = n // 2
    t = (np.arange(n) - shift) * dt
    values = np.asarray(cf(t), dtype=complex)
    coeffs = values * np.exp(-1j * t * grid.x_min)
    j = np.arange(n)
    dens = np.real(dt / (2.0 * np.pi) * np.exp(2j * np.pi * shift * j / n) * fft.fft(coeffs))

    if check:
        edge_cf = max(abs(values[0]), abs(values[-1]))
        if edge_cf > 1e-6:
            warnings.warn(f"cf is {edge_cf:.2e} at the grid Nyquist frequency; "
                          "refine the grid", AliasWarning, stacklevel=2)
        peak = np.max(np.abs(dens))
        if peak > 0 and max(abs(dens[0]), abs(dens[-1])) > 1e-3 * peak:
            warnings.warn("density has not decayed at the grid edges; "
                          "widen the grid", AliasWarning, stacklevel=2)

    if tails is not None:
        dens = dens - _wrapped_tails(grid, tails)
    return dens


def _wrapped_tails(grid, tails):
    s = 1.0 + tails.alpha
    period = grid.period
    z = (grid.points - tails.loc) / period
    out = np.zeros_like(z)
    if tails.c_plus > 0:
        out += tails.c_plus * period ** -s * zeta(s, 1.0 + z)
    if tails.c_minus > 0:
        out += tails.c_minus * period ** -s * zeta(s, 1.0 - z)
    return out


def density_to_cf(values, grid, t):
    """Trapezoid reconstruction of the cf from a sampled density"""
    x = grid.points
    t = np.atleast_1d(np.asarray(t, dtype=float))
    w = np.full(x.shape, grid.step)
    w[[0, -1]] *= 0.5
    return np.exp(1j * np.outer(t, x)) @ (values * w)
