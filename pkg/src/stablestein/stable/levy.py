#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Lévy measures and Lévy-Khintchine triplets

A LevySpec carries a vectorised density on the real line without the origin
together with its behaviour near 0 (density <= C |u|^{-origin_exponent}) and
at infinity (density ~ |u|^{-tail_exponent}, infinite for exponentially
decaying or bounded supports). The IDD type follows from these exponents:

* A: finite total mass (origin_exponent < 1),
* B: infinite mass but finite small-jump first moment (1 <= s < 2),
* C: infinite small-jump first moment (s >= 2),
* Gaussian-only: the zero measure.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from stablestein.errors import NonConvergence
from stablestein.numerics.quadrature import QuadratureSpec, integrate

__all__ = [
    "LevySpec",
    "IDDTriplet",
    "stable_levy",
    "tempered_cauchy_levy",
    "compound_poisson_levy",
    "zero_levy",
    "stable_triplet",
]

TYPE_A, TYPE_B, TYPE_C, GAUSSIAN = "A", "B", "C", "Gaussian-only"


@dataclass(frozen=True)
class LevySpec:
    """Lévy measure given by a density

    Parameters
    ----------
    density : callable
        Vectorised density, non-negative for u != 0
    origin_exponent : float
        s such that density(u) |u|^s stays bounded as u -> 0
    tail_exponent : float
        Power-law decay exponent of the density at infinity (math.inf for
        faster decay or bounded support)
    support : tuple
        (lo, hi) with lo <= 0 <= hi
    power_law : tuple, optional
        (alpha, m1, m2) when the density is exactly m1 u^{-1-alpha} for u > 0
        and m2 |u|^{-1-alpha} for u < 0; enables closed-form tails
    name : str
        Label used in reports
    """
    density: object
    origin_exponent: float
    tail_exponent: float = math.inf
    support: tuple = (-math.inf, math.inf)
    power_law: tuple | None = None
    name: str = "levy"
    is_zero: bool = False
    idd_type: str = field(init=False)
    total_mass_finite: bool = field(init=False)
    small_u_moment_finite: bool = field(init=False)
    large_u_moment_finite: bool = field(init=False)

    def __post_init__(self):
        lo, hi = self.support
        if not lo <= 0 <= hi:
            raise ValueError(f"support must contain the origin, got {self.support}")
        s = self.origin_exponent
        if s >= 3:
            raise ValueError(f"origin exponent {s} violates int(1 ^ u^2) nu(du) < inf")
        mass = self.is_zero or s < 1
        small = self.is_zero or s < 2
        large = self.is_zero or self.tail_exponent > 2 or (math.isfinite(lo) and math.isfinite(hi))
        if self.is_zero:
            kind = GAUSSIAN
        elif mass:
            kind = TYPE_A
        elif small:
            kind = TYPE_B
        else:
            kind = TYPE_C
        object.__setattr__(self, "idd_type", kind)
        object.__setattr__(self, "total_mass_finite", mass)
        object.__setattr__(self, "small_u_moment_finite", small)
        object.__setattr__(self, "large_u_moment_finite", large)
        if not self.is_zero:
            self._verify()

    def _verify(self):
        u_points = np.concatenate([-np.logspace(-3, 3, 61), np.logspace(-3, 3, 61)])
        u_points = u_points[(u_points > self.support[0]) & (u_points < self.support[1])]
        if np.any(np.asarray(self.density(u_points)) < 0):
            raise ValueError(f"{self.name}: density is negative somewhere")
        try:
            mass = self.truncated_second_moment(1.0) + self.mass_outside(1.0)
        except NonConvergence as err:
            raise ValueError(f"{self.name}: int(1 ^ u^2) nu(du) could not be "
                             f"verified finite ({err})")
        if not math.isfinite(mass):
            raise ValueError(f"{self.name}: int(1 ^ u^2) nu(du) is infinite")

    def side(self, sign):
        """Density of the side sign*u, u > 0, as a function of u"""
        return lambda u: self.density(sign * np.asarray(u, dtype=float))

    def side_limit(self, sign):
        """Extent of the support on the given side (positive number or inf)"""
        return self.support[1] if sign > 0 else -self.support[0]

    def smooth_factor(self, u):
        """density(u) |u|^s, bounded near the origin"""
        u = np.asarray(u, dtype=float)
        return self.density(u) * np.abs(u) ** self.origin_exponent

    def _side_integral(self, fn, a, b, sign, spec, exponent=None):
        hi = min(b, self.side_limit(sign))
        if hi <= a:
            return 0.0
        dens = self.side(sign)
        return integrate(lambda u: fn(u) * dens(u), a, hi,
                         spec.singular(exponent) if a == 0 else spec)

    def small_moment(self, spec=None):
        """Signed first moment int_{|u|<=1} u nu(du)"""
        if self.is_zero:
            return 0.0
        if self.power_law is not None and self.origin_exponent < 2:
            a, m1, m2 = self.power_law
            return (m1 - m2) / (1 - a)
        spec = QuadratureSpec() if spec is None else spec
        s = self.origin_exponent - 1
        return (self._side_integral(lambda u: u, 0.0, 1.0, 1, spec, s)
                - self._side_integral(lambda u: u, 0.0, 1.0, -1, spec, s))

    def truncated_second_moment(self, U, spec=None):
        """int_{|u|<=U} u^2 nu(du)"""
        if self.is_zero:
            return 0.0
        if self.power_law is not None:
            a, m1, m2 = self.power_law
            return (m1 + m2) * U ** (2 - a) / (2 - a)
        spec = QuadratureSpec() if spec is None else spec
        s = self.origin_exponent - 2
        return sum(self._side_integral(lambda u: u * u, 0.0, U, sign, spec, s) for sign in (1, -1))

    def mass_outside(self, U, spec=None):
        """nu(|u| > U)"""
        if self.is_zero:
            return 0.0
        if self.power_law is not None:
            a, m1, m2 = self.power_law
            return (m1 + m2) * U ** -a / a
        spec = QuadratureSpec() if spec is None else spec
        return sum(self._side_integral(lambda u: 1.0, U, math.inf, sign, spec) for sign in (1, -1))

    def tail_moment(self, U, spec=None):
        """int_{|u|>U} |u| nu(du); inf when the large-jump moment diverges"""
        if self.is_zero:
            return 0.0
        if not self.large_u_moment_finite:
            return math.inf
        if self.power_law is not None:
            a, m1, m2 = self.power_law
            return (m1 + m2) * U ** (1 - a) / (a - 1)
        spec = QuadratureSpec() if spec is None else spec
        return sum(self._side_integral(lambda u: u, U, math.inf, sign, spec) for sign in (1, -1))


@dataclass(frozen=True)
class IDDTriplet:
    """Lévy-Khintchine triplet (beta, sigma2, levy) with indicator compensator"""
    beta: float
    sigma2: float
    levy: LevySpec

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError(f"sigma2 must be non-negative, got {self.sigma2}")

    @property
    def idd_type(self):
        if self.levy.is_zero:
            return GAUSSIAN if self.sigma2 > 0 else TYPE_A
        if self.sigma2 > 0:
            return TYPE_C
        return self.levy.idd_type


def _power_density(alpha, m1, m2):
    def density(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = np.abs(u) ** (-alpha - 1)
        return np.where(u > 0, m1 * mag, np.where(u < 0, m2 * mag, 0.0))
    return density


def stable_levy(params):
    """Lévy measure m1 u^{-1-alpha} du on (0, inf), m2 |u|^{-1-alpha} du on (-inf, 0)"""
    a = params.alpha
    return LevySpec(_power_density(a, params.m1, params.m2), origin_exponent=a + 1,
                    tail_exponent=a + 1, power_law=(a, params.m1, params.m2),
                    name=f"stable(alpha={a})")


def tempered_cauchy_levy(m1, m2, gamma):
    """Cauchy subordinator measure tempered by exp(-gamma |u|)

    The density behaves like u^{-2} at the origin, so the measure has an
    infinite small-jump first moment and classifies as type C.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if m1 < 0 or m2 < 0 or not m1 + m2 > 0:
        raise ValueError("m1, m2 must be non-negative with a positive sum")
    base = _power_density(1.0, m1, m2)

    def density(u):
        u = np.asarray(u, dtype=float)
        return base(u) * np.exp(-gamma * np.abs(u))
    return LevySpec(density, origin_exponent=2.0, name=f"tempered_cauchy(gamma={gamma})")


def compound_poisson_levy(density, support, name="compound_poisson"):
    """Finite Lévy measure with a bounded density on a bounded support"""
    lo, hi = support
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("compound Poisson support must be bounded")

    def clipped(u):
        u = np.asarray(u, dtype=float)
        inside = (u >= lo) & (u <= hi) & (u != 0)
        return np.where(inside, density(u), 0.0)
    return LevySpec(clipped, origin_exponent=0.0, support=(min(lo, 0.0), max(hi, 0.0)), name=name)


def zero_levy():
    """The zero measure"""
    return LevySpec(lambda u: np.zeros_like(np.asarray(u, dtype=float)), origin_exponent=0.0,
                    support=(0.0, 0.0), name="zero", is_zero=True)


def stable_triplet(params, derived=None):
    """Lévy-Khintchine triplet of S(alpha, beta) with the indicator compensator"""
    from stablestein.stable.params import derive_params
    derived = derive_params(params) if derived is None else derived
    beta = derived.Gamma_alpha
    if params.alpha < 1:
        beta += (params.m1 - params.m2) / (1 - params.alpha)
    return IDDTriplet(beta, 0.0, stable_levy(params))
