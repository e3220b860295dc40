#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Distributions in the domain of normal attraction of a stable law

Beyond the body edge y0 (1 by default) the tails are

    1 - F(y) = (A + e(y)) (1 + theta) / y^alpha,
    F(-y)   = (A + e(-y)) (1 - theta) / y^alpha,

and the leftover mass is spread uniformly over [-y0, y0].
"""

from dataclasses import dataclass

import numpy as np

from stablestein.numerics.streams import uniform_stream

__all__ = [
    "DNASpec",
    "sample_dna",
    "sample_dna_sum",
    "pareto_dna",
    "stable_matched_dna",
]

_TAIL_GRID = np.geomspace(1.0, 1e8, 4001)


def _zero(y):
    return np.zeros_like(np.asarray(y, dtype=float))


@dataclass(frozen=True)
class DNASpec:
    """Law in the domain of normal attraction of an alpha-stable law, alpha < 1

    Parameters
    ----------
    alpha : float
        Tail index in (0, 1)
    A : float
        Tail constant, positive
    theta : float
        Tail asymmetry in [-1, 1]
    e_fn, e_d1 : callable, optional
        Bounded perturbation e, vanishing at +/- infinity, and its derivative;
        e = 0 when omitted
    body_edge : float
        y0 >= 1, beyond which the tail formulas hold
    name : str
        Label
    """
    alpha: float
    A: float
    theta: float = 0.0
    e_fn: object = None
    e_d1: object = None
    body_edge: float = 1.0
    name: str = "dna"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A}")
        if not -1 <= self.theta <= 1:
            raise ValueError(f"theta must lie in [-1, 1], got {self.theta}")
        if not self.body_edge >= 1:
            raise ValueError(f"body_edge must be at least 1, got {self.body_edge}")
        if (self.e_fn is None) != (self.e_d1 is None):
            raise ValueError("e_fn and e_d1 must be given together")
        if self.e_fn is None:
            object.__setattr__(self, "e_fn", _zero)
            object.__setattr__(self, "e_d1", _zero)
        self._validate()

    def _validate(self):
        y = self.body_edge * _TAIL_GRID
        for sign, name in ((1, "right"), (-1, "left")):
            if np.any(self.A + self.e_fn(sign * y) <= 0):
                raise ValueError(f"A + e(y) must stay positive on the {name} tail")
            s = self.tail(y, sign)
            if np.any(s < 0) or np.any(s > 1):
                raise ValueError(f"{name} tail leaves [0, 1]")
            if np.any(np.diff(s) > 1e-14):
                raise ValueError(f"{name} tail is not nonincreasing: e_fn gives a non-monotone CDF")
        if self.right_mass + self.left_mass > 1 + 1e-12:
            raise ValueError(f"tail masses {self.right_mass:.6g} + {self.left_mass:.6g} exceed 1; "
                             "increase body_edge")

    @property
    def K(self):
        """sup |e| measured on the tail grid"""
        y = self.body_edge * _TAIL_GRID
        return float(max(np.max(np.abs(self.e_fn(y))), np.max(np.abs(self.e_fn(-y)))))

    def tail(self, y, sign=1):
        """1 - F(y) for sign = 1, F(-y) for sign = -1, at y >= body_edge"""
        y = np.asarray(y, dtype=float)
        weight = 1 + self.theta if sign > 0 else 1 - self.theta
        return (self.A + self.e_fn(sign * y)) * weight / y ** self.alpha

    @property
    def right_mass(self):
        return float(self.tail(self.body_edge, 1))

    @property
    def left_mass(self):
        return float(self.tail(self.body_edge, -1))

    @property
    def body_mass(self):
        return max(0.0, 1.0 - self.right_mass - self.left_mass)

    def cdf(self, x):
        """F(x)"""
        x = np.asarray(x, dtype=float)
        y0 = self.body_edge
        r = np.maximum(np.abs(x), y0)
        body = self.left_mass + self.body_mass * (np.clip(x, -y0, y0) + y0) / (2 * y0)
        out = np.where(x < -y0, self.tail(r, -1), body)
        out = np.where(x > y0, 1 - self.tail(r, 1), out)
        return out if out.ndim else float(out)


def _invert_tail(spec, sign, s):
    """y >= body_edge with tail(y, sign) = s, by table inversion"""
    y = spec.body_edge * _TAIL_GRID
    table = spec.tail(y, sign)
    weight = 1 + spec.theta if sign > 0 else 1 - spec.theta
    inside = np.interp(-s, -table, y)
    # e vanishes far out, so the pure Pareto inverse takes over
    beyond = (spec.A * weight / np.maximum(s, 1e-300)) ** (1 / spec.alpha)
    return np.where(s >= table[-1], inside, beyond)


def sample_dna(spec, n, rng):
    """Draw n variates from a DNASpec by inverting its CDF

    Parameters
    ----------
    spec : DNASpec
        Law
    n : int
        Sample size
    rng : RngStream
        Random stream

    Returns
    -------
    numpy.ndarray
        Samples
    """
    u = uniform_stream(rng, n)
    p_left, p_body = spec.left_mass, spec.body_mass
    y0 = spec.body_edge
    out = np.empty(u.size)
    left = u < p_left
    right = u >= p_left + p_body
    body = ~left & ~right
    out[left] = -_invert_tail(spec, -1, u[left])
    out[right] = _invert_tail(spec, 1, 1 - u[right])
    if p_body > 0:
        out[body] = -y0 + 2 * y0 * (u[body] - p_left) / p_body
    else:
        out[body] = y0
    return out


def sample_dna_sum(spec, n, size, rng, chunk=200000):
    """size draws of T_n = n^{-1/alpha} (Y_1 + ... + Y_n)"""
    n, size = int(n), int(size)
    per = max(1, chunk // n)
    parts = []
    for k, start in enumerate(range(0, size, per)):
        m = min(per, size - start)
        y = sample_dna(spec, m * n, rng.child(k)).reshape(m, n)
        parts.append(y.sum(axis=1))
    return np.concatenate(parts) * n ** (-1 / spec.alpha)


def pareto_dna(alpha, A=0.5, theta=0.0):
    """DNA law with e = 0"""
    return DNASpec(alpha, A, theta, name=f"pareto(alpha={alpha:g}, A={A:g}, theta={theta:g})")


def stable_matched_dna(params):
    """DNA law whose normalised sums converge to the stable law of params

    The tail constant is matched to the Lévy density, A (1 +/- theta) alpha
    = m1, m2, and the body edge is pushed out until the tails fit.
    """
    a = params.alpha
    A = (params.m1 + params.m2) / (2 * a)
    theta = (params.m1 - params.m2) / (params.m1 + params.m2)
    edge = max(1.0, (2 * A) ** (1 / a) * (1 + 1e-12))
    return DNASpec(a, A, theta, body_edge=edge,
                   name=f"stable-matched(alpha={a:g}, m1={params.m1:g}, m2={params.m2:g})")
