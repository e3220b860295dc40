#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Kernels of the smooth-Wasserstein bound for sums of independent variables

K_nu(t, N) = 1_[0,N](t) int_t^N u nu(du) + 1_[-N,0](t) int_{-N}^t (-u) nu(du)
K_i(t, N)  = E[Z_i 1{0 <= t <= Z_i <= N} - Z_i 1{-N <= Z_i <= t <= 0}]
"""

import math
from dataclasses import dataclass

import numpy as np

from stablestein.numerics.quadrature import QuadratureSpec, integrate
from stablestein.numerics.streams import uniform_stream

__all__ = [
    "kernel_Knu",
    "kernel_Ki",
    "DiscreteLaw",
    "empirical_law",
    "two_point_law",
    "kernel_mismatch",
]


def _require_alpha(params):
    if not 1 < params.alpha < 2:
        raise ValueError(f"kernel bounds need alpha in (1, 2), got {params.alpha}")


def kernel_Knu(t, N, params):
    """Closed-form K_nu(t, N) of the stable Lévy measure

    m1 (t^{1-alpha} - N^{1-alpha}) / (alpha - 1) on (0, N], the mirror with m2
    on [-N, 0), 0 outside [-N, N] and +inf at t = 0.
    """
    _require_alpha(params)
    if not N > 0:
        raise ValueError(f"N must be positive, got {N}")
    a = params.alpha
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        mag = (np.abs(t) ** (1 - a) - N ** (1 - a)) / (a - 1)
    out = np.where(t > 0, params.m1 * mag, params.m2 * mag)
    out = np.where(t == 0, math.inf, out)
    out = np.where(np.abs(t) > N, 0.0, out)
    return out if out.ndim else float(out)


def _knu_antiderivative(t, m, a, N):
    """int_0^t of the one-sided kernel, 0 <= t <= N"""
    return m * (t ** (2 - a) / (2 - a) - N ** (1 - a) * t) / (a - 1)


@dataclass(frozen=True)
class DiscreteLaw:
    """Finitely supported law, values sorted on construction"""
    values: np.ndarray
    probs: np.ndarray
    name: str = "discrete"

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        p = np.atleast_1d(np.asarray(self.probs, dtype=float))
        if v.size == 0:
            raise ValueError("a discrete law needs at least one atom")
        if v.shape != p.shape:
            raise ValueError(f"values and probs differ in shape: {v.shape} vs {p.shape}")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise ValueError("probs must be non-negative and sum to 1")
        order = np.argsort(v, kind="stable")
        object.__setattr__(self, "values", v[order])
        object.__setattr__(self, "probs", p[order])
        cum = np.concatenate([[0.0], np.cumsum(v[order] * p[order])])
        object.__setattr__(self, "_cum", cum)

    @property
    def mean(self):
        return float(np.dot(self.values, self.probs))

    def abs_tail(self, N):
        """E|Z| 1{|Z| > N}"""
        big = np.abs(self.values) > N
        return float(np.dot(np.abs(self.values[big]), self.probs[big]))

    def breakpoints(self, N):
        """Atoms strictly inside (-N, N), away from 0"""
        v = self.values
        return np.unique(v[(np.abs(v) < N) & (v != 0)])

    def kernel(self, t, N):
        """K(t, N) by prefix sums over the sorted atoms"""
        t = np.asarray(t, dtype=float)
        v, cum = self.values, self._cum
        lo = np.searchsorted(v, t, "left")
        hi = np.searchsorted(v, N, "right")
        right = np.where((t >= 0) & (t <= N), cum[hi] - cum[np.minimum(lo, hi)], 0.0)
        lo2 = np.searchsorted(v, -N, "left")
        hi2 = np.searchsorted(v, t, "right")
        left = np.where((t <= 0) & (t >= -N), -(cum[np.maximum(hi2, lo2)] - cum[lo2]), 0.0)
        out = right + left
        return out if out.ndim else float(out)

    def sample(self, size, rng):
        """size draws, by inversion of the cumulative probabilities"""
        cdf = np.cumsum(self.probs)
        idx = np.searchsorted(cdf, uniform_stream(rng, size) * cdf[-1], "right")
        return self.values[np.minimum(idx, self.values.size - 1)]

    def sample_sum(self, n, size, rng):
        """size draws of Z_1 + ... + Z_n from multinomial atom counts"""
        if int(n) == 0:
            return np.zeros(int(size))
        counts = rng.generator().multinomial(int(n), self.probs, size=int(size))
        return counts @ self.values


def empirical_law(samples, name="empirical"):
    """Equal-weight law on the samples"""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("empty sample set")
    return DiscreteLaw(samples, np.full(samples.size, 1.0 / samples.size), name)


def kernel_Ki(t, N, z_samples):
    """K_i(t, N) from samples of Z_i, or exactly from a DiscreteLaw

    Parameters
    ----------
    t : float or numpy.ndarray
        Kernel argument
    N : float
        Truncation level, positive
    z_samples : numpy.ndarray or DiscreteLaw
        Samples of Z_i, or its law

    Returns
    -------
    float or numpy.ndarray
        Kernel values, non-negative
    """
    if not N > 0:
        raise ValueError(f"N must be positive, got {N}")
    law = z_samples if isinstance(z_samples, DiscreteLaw) else empirical_law(z_samples)
    return law.kernel(t, N)


def two_point_law(n, alpha, scale=None, m=1.0):
    """Z = +/- c n^{-1/alpha} with probability 1/2 each

    Without scale, c is taken large enough that the kernel mismatch of the
    n-fold sum decreases with n: c^alpha = 8 m / ((alpha - 1)(2 - alpha)).
    """
    if not 1 < alpha < 2:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    c = (8 * m / ((alpha - 1) * (2 - alpha))) ** (1 / alpha) if scale is None else float(scale)
    z = c * int(n) ** (-1 / alpha)
    return DiscreteLaw([-z, z], [0.5, 0.5], name=f"two-point(+/-{z:.6g})")


def _side_mismatch(lo, hi, k, m, a, N, n):
    """sum over intervals of int_lo^hi |K_nu/n - k| for one side of the kernel"""
    if m == 0:
        return float(np.sum(np.abs(k) * (hi - lo)))

    def f(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return m * (t ** (1 - a) - N ** (1 - a)) / ((a - 1) * n) - k

    def F(t):
        return _knu_antiderivative(t, m, a, N) / n - k * t

    f_lo, f_hi = f(lo), f(hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        tc = ((a - 1) * n * k / m + N ** (1 - a)) ** (1 / (1 - a))
    tc = np.clip(np.nan_to_num(tc, nan=0.0), lo, hi)
    crossing = 2 * F(tc) - F(lo) - F(hi)
    out = np.where(f_hi >= 0, F(hi) - F(lo), np.where(f_lo <= 0, F(lo) - F(hi), crossing))
    return float(np.sum(out))


def kernel_mismatch(params, law, n, N, spec=None):
    """(1/2) sum_i int_{-N}^{N} |K_nu(t, N)/n - K_i(t, N)| dt for n i.i.d. copies of law

    Exact for laws exposing breakpoints() (piecewise-constant kernels);
    otherwise each half line is integrated adaptively.
    """
    _require_alpha(params)
    a = params.alpha
    if hasattr(law, "breakpoints"):
        b = law.breakpoints(N)
        total = 0.0
        for sign, m in ((1, params.m1), (-1, params.m2)):
            inner = np.sort(sign * b[sign * b > 0])
            edges = np.concatenate([[0.0], inner, [float(N)]])
            lo, hi = edges[:-1], edges[1:]
            keep = hi > lo
            lo, hi = lo[keep], hi[keep]
            k = np.asarray(law.kernel(sign * 0.5 * (lo + hi), N), dtype=float)
            total += _side_mismatch(lo, hi, k, m, a, float(N), float(n))
        return 0.5 * n * total
    spec = QuadratureSpec() if spec is None else spec
    sing = spec.singular(a - 1)
    total = 0.0
    for sign in (1, -1):
        total += integrate(lambda s: abs(kernel_Knu(sign * s, N, params) / n
                                         - float(law.kernel(sign * s, N))), 0.0, float(N), sing)
    return 0.5 * n * total
