#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Adaptive and fixed-rule quadrature for the Lévy-type integrals used throughout
the package. Adaptive integration wraps QUADPACK (via scipy) after mapping
semi-infinite ranges and power-law endpoint singularities onto a finite,
regular integrand. Fixed rules are vectorised over many evaluation points.
"""

import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate as spi
from scipy.special import roots_jacobi, roots_legendre

from stablestein.errors import NonConvergence, NonIntegrable

__all__ = [
    "QuadratureSpec",
    "integrate",
    "integrate_oscillatory",
    "legendre_rule",
    "jacobi_rule",
    "panel_rule",
    "graded_rule",
]

# quad reports roundoff trouble well before the answer is unusable
_ACCEPT_FACTOR = 100.0

# QAWS may sample the singular endpoint itself; it is read this far inside
_ENDPOINT_OFFSET = 1e-13


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and singularity declaration for adaptive quadrature

    Parameters
    ----------
    abs_tol : float
        Absolute tolerance
    rel_tol : float
        Relative tolerance
    max_subdivisions : int
        Subinterval budget handed to QUADPACK
    singularity_exponent : float, optional
        Exponent s of an integrand behaving like |u - a|^{-s} at the lower
        limit a. Must be below 1
    """
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    singularity_exponent: float | None = None

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be at least 1")
        s = self.singularity_exponent
        if s is not None and s >= 1:
            raise NonIntegrable(f"singularity exponent {s} >= 1 is not integrable")

    def singular(self, s):
        """Copy of this spec declaring exponent s at the lower limit"""
        return replace(self, singularity_exponent=None if s is None or s <= 0 else float(s))

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


def _quad(fn, lo, hi, spec, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spi.IntegrationWarning)
        out = spi.quad(fn, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                       limit=int(spec.max_subdivisions), full_output=1, **kwargs)
    value, err = out[0], out[1]
    if not np.isfinite(value):
        raise NonConvergence(f"quadrature returned {value} on ({lo}, {hi})")
    if len(out) > 3 and err > _ACCEPT_FACTOR * spec.tolerance(value):
        raise NonConvergence(f"quadrature on ({lo}, {hi}) did not converge: "
                             f"estimate {value}, error {err}; {out[3]}")
    return value


def integrate(f, a, b, spec=None):
    """Integrate a scalar function over (a, b), either limit possibly infinite

    Semi-infinite ranges are mapped with u = v/(1-v) onto (0, 1). A declared
    endpoint singularity |u-a|^{-s} at the lower limit is handed to the
    QUADPACK algebraic weight on the first unit of the range, so f(u)|u-a|^s
    is what gets sampled there; the rest of the range is regular.

    Parameters
    ----------
    f : callable
        Scalar integrand
    a : float
        Lower limit; the singular endpoint when one is declared
    b : float
        Upper limit, may be +/- inf
    spec : QuadratureSpec, optional
        Tolerances, defaults to QuadratureSpec()

    Returns
    -------
    float
        Integral estimate
    """
    spec = QuadratureSpec() if spec is None else spec
    if a == b:
        return 0.0
    s = spec.singularity_exponent
    if np.isinf(a):
        if s is not None:
            raise ValueError("a singular endpoint must be finite")
        if np.isinf(b):
            if a > b:
                return -integrate(f, b, a, spec)
            return integrate(f, a, 0.0, spec) + integrate(f, 0.0, b, spec)
        return -integrate(f, b, a, spec)

    sign = 1.0 if b > a else -1.0
    length = abs(b - a)

    if s is not None and s > 0:
        head = min(length, 1.0)
        floor = head * _ENDPOINT_OFFSET

        def weighted(w):
            w = max(w, floor)
            return f(a + sign * w) * w ** s
        near = sign * _quad(weighted, 0.0, head, spec, weight="alg", wvar=(-s, 0.0))
        if length > head:
            near += integrate(f, a + sign * head, b, spec.singular(None))
        return near

    def g(w):
        return f(a + sign * w)

    if np.isinf(length):
        def h(v):
            w = v / (1.0 - v)
            return g(w) / (1.0 - v) ** 2
        return sign * _quad(h, 0.0, 1.0, spec)
    return sign * _quad(g, 0.0, length, spec)


def integrate_oscillatory(f, a, omega, kind="cos", spec=None, b=np.inf):
    """Integrate f(u)cos(omega u) or f(u)sin(omega u) over (a, b)

    Uses the QUADPACK Fourier-weight routines, which handle slowly decaying
    algebraic tails on infinite ranges.
    """
    spec = QuadratureSpec() if spec is None else spec
    if kind not in ("cos", "sin"):
        raise ValueError(f"kind must be 'cos' or 'sin', got {kind}")
    if omega == 0:
        if kind == "sin":
            return 0.0
        return integrate(f, a, b, spec)
    if omega < 0:
        out = integrate_oscillatory(f, a, -omega, kind, spec, b)
        return -out if kind == "sin" else out
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spi.IntegrationWarning)
        out = spi.quad(f, a, b, weight=kind, wvar=omega, epsabs=spec.abs_tol,
                       epsrel=spec.rel_tol, limit=int(spec.max_subdivisions),
                       full_output=1)
    value, err = out[0], out[1]
    if not np.isfinite(value) or err > _ACCEPT_FACTOR * spec.tolerance(value):
        raise NonConvergence(f"Fourier-weight quadrature failed: estimate {value}, error {err}")
    return value


@lru_cache(maxsize=None)
def legendre_rule(order):
    """Gauss-Legendre nodes and weights on [0, 1]"""
    x, w = roots_legendre(order)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def jacobi_rule(order, b):
    """Gauss-Jacobi nodes and weights on [0, 1] for the weight u^b, b > -1"""
    if b <= -1:
        raise NonIntegrable(f"weight u^{b} is not integrable at 0")
    x, w = roots_jacobi(order, 0.0, b)
    return (x + 1.0) / 2.0, w * 2.0 ** (-b - 1.0)


def panel_rule(a, b, n_panels, order=16):
    """Composite Gauss-Legendre rule on [a, b], vectorised over array limits

    Parameters
    ----------
    a, b : float or numpy.ndarray
        Interval limits, broadcast against each other
    n_panels : int
        Number of equal panels
    order : int
        Nodes per panel

    Returns
    -------
    nodes, weights : numpy.ndarray
        Arrays of shape broadcast(a, b).shape + (n_panels * order,)
    """
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    x, w = legendre_rule(order)
    edges = np.arange(n_panels) / n_panels
    unit_nodes = (edges[:, None] + x[None, :] / n_panels).ravel()
    unit_weights = np.tile(w / n_panels, n_panels)
    return a + (b - a) * unit_nodes, (b - a) * unit_weights


def graded_rule(length, levels=30, ratio=0.25, order=16, n_uniform=0, upper=None):
    """Rule on [0, upper] geometrically graded towards 0

    Panels [length*ratio^(k+1), length*ratio^k] for k < levels resolve
    algebraic cusps at the origin; an optional uniform part covers
    [length, upper] with n_uniform panels.
    """
    x, w = legendre_rule(order)
    nodes, weights = [], []
    lo = length * ratio ** levels
    nodes.append(lo * x)
    weights.append(lo * w)
    for k in range(levels, 0, -1):
        a, b = length * ratio ** k, length * ratio ** (k - 1)
        nodes.append(a + (b - a) * x)
        weights.append((b - a) * w)
    if upper is not None and upper > length and n_uniform > 0:
        un, uw = panel_rule(length, upper, n_uniform, order)
        nodes.append(un)
        weights.append(uw)
    return np.concatenate(nodes), np.concatenate(weights)
