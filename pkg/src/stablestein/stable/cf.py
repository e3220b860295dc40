#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Characteristic functions of infinitely divisible and stable laws

Three evaluations of the same object are provided: the general
Lévy-Khintchine form of a triplet, the stable form exp{itGamma + Z(t)} with
both pieces obtained by quadrature, and the closed form in (gamma, d, theta).
"""

import math

import numpy as np

from stablestein.numerics.quadrature import QuadratureSpec, integrate, integrate_oscillatory
from stablestein.stable.params import derive_params

__all__ = [
    "cf_idd",
    "cf_stable",
    "cf_stable_closed",
    "log_cf_stable_closed",
    "sd_ratio_cf",
]


def _sin_minus_linear(x):
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    return np.where(np.abs(x) < 0.1, series, np.sin(x) - x)


def _side_exponent(dens, tau, s, compensate, upper, spec):
    """int_0^upper (e^{i tau u} - 1 - i tau u 1_{u<=1} [compensate]) dens(u) du

    tau > 0. dens(u) is O(u^{-s}) at the origin.
    """
    near_hi = min(1.0, upper)
    re = integrate(lambda u: -2.0 * np.sin(0.5 * tau * u) ** 2 * dens(u), 0.0, near_hi,
                   spec.singular(s - 2))
    if compensate:
        im = integrate(lambda u: _sin_minus_linear(tau * u) * dens(u), 0.0, near_hi,
                       spec.singular(s - 3))
    else:
        im = integrate(lambda u: np.sin(tau * u) * dens(u), 0.0, near_hi, spec.singular(s - 1))
    if upper > 1.0:
        if math.isinf(upper):
            re += (integrate_oscillatory(dens, 1.0, tau, "cos", spec)
                   - integrate(dens, 1.0, math.inf, spec))
            im += integrate_oscillatory(dens, 1.0, tau, "sin", spec)
        else:
            re += integrate(lambda u: -2.0 * np.sin(0.5 * tau * u) ** 2 * dens(u), 1.0, upper, spec)
            im += integrate(lambda u: np.sin(tau * u) * dens(u), 1.0, upper, spec)
    return complex(re, im)


def _levy_exponent(levy, t, spec):
    """Compensated Lévy integral of a LevySpec at a scalar t"""
    if t == 0 or levy.is_zero:
        return 0j
    tau = abs(t)
    total = 0j
    for sign in (1, -1):
        upper = levy.side_limit(sign)
        if upper <= 0:
            continue
        part = _side_exponent(levy.side(sign), tau, levy.origin_exponent, True, upper, spec)
        total += part if sign > 0 else np.conj(part)
    return total if t > 0 else np.conj(total)


def _elementwise(fn, t):
    t_arr = np.asarray(t, dtype=float)
    out = np.array([fn(float(v)) for v in t_arr.ravel()], dtype=complex).reshape(t_arr.shape)
    return out if t_arr.ndim else complex(out)


def cf_idd(triplet, t, spec=None):
    """Lévy-Khintchine characteristic function of an IDD triplet

    Parameters
    ----------
    triplet : IDDTriplet
        (beta, sigma2, levy) with the indicator compensator on |u| <= 1
    t : float or numpy.ndarray
        Frequencies
    spec : QuadratureSpec, optional
        Quadrature tolerances

    Returns
    -------
    complex or numpy.ndarray
        cf values
    """
    spec = QuadratureSpec() if spec is None else spec

    def one(v):
        expo = 1j * v * triplet.beta - 0.5 * triplet.sigma2 * v * v
        return np.exp(expo + _levy_exponent(triplet.levy, v, spec))
    return _elementwise(one, t)


def cf_stable(params, t, spec=None, derived=None):
    """Stable cf exp{it Gamma_alpha + Z_alpha(t)} by quadrature

    Z_alpha is the Lévy integral of nu_alpha, uncompensated for alpha < 1 and
    compensated on |u| <= 1 otherwise. The m2 side is the conjugate of the
    m1 side, so one side integral per frequency suffices.
    """
    spec = QuadratureSpec() if spec is None else spec
    derived = derive_params(params, spec) if derived is None else derived
    a = params.alpha

    def dens(u):
        return u ** (-1.0 - a)

    def one(v):
        if v == 0:
            return 1 + 0j
        side = _side_exponent(dens, abs(v), a + 1.0, a >= 1, math.inf, spec)
        z = params.m1 * side + params.m2 * np.conj(side)
        if v < 0:
            z = np.conj(z)
        return np.exp(1j * v * derived.Gamma_alpha + z)
    return _elementwise(one, t)


def log_cf_stable_closed(params, t, derived=None):
    """Closed-form log cf: it gamma - d|t|^alpha (1 - i theta sgn(t) tan(pi alpha/2))

    At alpha = 1 the skewness enters through (2/pi) log|t| instead.
    """
    derived = derive_params(params) if derived is None else derived
    t = np.asarray(t, dtype=float)
    a, d, theta = params.alpha, derived.d_alpha, derived.theta
    mag = np.abs(t)
    sgn = np.sign(t)
    if a == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)), 0.0)
        skew = 1 + 1j * theta * sgn * (2 / np.pi) * logs
    else:
        skew = 1 - 1j * theta * sgn * np.tan(np.pi * a / 2)
    out = 1j * t * derived.gamma_alpha - d * mag ** a * skew
    return out if out.ndim else complex(out)


def cf_stable_closed(params, t, derived=None):
    """Closed-form stable characteristic function"""
    return np.exp(log_cf_stable_closed(params, t, derived))


def sd_ratio_cf(params, eta, t, form="closed", spec=None, derived=None):
    """Self-decomposability ratio psi(t)/psi(eta t), itself a cf

    Parameters
    ----------
    params : StableParams
        Stable law
    eta : float
        Ratio in (0, 1)
    t : float or numpy.ndarray
        Frequencies
    form : {'closed', 'quadrature'}
        Evaluate both cfs in closed form (as a difference of log cfs) or by
        quadrature

    Returns
    -------
    complex or numpy.ndarray
        Ratio values
    """
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    derived = derive_params(params, spec) if derived is None else derived
    t = np.asarray(t, dtype=float)
    if form == "closed":
        out = np.exp(log_cf_stable_closed(params, t, derived)
                     - log_cf_stable_closed(params, eta * t, derived))
    elif form == "quadrature":
        out = cf_stable(params, t, spec, derived) / cf_stable(params, eta * t, spec, derived)
    else:
        raise ValueError(f"form must be 'closed' or 'quadrature', got {form}")
    out = np.asarray(out)
    return out if out.ndim else complex(out)
