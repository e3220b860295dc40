#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Parameterisations of non-Gaussian stable laws S(alpha, beta)

A law is specified through its Lévy density weights (m1, m2) and the
location-type parameter beta of the Lévy-Khintchine representation with the
u/(1+u^2) compensator. The derived quantities are

* Gamma_alpha, the drift when the Lévy integral is written with the
  indicator compensator (none for alpha < 1),
* gamma_alpha, d_alpha and theta of the closed form
  exp{i t gamma - d |t|^alpha (1 - i theta sgn(t) tan(pi alpha / 2))}.

All of them are evaluated by quadrature of their defining integrals.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from stablestein.numerics.quadrature import QuadratureSpec, integrate, integrate_oscillatory

__all__ = [
    "StableParams",
    "DerivedParams",
    "derive_params",
    "params_to_record",
    "params_from_record",
]


@dataclass(frozen=True)
class StableParams:
    """Stability index, location parameter and Lévy density weights"""
    alpha: float
    beta: float = 0.0
    m1: float = 1.0
    m2: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha < 2:
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError(f"m1 and m2 must be non-negative, got {self.m1}, {self.m2}")
        if not self.m1 + self.m2 > 0:
            raise ValueError("m1 + m2 must be positive")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")

    @property
    def symmetric(self):
        return self.m1 == self.m2 and self.beta == 0

    @classmethod
    def with_scale(cls, alpha, d=1.0, theta=0.0, beta=0.0):
        """Parameters whose closed-form scale is d and skewness theta"""
        if alpha == 1:
            total = 2.0 * d / math.pi
        else:
            total = -d / (math.gamma(-alpha) * math.cos(math.pi * alpha / 2))
        return cls(alpha, beta, total * (1 + theta) / 2, total * (1 - theta) / 2)


@dataclass(frozen=True)
class DerivedParams:
    Gamma_alpha: float
    gamma_alpha: float
    d_alpha: float
    theta: float


def _expm1_over_u(u):
    # (e^{-u} - 1) / u
    return np.expm1(-u) / u


def _expm1_over_u2(u):
    # (e^{-u} - 1 + u) / u^2, by its Taylor series where the difference cancels
    if u < 0.1:
        term, total = 0.5, 0.0
        for k in range(2, 16):
            total += term
            term *= -u / (k + 1)
        return total
    return (np.expm1(-u) + u) / (u * u)


def _minus_expm1_integral(alpha, spec):
    # int_0^inf (e^{-u} - 1) u^{-1-alpha} du, and its compensated version for alpha > 1
    if alpha < 1:
        head = integrate(lambda u: _expm1_over_u(u) * u ** -alpha, 0.0, 1.0, spec.singular(alpha))
        tail = integrate(lambda u: np.expm1(-u) * u ** (-1 - alpha), 1.0, np.inf, spec)
        return head + tail
    head = integrate(lambda u: _expm1_over_u2(u) * u ** (1 - alpha), 0.0, 1.0,
                     spec.singular(alpha - 1))
    tail = integrate(lambda u: (np.expm1(-u) + u) * u ** (-1 - alpha), 1.0, np.inf, spec)
    return head + tail


def _Gamma(params, spec):
    a, diff = params.alpha, params.m1 - params.m2
    if a < 1:
        inner = integrate(lambda u: u ** -a / (1 + u * u), 0.0, np.inf, spec.singular(a))
        return params.beta - diff * inner
    near = integrate(lambda u: u * u / (u ** a * (1 + u * u)), 0.0, 1.0, spec)
    whole = (near
             + integrate(lambda u: 1.0 / (u ** a * (1 + u * u)), 1.0, np.inf, spec))
    return params.beta + 2 * diff * near - diff * whole


def _gamma(params, Gamma, spec):
    a, diff = params.alpha, params.m1 - params.m2
    if a < 1:
        return Gamma
    if a == 1:
        near = integrate(lambda u: (np.sin(u) - u / (1 + u * u)) / (u * u), 0.0, 1.0, spec)
        far = (integrate_oscillatory(lambda u: u ** -2.0, 1.0, 1.0, "sin", spec)
               - integrate(lambda u: 1.0 / (u * (1 + u * u)), 1.0, np.inf, spec))
        return params.beta + diff * (near + far)
    return params.beta + diff * integrate(lambda u: u ** (2 - a) / (1 + u * u), 0.0, np.inf, spec)


def derive_params(params, spec=None):
    """Evaluate Gamma_alpha, gamma_alpha, d_alpha and theta

    Parameters
    ----------
    params : StableParams
        Stable law
    spec : QuadratureSpec, optional
        Quadrature tolerances

    Returns
    -------
    DerivedParams
        Derived parameters
    """
    spec = QuadratureSpec() if spec is None else spec
    a, total = params.alpha, params.m1 + params.m2
    Gamma = _Gamma(params, spec)
    gamma = _gamma(params, Gamma, spec)
    if a == 1:
        d = total * math.pi / 2
    else:
        d = -total * _minus_expm1_integral(a, spec) * math.cos(math.pi * a / 2)
    theta = (params.m1 - params.m2) / total
    return DerivedParams(Gamma, gamma, max(d, 0.0), theta)


def params_to_record(params, derived=None):
    """Serialise parameters as key=value lines"""
    fields = asdict(params)
    if derived is not None:
        fields.update(asdict(derived))
    return "\n".join(f"{k}={v!r}" for k, v in fields.items()) + "\n"


def params_from_record(text):
    """Parse key=value lines into (StableParams, DerivedParams or None)"""
    fields = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"Expected key=value, but instead got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        fields[key] = float(value)
    base = {k: fields.pop(k) for k in ("alpha", "beta", "m1", "m2") if k in fields}
    if "alpha" not in base:
        raise ValueError("record has no alpha")
    derived_keys = ("Gamma_alpha", "gamma_alpha", "d_alpha", "theta")
    derived = None
    if all(k in fields for k in derived_keys):
        derived = DerivedParams(*(fields.pop(k) for k in derived_keys))
    if fields:
        raise ValueError(f"Unknown keys in record: {sorted(fields)}")
    return StableParams(**base), derived


if __name__ == "__main__":
    p = StableParams(1.5, 0.0, 2.0, 1.0)
    print(params_to_record(p, derive_params(p)))
