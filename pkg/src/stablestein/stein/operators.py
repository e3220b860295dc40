#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Stein operators of infinitely divisible and stable laws

Every operator is evaluated at a scalar point with adaptive quadrature, or at
an array of points with fixed composite rules carrying the same endpoint
singularity. Lévy integrals are split at |u| = 1: the inner part carries the
power-law singularity of the Lévy density, the outer part is restricted to
the region where the test function is not negligible.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from stablestein.errors import NonConvergence, TailDivergence, TruncationWarning, WrongType
from stablestein.numerics.quadrature import QuadratureSpec, integrate, jacobi_rule, panel_rule
from stablestein.stable.levy import stable_levy
from stablestein.stable.params import StableParams, derive_params

__all__ = [
    "SteinOpResult",
    "apply_type_a",
    "apply_type_b",
    "apply_type_c",
    "apply_gaussian",
    "apply_stable",
    "apply_symmetric",
    "type_a_operator",
    "type_b_operator",
    "type_c_operator",
    "gaussian_operator",
    "stable_operator",
    "symmetric_operator",
]

_VECTOR_CLASSES = ("compact", "gaussian", "exponential")
_NEAR_SPLIT = 0.125
_BATCH = 1024
_U_MAX = 1e6


@dataclass(frozen=True)
class SteinOpResult:
    """Operator value(s) and a bound on the neglected Lévy tail"""
    value: object
    tail_truncation_error_bound: float = 0.0

    def __post_init__(self):
        if not self.tail_truncation_error_bound >= 0:
            raise ValueError("tail truncation bound must be non-negative")
        if not math.isfinite(self.tail_truncation_error_bound):
            raise ValueError("tail truncation bound must be finite")

    def __float__(self):
        return float(self.value)


def _check_tail(g, levy):
    if g.decay_class == "none" and not levy.large_u_moment_finite:
        raise TailDivergence(f"{g.name} does not decay and int_{{|u|>1}} |u| nu(du) diverges "
                             f"for {levy.name}")
    if g.decay_class == "polynomial" and g.decay_order + levy.tail_exponent <= 2:
        raise TailDivergence(f"{g.name} decays like |x|^-{g.decay_order}, too slowly for "
                             f"{levy.name}")


def _side_tail(levy, sign, U, spec):
    """int_U^inf u nu(sign du)"""
    if levy.power_law is not None:
        a, m1, m2 = levy.power_law
        return (m1 if sign > 0 else m2) * U ** (1 - a) / (a - 1)
    dens = levy.side(sign)
    return integrate(lambda u: u * dens(u), U, math.inf, spec)


def _far_pieces(g, x, sign, limit):
    """Split [1, limit] at the u where x + sign*u crosses the support of g

    Returns (a, b, inside) triples.
    """
    lo, hi = g.support
    core = sorted((sign * (lo - x), sign * (hi - x)))
    edges = [1.0] + [c for c in core if 1.0 < c < limit] + [limit]
    return [(a, b, core[0] <= a and b <= core[1]) for a, b in zip(edges[:-1], edges[1:])]


def _truncated(integrand, a, levy, sign, norm, spec):
    # geometric segments up to U, accepting the remainder bound norm * tail(U)
    value, U = 0.0, a
    while True:
        nxt = max(4.0 * U, 16.0)
        value += integrate(integrand, U, nxt, spec)
        U = nxt
        bound = norm * _side_tail(levy, sign, U, spec)
        if bound <= spec.abs_tol:
            return value, bound
        if U >= _U_MAX:
            warnings.warn(f"Lévy tail truncated at U={U:.0e} with bound {bound:.2e}",
                          TruncationWarning, stacklevel=4)
            return value, bound


def _far_scalar(g, x, levy, sign, spec):
    """int_1^limit u g(x + sign u) nu(sign du) and its truncation bound"""
    limit = levy.side_limit(sign)
    if limit <= 1.0:
        return 0.0, 0.0
    dens = levy.side(sign)

    def integrand(u):
        return u * g.value(x + sign * u) * dens(u)

    total, bound = 0.0, 0.0
    for a, b, inside in _far_pieces(g, x, sign, limit):
        if g.decay_class == "compact" and not inside:
            continue
        if math.isinf(b) and g.decay_class == "none" and math.isfinite(levy.tail_exponent):
            try:
                total += integrate(integrand, a, b, spec)
            except NonConvergence:
                part, err = _truncated(integrand, a, levy, sign, g.sup_norms[0], spec)
                total += part
                bound += err
            continue
        total += integrate(integrand, a, b, spec)
    return total, bound


def _levy_integral_scalar(g, x, levy, compensate, spec):
    """int u (g(x+u) - g(x) 1_{|u|<=1} [compensate]) nu(du) at a scalar x"""
    if levy.is_zero:
        return 0.0, 0.0
    _check_tail(g, levy)
    gx = float(g.value(x))
    s = levy.origin_exponent
    total, bound = 0.0, 0.0
    for sign in (1, -1):
        limit = levy.side_limit(sign)
        if limit <= 0:
            continue
        dens = levy.side(sign)
        hi = min(1.0, limit)
        if compensate:
            near = integrate(lambda u: u * (g.value(x + sign * u) - gx) * dens(u), 0.0, hi,
                             spec.singular(s - 2))
        else:
            near = integrate(lambda u: u * g.value(x + sign * u) * dens(u), 0.0, hi,
                             spec.singular(s - 1))
        far, err = _far_scalar(g, x, levy, sign, spec)
        total += sign * (near + far)
        bound += err
    return total, bound


def _near_rule(hi, weight_exponent, order=32, n_panels=7):
    """Nodes on (0, hi): a Gauss-Jacobi head for u^b F(u), regular panels after

    Returns (head_nodes, head_weights, tail_nodes, tail_weights); the head
    weights already include u^b.
    """
    eta = _NEAR_SPLIT * hi
    v, w = jacobi_rule(order, weight_exponent)
    head_u = eta * v
    head_w = eta ** (weight_exponent + 1) * w
    tail_u, tail_w = panel_rule(eta, hi, n_panels)
    return head_u, head_w, tail_u, tail_w


def _far_fixed(g, x, levy, sign):
    limit = levy.side_limit(sign)
    if limit <= 1.0:
        return np.zeros_like(x)
    lo, hi = g.support
    if sign > 0:
        a, b = lo - x, hi - x
    else:
        a, b = x - hi, x - lo
    a = np.maximum(a, 1.0)
    b = np.minimum(b, limit)
    b = np.maximum(a, b)
    n_panels = int(np.clip(math.ceil(4 * (hi - lo) / g.scale), 8, 512))
    nodes, weights = panel_rule(a, b, n_panels)
    dens = levy.density(sign * nodes)
    vals = nodes * g.value(x[:, None] + sign * nodes) * dens
    return np.sum(vals * weights, axis=-1)


def _levy_integral_fixed(g, x, levy, compensate):
    """Vectorised counterpart of _levy_integral_scalar for finitely supported g"""
    if levy.is_zero:
        return np.zeros_like(x)
    s = levy.origin_exponent
    b = 2 - s if compensate else 1 - s
    total = np.zeros_like(x)
    gx = g.value(x)[:, None]
    for sign in (1, -1):
        limit = levy.side_limit(sign)
        if limit <= 0:
            continue
        hu, hw, tu, tw = _near_rule(min(1.0, limit), b)
        sf = levy.smooth_factor(sign * hu)
        gh = g.value(x[:, None] + sign * hu)
        if compensate:
            head = ((gh - gx) / hu * sf) @ hw
            body = (tu * (g.value(x[:, None] + sign * tu) - gx) * levy.density(sign * tu)) @ tw
        else:
            head = (gh * sf) @ hw
            body = (tu * g.value(x[:, None] + sign * tu) * levy.density(sign * tu)) @ tw
        total += sign * (head + body + _far_fixed(g, x, levy, sign))
    return total


def _vectorisable(g):
    return g.decay_class in _VECTOR_CLASSES and g.has_finite_support and g.level == 0


def _evaluate(g, x, scalar_fn, fixed_fn, method):
    """Run scalar_fn at a point, or over an array by fixed rule or pointwise"""
    if method not in ("auto", "adaptive", "fixed"):
        raise ValueError(f"method must be 'auto', 'adaptive' or 'fixed', got {method}")
    if not any(g.sup_norms):
        zeros = np.zeros(np.shape(x))
        return SteinOpResult(zeros if zeros.ndim else 0.0, 0.0)
    if np.ndim(x) == 0 and method != "fixed":
        value, bound = scalar_fn(float(x))
        return SteinOpResult(float(value), float(bound))
    x_arr = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x_arr).ravel()
    if method == "fixed" or (method == "auto" and _vectorisable(g)):
        if not _vectorisable(g):
            raise ValueError(f"{g.name}: fixed rules need a finitely supported decaying function")
        out = np.concatenate([fixed_fn(flat[i:i + _BATCH]) for i in range(0, flat.size, _BATCH)])
        bound = 0.0
    else:
        pairs = [scalar_fn(float(v)) for v in flat]
        out = np.array([p[0] for p in pairs])
        bound = max((p[1] for p in pairs), default=0.0)
    out = out.reshape(x_arr.shape)
    return SteinOpResult(out if out.ndim else float(out), float(bound))


def _require_type(levy, kind):
    if levy.idd_type != kind:
        raise WrongType(f"operator expects a type {kind} Lévy measure, got type "
                        f"{levy.idd_type} ({levy.name})")


def _stein_b(g, x, levy, drift, spec, method):
    def scalar(v):
        integral, bound = _levy_integral_scalar(g, v, levy, False, spec)
        return (v - drift) * float(g.value(v)) - integral, bound

    def fixed(v):
        return (v - drift) * g.value(v) - _levy_integral_fixed(g, v, levy, False)
    return _evaluate(g, x, scalar, fixed, method)


def _stein_c(g, x, levy, drift, spec, method):
    def scalar(v):
        integral, bound = _levy_integral_scalar(g, v, levy, True, spec)
        return (v - drift) * float(g.value(v)) - integral, bound

    def fixed(v):
        return (v - drift) * g.value(v) - _levy_integral_fixed(g, v, levy, True)
    return _evaluate(g, x, scalar, fixed, method)


def apply_type_a(g, x, levy, spec=None, method="auto"):
    """Type A operator x g(x) - int u g(x+u) nu(du)

    Valid for a finite Lévy measure when beta - int_{|u|<=1} u nu(du) = 0,
    which the caller asserts.

    Parameters
    ----------
    g : TestFunction
        Test function
    x : float or numpy.ndarray
        Evaluation point(s)
    levy : LevySpec
        Finite Lévy measure
    spec : QuadratureSpec, optional
        Tolerances of the adaptive path
    method : {'auto', 'adaptive', 'fixed'}
        Evaluation path for arrays

    Returns
    -------
    SteinOpResult
        Operator value(s)
    """
    _require_type(levy, "A")
    return _stein_b(g, x, levy, 0.0, QuadratureSpec() if spec is None else spec, method)


def apply_type_b(g, x, levy, beta, spec=None, method="auto"):
    """Type B operator (x - beta_nu) g(x) - int u g(x+u) nu(du)

    beta_nu = beta - int_{|u|<=1} u nu(du).
    """
    _require_type(levy, "B")
    spec = QuadratureSpec() if spec is None else spec
    return _stein_b(g, x, levy, beta - levy.small_moment(spec), spec, method)


def apply_type_c(g, x, levy, beta, spec=None, method="auto"):
    """Type C operator (x - beta) g(x) - int u (g(x+u) - g(x) 1_{|u|<=1}) nu(du)"""
    _require_type(levy, "C")
    return _stein_c(g, x, levy, beta, QuadratureSpec() if spec is None else spec, method)


def apply_gaussian(g, x, beta, sigma2):
    """Gaussian operator (x - beta) g(x) - sigma2 g'(x)"""
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    x_arr = np.asarray(x, dtype=float)
    out = (x_arr - beta) * g.value(x_arr) - sigma2 * g.d1(x_arr)
    out = np.asarray(out)
    return SteinOpResult(out if out.ndim else float(out), 0.0)


def apply_stable(g, x, params, derived=None, spec=None, method="auto"):
    """Stein operator of S(alpha, beta)

    For alpha < 1, (x - Gamma_alpha) g(x) - int g(x+u) u nu_alpha(du); for
    alpha >= 1 the Lévy integral is compensated by g(x) on |u| <= 1.

    Parameters
    ----------
    g : TestFunction
        Test function; must decay when alpha < 1
    x : float or numpy.ndarray
        Evaluation point(s)
    params : StableParams
        Stable law
    derived : DerivedParams, optional
        Precomputed derived parameters

    Returns
    -------
    SteinOpResult
        Operator value(s)
    """
    spec = QuadratureSpec() if spec is None else spec
    derived = derive_params(params, spec) if derived is None else derived
    levy = stable_levy(params)
    if params.alpha < 1:
        return _stein_b(g, x, levy, derived.Gamma_alpha, spec, method)
    return _stein_c(g, x, levy, derived.Gamma_alpha, spec, method)


def apply_symmetric(g, x, alpha, m, spec=None, method="auto"):
    """Symmetric stable operator x g(x) - m int_0^inf (g(x+u) - g(x-u)) u^-alpha du"""
    if not 0 < alpha < 2:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    if not m > 0:
        raise ValueError(f"m must be positive, got {m}")
    spec = QuadratureSpec() if spec is None else spec
    levy = stable_levy(StableParams(alpha, 0.0, m, m))

    def scalar(v):
        _check_tail(g, levy)
        near = integrate(lambda u: (g.value(v + u) - g.value(v - u)) * u ** -alpha, 0.0, 1.0,
                         spec.singular(alpha - 1))
        far_p, err_p = _far_scalar(g, v, levy, 1, spec)
        far_m, err_m = _far_scalar(g, v, levy, -1, spec)
        return v * float(g.value(v)) - m * near - (far_p - far_m), err_p + err_m

    def fixed(v):
        hu, hw, tu, tw = _near_rule(1.0, 1 - alpha)
        col = v[:, None]
        head = ((g.value(col + hu) - g.value(col - hu)) / hu) @ hw
        body = ((g.value(col + tu) - g.value(col - tu)) * tu ** -alpha) @ tw
        far = _far_fixed(g, v, levy, 1) - _far_fixed(g, v, levy, -1)
        return v * g.value(v) - m * (head + body) - far
    return _evaluate(g, x, scalar, fixed, method)


def type_a_operator(levy, **kwargs):
    return lambda g, x: apply_type_a(g, x, levy, **kwargs)


def type_b_operator(levy, beta, **kwargs):
    return lambda g, x: apply_type_b(g, x, levy, beta, **kwargs)


def type_c_operator(levy, beta, **kwargs):
    return lambda g, x: apply_type_c(g, x, levy, beta, **kwargs)


def gaussian_operator(beta, sigma2):
    return lambda g, x: apply_gaussian(g, x, beta, sigma2)


def stable_operator(params, **kwargs):
    """Operator closure for S(alpha, beta) with the derived parameters cached"""
    derived = kwargs.pop("derived", None) or derive_params(params)
    return lambda g, x: apply_stable(g, x, params, derived=derived, **kwargs)


def symmetric_operator(alpha, m, **kwargs):
    return lambda g, x: apply_symmetric(g, x, alpha, m, **kwargs)
