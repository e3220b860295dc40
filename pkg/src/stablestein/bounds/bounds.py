#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Error bounds for stable approximation of normalised sums

* bound_wdelta: Wasserstein-delta distance between T_n = n^{-1/alpha} sum Y_j,
  Y_j in the domain of normal attraction, and the stable limit (alpha < 1),
* bound_w2: smooth Wasserstein distance between S_n = sum Z_i and the
  stable law (1 < alpha < 2), through the kernels K_nu and K_i.

The constants in front of the proof-derived terms are not explicit; they are
supplied through a ConstantsPolicy, built from a truncated second moment or
calibrated against measured distances.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from stablestein.bounds.distances import empirical_w2h, empirical_wdelta
from stablestein.bounds.dna import sample_dna_sum
from stablestein.bounds.kernels import DiscreteLaw, empirical_law, kernel_Knu, kernel_mismatch
from stablestein.numerics.quadrature import QuadratureSpec, integrate
from stablestein.numerics.streams import parallel_moments
from stablestein.stable.levy import stable_levy
from stablestein.stable.params import derive_params
from stablestein.stable.sample import sample
from stablestein.stein.identity import MCEstimate

__all__ = [
    "truncated_second_moment",
    "levy_tail_moment",
    "ConstantsPolicy",
    "BoundReport",
    "bound_wdelta",
    "bound_w2",
    "calibrate_constants_wdelta",
    "calibrate_constants_w2",
    "scaling_identity_check",
    "kernel_decomposition_check",
    "KernelIdentityCheck",
    "sum_kernel_identity_mc",
]


def truncated_second_moment(params, U):
    """int_{|u|<=U} u^2 nu_alpha(du) = (m1 + m2) U^{2-alpha} / (2 - alpha)"""
    if not U > 0:
        raise ValueError(f"U must be positive, got {U}")
    return stable_levy(params).truncated_second_moment(U)


def levy_tail_moment(params, N):
    """int_{|u|>N} |u| nu_alpha(du) = (m1 + m2) N^{1-alpha} / (alpha - 1); inf for alpha <= 1"""
    if not N > 0:
        raise ValueError(f"N must be positive, got {N}")
    return stable_levy(params).tail_moment(N)


@dataclass(frozen=True)
class ConstantsPolicy:
    """Constants of the bounds

    Parameters
    ----------
    C_alpha_A_K : float
        Constant of the 1/n term of the Wasserstein-delta bound
    C_1_nu : float
        Constant of the n^{1-1/alpha} term of the Wasserstein-delta bound
    C_2_nu : float
        Constant of the smooth-Wasserstein bound
    truncation_U : float
        Level U of the truncated second moment
    source : str
        How the constants were obtained
    """
    C_alpha_A_K: float = 1.0
    C_1_nu: float = 1.0
    C_2_nu: float = 1.0
    truncation_U: float = 1.0
    source: str = "user"

    def __post_init__(self):
        for name in ("C_alpha_A_K", "C_1_nu", "C_2_nu", "truncation_U"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v}")

    @classmethod
    def from_truncation(cls, params, U=1.0, dna=None):
        """Constants from the truncated second moment of nu_alpha

        C_1 = C_2 = sqrt(int_{|u|<=U} u^2 nu_alpha(du)); C_{alpha,A,K} = A + K
        of the DNA law (1 without one). The full second moment diverges for
        stable tails, hence the truncation.
        """
        root = math.sqrt(truncated_second_moment(params, U))
        c_aak = 1.0 if dna is None else dna.A + dna.K
        return cls(c_aak, root, root, float(U), source=f"truncation(U={U:g})")


@dataclass(frozen=True)
class BoundReport:
    """Term-by-term breakdown of a bound; total is the sum of the terms"""
    kind: str
    terms: dict
    parameters: dict = field(default_factory=dict)
    total: float = None

    def __post_init__(self):
        total = math.fsum(self.terms.values())
        if self.total is None:
            object.__setattr__(self, "total", total)
        elif abs(self.total - total) > 1e-12 * max(1.0, abs(total)):
            raise ValueError(f"total {self.total} differs from the sum of terms {total}")

    def to_record(self, empirical=None, surrogate=False):
        """Flat row: n, alpha, M_or_N, the terms, total, empirical_distance, surrogate_flag"""
        row = {"n": self.parameters.get("n"), "alpha": self.parameters.get("alpha"),
               "M_or_N": self.parameters.get("M", self.parameters.get("N"))}
        row.update(self.terms)
        row["total"] = self.total
        row["empirical_distance"] = math.nan if empirical is None else float(empirical)
        row["surrogate_flag"] = bool(surrogate)
        return row


def _e_integrals(dna, M, spec):
    """int over |y| < 1/M and |y| > 1/M of |y|^{1-alpha} e'(y) + alpha |y|^{-alpha} e(y)"""
    a = dna.alpha
    r = 1.0 / M
    near = far = 0.0
    for sign in (1, -1):
        def g(u, sign=sign):
            return float(u ** (1 - a) * dna.e_d1(sign * u) + a * u ** -a * dna.e_fn(sign * u))
        near += integrate(g, 0.0, r, spec.singular(a))
        far += integrate(g, r, math.inf, spec)
    return near, far


def bound_wdelta(n, spec, params, M, consts, quad=None, derived=None):
    """Wasserstein-delta bound for T_n = n^{-1/alpha}(Y_1 + ... + Y_n)

    C/n + 3 I_near / n^{1/alpha-1} + |Gamma_alpha| + I_far / n^{1/alpha-1}
    + C_1 / n^{1/alpha-1}, with I_near and I_far the e-integrals over
    |y| < 1/M and |y| > 1/M.

    Parameters
    ----------
    n : int
        Number of summands
    spec : DNASpec
        Law of the summands
    params : StableParams
        Stable limit, alpha < 1
    M : float
        Split level, positive
    consts : ConstantsPolicy
        Constants
    quad : QuadratureSpec, optional
        Tolerances for the e-integrals

    Returns
    -------
    BoundReport
        Terms constant, e_near, gamma, e_far and levy
    """
    if not 0 < params.alpha < 1:
        raise ValueError(f"the Wasserstein-delta bound needs alpha in (0, 1), got {params.alpha}")
    if int(n) < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    quad = QuadratureSpec() if quad is None else quad
    derived = derive_params(params) if derived is None else derived
    n = int(n)
    decay = float(n) ** (1 - 1 / params.alpha)
    near, far = _e_integrals(spec, M, quad)
    terms = {
        "constant": consts.C_alpha_A_K / n,
        "e_near": 3 * decay * near,
        "gamma": abs(derived.Gamma_alpha),
        "e_far": decay * far,
        "levy": consts.C_1_nu * decay,
    }
    return BoundReport("wdelta", terms, {"n": n, "alpha": params.alpha, "M": float(M),
                                         "normalisation": f"n^(-1/{params.alpha:g})",
                                         "constants": consts.source})


def _as_law(z_dist, rng, n_mc):
    if isinstance(z_dist, DiscreteLaw):
        return z_dist
    if hasattr(z_dist, "kernel") and hasattr(z_dist, "abs_tail"):
        return z_dist
    if callable(z_dist):
        if rng is None:
            raise ValueError("sampling a Z law needs an rng")
        return empirical_law(z_dist(int(n_mc), rng))
    return empirical_law(z_dist)


def bound_w2(n, z_dist, params, N, consts, rng=None, n_mc=100000, derived=None):
    """Smooth-Wasserstein bound for S_n = Z_1 + ... + Z_n with i.i.d. Z_i

    Terms: kernel_mismatch = (1/2) sum_i int |K_nu/n - K_i|,
    levy_tail = 2 int_{|u|>N} |u| nu_alpha(du), z_tail = 2 sum_i E|Z_i| 1{|Z_i|>N},
    location = |Gamma_alpha| + int_{|u|>1} |u| nu_alpha(du) and constant = C_2/sqrt(2).

    Parameters
    ----------
    n : int
        Number of summands
    z_dist : DiscreteLaw, array, sampler or kernel law
        Law of Z_i: a DiscreteLaw (exact), samples, a sampler(size, rng)
        drawn n_mc times, or any object with kernel(t, N) and abs_tail(N)
    params : StableParams
        Stable target, 1 < alpha < 2
    N : float
        Kernel truncation level
    consts : ConstantsPolicy
        Constants
    rng : RngStream, optional
        Stream for sampled Z laws

    Returns
    -------
    BoundReport
        Breakdown
    """
    if not 1 < params.alpha < 2:
        raise ValueError(f"the smooth-Wasserstein bound needs alpha in (1, 2), got {params.alpha}")
    if int(n) < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not N > 0:
        raise ValueError(f"N must be positive, got {N}")
    law = _as_law(z_dist, rng, n_mc)
    # sampled laws are centred only up to Monte Carlo error
    if isinstance(z_dist, DiscreteLaw) and abs(law.mean) > 1e-10:
        raise ValueError(f"Z must have mean 0, got {law.mean}")
    derived = derive_params(params) if derived is None else derived
    n = int(n)
    terms = {
        "kernel_mismatch": kernel_mismatch(params, law, n, N),
        "levy_tail": 2 * levy_tail_moment(params, N),
        "z_tail": 2 * n * law.abs_tail(N),
        "location": abs(derived.Gamma_alpha) + levy_tail_moment(params, 1.0),
        "constant": consts.C_2_nu / math.sqrt(2),
    }
    return BoundReport("w2", terms, {"n": n, "alpha": params.alpha, "N": float(N),
                                     "law": getattr(law, "name", type(law).__name__),
                                     "constants": consts.source})


def calibrate_constants_wdelta(spec, params, ns=(10, 20, 40), M=1.0, delta=0.5,
                               sample_size=1000, rng=None, base=None, verbose=False):
    """Smallest common C = C_{alpha,A,K} = C_1 with bound >= measured distance

    The measured distance is empirical_wdelta between sample_size draws of
    T_n and of the stable limit, for each n in ns.
    """
    if rng is None:
        raise ValueError("calibration needs an rng")
    base = ConstantsPolicy() if base is None else base
    derived = derive_params(params)
    x = sample(params, sample_size, rng.child(0), derived)
    c = 1e-12
    for k, n in enumerate(ns):
        t_n = sample_dna_sum(spec, n, sample_size, rng.child(k + 1))
        measured = empirical_wdelta(t_n, x, delta).value
        rest = bound_wdelta(n, spec, params, M, base, derived=derived)
        free = rest.total - rest.terms["constant"] - rest.terms["levy"]
        weight = 1.0 / n + float(n) ** (1 - 1 / params.alpha)
        c = max(c, (measured - free) / weight)
        if verbose:
            print(f"n={n}: measured distance {measured:.6g}")
    return replace(base, C_alpha_A_K=c, C_1_nu=c, source="calibrated")


def calibrate_constants_w2(z_law_for, params, ns=(10, 20, 40), N=4.0, sample_size=20000,
                           rng=None, base=None, verbose=False):
    """Smallest C_2 with bound_w2 >= measured dictionary distance at each n

    z_law_for(n) gives the DiscreteLaw of the summands of S_n.
    """
    if rng is None:
        raise ValueError("calibration needs an rng")
    base = ConstantsPolicy() if base is None else base
    derived = derive_params(params)
    x = sample(params, sample_size, rng.child(0), derived)
    c = 1e-12
    for k, n in enumerate(ns):
        law = z_law_for(n)
        s_n = law.sample_sum(n, sample_size, rng.child(k + 1))
        measured = empirical_w2h(s_n, x)
        rest = bound_w2(n, law, params, N, base, derived=derived)
        free = rest.total - rest.terms["constant"]
        c = max(c, math.sqrt(2) * (measured - free))
        if verbose:
            print(f"n={n}: measured distance {measured:.6g}")
    return replace(base, C_2_nu=c, source="calibrated")


def scaling_identity_check(f, y, a, params, quad=None):
    """|LHS - RHS| of the change of scale identity

    int_0^inf (m1 f'(y+u) - m2 f'(y-u)) / u^alpha du
      = a^{1-alpha} int u f'(y+au) (m1 1{u>0} + m2 1{u<0}) / |u|^{alpha+1} du,

    each side by its own quadrature.
    """
    alpha = params.alpha
    if not 0 < alpha < 1:
        raise ValueError(f"the scaling identity needs alpha in (0, 1), got {alpha}")
    if not 0 < a <= 1:
        raise ValueError(f"a must lie in (0, 1], got {a}")
    quad = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11) if quad is None else quad
    m1, m2, d1 = params.m1, params.m2, f.d1
    sing = quad.singular(alpha)
    lhs = integrate(lambda u: float(m1 * d1(y + u) - m2 * d1(y - u)) * u ** -alpha,
                    0.0, math.inf, sing)
    right = integrate(lambda u: float(u * d1(y + a * u)) * m1 * u ** (-alpha - 1),
                      0.0, math.inf, sing)
    left = integrate(lambda v: float(-v * d1(y - a * v)) * m2 * v ** (-alpha - 1),
                     0.0, math.inf, sing)
    rhs = a ** (1 - alpha) * (right + left)
    return abs(lhs - rhs)


def kernel_decomposition_check(f, x, N, params, quad=None):
    """|LHS - RHS| of the kernel decomposition at x

    int (f'(x+u) - f'(x)) u nu_alpha(du)
      = int_{-N}^{N} K_nu(t, N) f''(x+t) dt + int_{|u|>N} (f'(x+u) - f'(x)) u nu_alpha(du)
    """
    alpha = params.alpha
    if not 1 < alpha < 2:
        raise ValueError(f"the kernel decomposition needs alpha in (1, 2), got {alpha}")
    quad = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10) if quad is None else quad
    d1, d2 = f.d1, f.d2
    g0 = float(d1(x))
    lhs = kernel = tail = 0.0
    for sign, m in ((1, params.m1), (-1, params.m2)):
        if m == 0:
            continue

        def jump(u, sign=sign, m=m):
            return sign * float(d1(x + sign * u) - g0) * m * u ** -alpha

        lhs += integrate(jump, 0.0, 1.0, quad.singular(alpha - 1))
        lhs += integrate(jump, 1.0, math.inf, quad)
        kernel += integrate(lambda t, sign=sign: float(kernel_Knu(sign * t, N, params)
                                                       * d2(x + sign * t)),
                            0.0, float(N), quad.singular(alpha - 1))
        tail += integrate(jump, float(N), math.inf, quad)
    return abs(lhs - (kernel + tail))


@dataclass(frozen=True)
class KernelIdentityCheck:
    """Both sides of E[S_n f'(S_n)] = sum_i int K_i E f''(S_n(i)+t) dt + R_1 and their difference"""
    lhs: MCEstimate
    rhs: MCEstimate
    difference: MCEstimate

    @property
    def agree(self):
        return self.difference.passes(3.0)


def sum_kernel_identity_mc(f, law, n, N, n_mc, rng, workers=1):
    """Monte Carlo check of the kernel identity for sums of i.i.d. Z_i

    Each draw takes S_n(i) (a sum of n-1 copies) and an independent Z; the
    kernel integral is exact for the piecewise-constant K_i of a DiscreteLaw:
    int K(t) f''(s+t) dt = sum_j k_j (f'(s+b_{j+1}) - f'(s+b_j)).
    """
    if not isinstance(law, DiscreteLaw):
        raise TypeError("the kernel identity check needs a DiscreteLaw")
    n = int(n)
    if abs(law.mean) > 1e-10:
        raise ValueError(f"Z must have mean 0, got {law.mean}")
    b = law.breakpoints(N)
    edges = np.concatenate([[-float(N)], b[b < 0], [0.0], b[b > 0], [float(N)]])
    edges = np.unique(edges)
    k = np.asarray(law.kernel(0.5 * (edges[:-1] + edges[1:]), N), dtype=float)
    d1 = f.d1

    def sides(size, stream):
        s = law.sample_sum(n - 1, size, stream.child(0))
        z = law.sample(size, stream.child(1))
        lhs = n * z * d1(s + z)
        steps = d1(s[:, None] + edges[None, 1:]) - d1(s[:, None] + edges[None, :-1])
        r1 = np.where(np.abs(z) > N, z * (d1(s + z) - d1(s)), 0.0)
        rhs = n * (steps @ k + r1)
        return lhs, rhs

    def estimate(pick):
        count, mean, m2 = parallel_moments(lambda size, stream: pick(*sides(size, stream)),
                                           int(n_mc), rng, workers)
        return MCEstimate(mean, math.sqrt(m2 / (count - 1) / count), count)

    return KernelIdentityCheck(estimate(lambda lhs, rhs: lhs), estimate(lambda lhs, rhs: rhs),
                               estimate(lambda lhs, rhs: lhs - rhs))
