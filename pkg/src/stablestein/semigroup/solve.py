#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Solution of the stable Stein equation T f = h - Eh(X) through the semigroup

f_h(x) = -int_0^inf (P_t h(x) - Eh(X)) dt, with derivatives obtained by
differentiating under the time integral.
"""

import os
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline

from stablestein.errors import NonConvergence
from stablestein.semigroup.context import build_context
from stablestein.semigroup.semigroup import expectation, generator_apply, semigroup_derivative
from stablestein.stein.functions import TestFunction, from_samples

__all__ = [
    "SteinSolution",
    "solve_stein",
    "stein_residual",
    "derivative_bound_report",
]


@dataclass(frozen=True)
class SteinSolution:
    """Grid representation of the solution f_h of the Stein equation

    Parameters
    ----------
    x : numpy.ndarray
        Evaluation grid
    values, d1, d2 : numpy.ndarray
        f_h, f_h' and f_h'' on the grid
    h_ref : TestFunction
        Right-hand side function h
    Eh : float
        Eh(X) under the target law
    params : StableParams
        Target law
    tail_bound : float
        Estimate of the neglected time integral beyond the last node
    residual : numpy.ndarray, optional
        |T f_h - (h - Eh)| on the grid, NaN where not evaluated
    """
    x: np.ndarray
    values: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    h_ref: TestFunction
    Eh: float
    params: object
    tail_bound: float = 0.0
    residual: np.ndarray = None

    def derivative_function(self):
        """f_h' as a test function, continued by c/x tails beyond the grid"""
        return from_samples(self.x, self.d1, tail_power=1, name=f"f_{self.h_ref.name}'")

    def as_test_function(self):
        """f_h as a test function

        Beyond the grid f_h' decays like c/x, so f_h is continued with
        logarithmic tails matching the end slopes.
        """
        g1 = self.derivative_function()
        x, v = self.x, self.values
        lo, hi = float(x[0]), float(x[-1])
        c_lo, c_hi = float(self.d1[0]) * lo, float(self.d1[-1]) * hi
        inner = g1.value
        spline = CubicHermiteSpline(x, v, self.d1)

        def value(y):
            y = np.asarray(y, dtype=float)
            r = np.abs(np.where((y < lo) | (y > hi), y, 1.0))
            left = v[0] + c_lo * np.log(r / abs(lo))
            right = v[-1] + c_hi * np.log(r / hi)
            body = spline(np.clip(y, lo, hi))
            return np.where(y < lo, left, np.where(y > hi, right, body))

        return TestFunction(value, inner, g1.d1, g1.d2, "none", 0.0, (lo, hi), 0.0,
                            scale=g1.scale, derivative_decay=("polynomial", 1.0),
                            name=f"f_{self.h_ref.name}")

    def to_frame(self):
        """pandas.DataFrame with columns x, f, f', f'' and residual"""
        residual = np.full_like(self.x, np.nan) if self.residual is None else self.residual
        return pd.DataFrame({"x": self.x, "f": self.values, "f'": self.d1, "f''": self.d2,
                             "residual": residual})

    def to_csv(self, outfile, overwrite=False):
        """Write the solution table to a CSV file"""
        df = self.to_frame()
        if os.path.isfile(outfile):
            if overwrite:
                print("Overwriting existing file")
                df.to_csv(outfile, index=False, float_format="%.17g")
                print("Overwritten file saved to " + str(outfile))
            else:
                print("File exists and will not be overwritten")
        else:
            df.to_csv(outfile, index=False, float_format="%.17g")
            print("New file saved to " + str(outfile))
        return df


def _integrand(ctx, h, x, eh, verbose):
    rows = [[], [], []]
    for i, t in enumerate(ctx.t_grid):
        if verbose and i % 16 == 0:
            print(f"Evaluating P_t h at node {i + 1}/{ctx.t_grid.size} (t={t:.4g})...")
        rows[0].append(np.asarray(semigroup_derivative(ctx, h, t, x, 0)) - eh)
        rows[1].append(np.asarray(semigroup_derivative(ctx, h, t, x, 1)))
        rows[2].append(np.asarray(semigroup_derivative(ctx, h, t, x, 2)))
    return [np.vstack(r) for r in rows]


def solve_stein(h, params, ctx=None, verbose=False):
    """Solve T f = h - Eh(X) for a stable target

    Parameters
    ----------
    h : TestFunction
        Right-hand side; Lipschitz for alpha < 1, twice differentiable for
        alpha > 1
    params : StableParams
        Target law, alpha != 1
    ctx : SemigroupContext, optional
        Grids and cached state; build_context(params) when omitted
    verbose : bool
        Print progress

    Returns
    -------
    SteinSolution
        f_h and its first two derivatives on ctx.x_grid
    """
    ctx = build_context(params, verbose=verbose) if ctx is None else ctx
    x = ctx.x_grid.points
    eh = float(expectation(ctx, h))
    if verbose:
        print(f"Eh(X) = {eh:.10g}")

    if not any(h.sup_norms[1:]):
        zeros = np.zeros_like(x)
        return SteinSolution(x, zeros, zeros, zeros, h, eh, params)

    f0, f1, f2 = _integrand(ctx, h, x, eh, verbose)
    t = ctx.t_grid

    # remaining mass of the time integral, |P_t h - Eh| decaying like e^{-min(1,alpha) t}
    tail = float(np.max(np.abs(f0[-1]))) / min(1.0, params.alpha)
    if tail > ctx.t_tol:
        raise NonConvergence(f"time integral truncated at t={t[-1]:g} leaves {tail:.3e} "
                             f"(tolerance {ctx.t_tol:g}); increase t_max")

    values = -simpson(f0, x=t, axis=0)
    d1 = -simpson(f1, x=t, axis=0)
    d2 = -simpson(f2, x=t, axis=0)
    if verbose:
        print(f"Solved on {x.size} points, tail bound {tail:.3e}")
    return SteinSolution(x, values, d1, d2, h, eh, params, tail)


def stein_residual(sol, ctx=None, fraction=0.8, **kwargs):
    """sup over the grid core of |T f_h(x) - (h(x) - Eh)|

    Returns the supremum and the solution with its residual column filled.
    """
    derived = None if ctx is None else ctx.derived
    centre = 0.5 * (sol.x[0] + sol.x[-1])
    half = 0.5 * fraction * (sol.x[-1] - sol.x[0])
    core = np.abs(sol.x - centre) <= half * (1 + 1e-12)
    f = sol.as_test_function()
    xs = sol.x[core]
    lhs = np.asarray(generator_apply(f, xs, sol.params, derived, **kwargs), dtype=float)
    rhs = np.asarray(sol.h_ref.value(xs), dtype=float) - sol.Eh
    residual = np.full_like(sol.x, np.nan)
    residual[core] = np.abs(lhs - rhs)
    return float(np.max(residual[core])), replace(sol, residual=residual)


def derivative_bound_report(sol):
    """Ratios ||f_h'|| / ||h'|| and ||f_h''|| / (||h''|| / 2)

    The second ratio is None for alpha < 1; a vanishing h-norm gives 0.
    """
    _, n1, n2 = sol.h_ref.sup_norms
    s1 = float(np.max(np.abs(sol.d1)))
    s2 = float(np.max(np.abs(sol.d2)))
    ratio1 = s1 / n1 if n1 > 0 else 0.0
    if sol.params.alpha < 1:
        return ratio1, None
    ratio2 = s2 / (0.5 * n2) if n2 > 0 else 0.0
    return ratio1, ratio2
