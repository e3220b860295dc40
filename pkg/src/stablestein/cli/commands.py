#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Experiment commands behind the stablestein command line

Each command takes a resolved ExperimentConfig, writes its CSV (and, where
useful, a plot script) into the output folder and returns the table.
"""

import math
import os
from dataclasses import replace

import numpy as np
import pandas as pd

from stablestein.bounds.bounds import (ConstantsPolicy, bound_w2, bound_wdelta,
                                       calibrate_constants_w2, calibrate_constants_wdelta)
from stablestein.bounds.distances import empirical_w2h, empirical_wdelta
from stablestein.bounds.dna import DNASpec, sample_dna_sum, stable_matched_dna
from stablestein.bounds.kernels import two_point_law
from stablestein.cli.output import write_csv, write_plot_script
from stablestein.errors import ConfigError
from stablestein.numerics.fourier import GridSpec, fourier_invert
from stablestein.numerics.streams import RngStream, normal_stream
from stablestein.semigroup.context import build_context
from stablestein.semigroup.solve import derivative_bound_report, solve_stein, stein_residual
from stablestein.stable.cf import cf_stable, cf_stable_closed, sd_ratio_cf
from stablestein.stable.density import density
from stablestein.stable.levy import IDDTriplet, compound_poisson_levy, zero_levy
from stablestein.stable.params import derive_params
from stablestein.stable.sample import sample
from stablestein.stein import functions
from stablestein.stein.identity import stein_identity_mc
from stablestein.stein.operators import (gaussian_operator, stable_operator, symmetric_operator,
                                         type_a_operator)

__all__ = [
    "TEST_FUNCTIONS",
    "cmd_cf",
    "cmd_density",
    "cmd_sample",
    "cmd_stein_check",
    "cmd_solve",
    "cmd_bound_sweep",
    "cmd_sd_check",
]

TEST_FUNCTIONS = {
    "gaussian_bump": lambda: functions.gaussian_bump(0.5, 1.0, 1.0),
    "tanh_window": functions.tanh_window,
    "compact_bump": lambda: functions.compact_bump(0.5, 1.5),
    "cosine_bump": lambda: functions.cosine_bump(1.0, 0.0, 1.5),
    "smoothed_min": functions.smoothed_min,
    "constant": functions.constant,
}


def _out(config, name):
    folder = config.get("output", "out")
    os.makedirs(folder, exist_ok=True)
    return os.path.join(folder, name)


def _save(config, df, name, plot=None):
    path = _out(config, name)
    write_csv(df, path, config, config.get("output", "overwrite"))
    if plot is not None and config.get("output", "plot"):
        write_plot_script(path, overwrite=config.get("output", "overwrite"), **plot)
    return df


def _verbose(config):
    return config.get("output", "verbose")


def cmd_cf(config):
    """Both cf forms on the [grid] t-range and their difference"""
    params = config.params
    derived = derive_params(params)
    g = config["grid"]
    t = np.linspace(g["t_min"], g["t_max"], g["n_t"])
    if _verbose(config):
        print(f"Evaluating cf of {params} at {t.size} frequencies...")
    quad = np.asarray(cf_stable(params, t, derived=derived))
    closed = np.asarray(cf_stable_closed(params, t, derived))
    df = pd.DataFrame({"t": t,
                       "re_quadrature": quad.real, "im_quadrature": quad.imag,
                       "abs_quadrature": np.abs(quad),
                       "re_closed": closed.real, "im_closed": closed.imag,
                       "abs_closed": np.abs(closed),
                       "difference": np.abs(quad - closed)})
    return _save(config, df, "cf.csv", {"x": "t", "columns": ["abs_quadrature", "abs_closed"],
                                        "title": f"|cf|, alpha={params.alpha:g}"})


def cmd_density(config):
    """Stable density by Fourier inversion on the [grid] x-range"""
    params = config.params
    g = config["grid"]
    grid = GridSpec(g["x_min"], g["x_max"], g["n_points"])
    if _verbose(config):
        print(f"Inverting cf of {params} on {grid.n_points} points...")
    x, p = density(params, grid, tail_correct=True)
    df = pd.DataFrame({"x": x, "density": p})
    return _save(config, df, "density.csv", {"x": "x", "columns": ["density"],
                                             "title": f"density, alpha={params.alpha:g}"})


def cmd_sample(config):
    """[mc] n variates of the stable law"""
    params = config.params
    mc = config["mc"]
    x = sample(params, mc["n"], RngStream(mc["seed"]))
    return _save(config, pd.DataFrame({"x": x}), "sample.csv")


def _stein_cases(params, derived, mismatch):
    cases = [("stable", stable_operator(params, derived=derived), params, "stable")]
    if params.symmetric:
        cases.append(("symmetric", symmetric_operator(params.alpha, params.m1), params, "stable"))
    levy = compound_poisson_levy(lambda u: np.full_like(u, 0.5), (-1.0, 2.0))
    triplet = IDDTriplet(levy.small_moment(), 0.0, levy)
    cases.append(("type_a", type_a_operator(levy), triplet, "compound_poisson"))
    cases.append(("gaussian", gaussian_operator(0.0, 1.0), IDDTriplet(0.0, 1.0, zero_levy()),
                  "gaussian"))
    if mismatch:
        # stable operator fed with standard normal samples
        cases = [(op, fn, (lambda size, stream: normal_stream(stream, size)), "gaussian")
                 for op, fn, _, _ in cases[:1]]
    return cases


def cmd_stein_check(config):
    """Monte Carlo characterising identities over the standard dictionary"""
    params = config.params
    derived = derive_params(params)
    mc = config["mc"]
    rows = []
    for op_name, op, target, target_name in _stein_cases(params, derived, mc["mismatch"]):
        for g in functions.standard_dictionary():
            for k in range(mc["seeds"]):
                rng = RngStream(mc["seed"], k)
                if _verbose(config):
                    print(f"Checking {op_name} operator on {g.name} (seed {mc['seed']}/{k})...")
                est = stein_identity_mc(op, target, g, mc["n"], rng, mc["workers"], mc["chunk"])
                rows.append({"operator": op_name, "target": target_name, "test_fn": g.name,
                             "seed_stream": k, "mean": est.mean, "std_error": est.std_error,
                             "pass": est.passes(3.0)})
    return _save(config, pd.DataFrame(rows), "stein_check.csv")


def cmd_solve(config):
    """Solve the Stein equation for [solve] h and report residual and derivative bounds"""
    params = config.params
    s, g = config["solve"], config["grid"]
    name = s["h"]
    if name not in TEST_FUNCTIONS:
        raise ConfigError(f"[solve] h must be one of {sorted(TEST_FUNCTIONS)}, got {name}")
    h = TEST_FUNCTIONS[name]()
    verbose = _verbose(config)
    ctx = build_context(params, GridSpec(g["x_min"], g["x_max"], g["n_points"]),
                        s["t_min"], s["t_max"], s["n_t"], verbose=verbose)
    if verbose:
        print(f"Solving Stein equation on {g['n_points']} grid points...")
    sol = solve_stein(h, params, ctx, verbose=verbose)
    if any(h.sup_norms[1:]):
        if verbose:
            print("Evaluating the generator on the solution...")
        worst, sol = stein_residual(sol, ctx, s["core"])
    else:
        worst = 0.0
        sol = replace(sol, residual=np.zeros_like(sol.x))
    ratio1, ratio2 = derivative_bound_report(sol)
    _save(config, sol.to_frame(), "solution.csv",
          {"x": "x", "columns": ["f", "f'", "f''"], "title": f"Stein solution for {h.name}"})
    summary = pd.DataFrame([{"h": h.name, "alpha": params.alpha, "Eh": sol.Eh,
                             "max_residual": worst, "ratio1": ratio1,
                             "ratio2": math.nan if ratio2 is None else ratio2,
                             "tail_bound": sol.tail_bound}])
    if verbose:
        print(summary.to_string(index=False))
    return _save(config, summary, "solution_summary.csv")


def _constants(config, params, dna=None, law_for=None, rng=None):
    c = config["constants"]
    policy = c["policy"]
    if policy is None:
        raise ConfigError("bound-sweep needs [constants] policy: one of user, truncation or "
                          "calibrated; the bounds' constants are not known in closed form")
    if policy == "user":
        missing = [k for k in ("C_alpha_A_K", "C_1_nu", "C_2_nu") if c[k] is None]
        if missing:
            raise ConfigError(f"[constants] policy 'user' needs {', '.join(missing)}")
        return ConstantsPolicy(c["C_alpha_A_K"], c["C_1_nu"], c["C_2_nu"], c["truncation_U"])
    base = ConstantsPolicy.from_truncation(params, c["truncation_U"], dna)
    if policy == "truncation":
        return base
    b = config["bounds"]
    verbose = _verbose(config)
    if dna is not None:
        return calibrate_constants_wdelta(dna, params, c["calibration_n"], b["split"][0],
                                          b["delta"], b["sample_size"], rng, base, verbose)
    return calibrate_constants_w2(law_for, params, c["calibration_n"], b["split"][0],
                                  b["sample_size"], rng, base, verbose)


def _dna(config, params):
    d = config["dna"]
    if d["matched"]:
        return stable_matched_dna(params)
    amp, width = d["e_amplitude"], d["e_width"]
    if amp == 0:
        return DNASpec(params.alpha, d["A"], d["theta"])

    def e_fn(y):
        return amp * np.exp(-(np.asarray(y, dtype=float) / width) ** 2)

    def e_d1(y):
        y = np.asarray(y, dtype=float)
        return -2 * y / width ** 2 * amp * np.exp(-(y / width) ** 2)

    return DNASpec(params.alpha, d["A"], d["theta"], e_fn, e_d1)


def cmd_bound_sweep(config):
    """Bounds and empirical distances over [bounds] n_values and split levels

    alpha < 1 sweeps the Wasserstein-delta bound for a DNA law over M; alpha > 1
    sweeps the smooth-Wasserstein bound for the two-point law over N.
    """
    params = config.params
    if params.alpha == 1:
        raise ConfigError("bound-sweep needs alpha != 1")
    derived = derive_params(params)
    b, mc = config["bounds"], config["mc"]
    rng = RngStream(mc["seed"])
    verbose = _verbose(config)
    x = sample(params, b["sample_size"], rng.child(0), derived)
    rows = []
    if params.alpha < 1:
        dna = _dna(config, params)
        consts = _constants(config, params, dna=dna, rng=rng.child(1))
        for k, n in enumerate(b["n_values"]):
            if verbose:
                print(f"Wasserstein-delta bound at n={n}...")
            t_n = sample_dna_sum(dna, n, b["sample_size"], rng.child(2).child(k))
            emp = empirical_wdelta(t_n, x, b["delta"])
            for M in b["split"]:
                report = bound_wdelta(n, dna, params, M, consts, derived=derived)
                rows.append(report.to_record(emp.value, emp.surrogate))
    else:
        scale = b["two_point_scale"]

        def law_for(n):
            return two_point_law(n, params.alpha, scale, max(params.m1, params.m2))

        consts = _constants(config, params, law_for=law_for, rng=rng.child(1))
        for k, n in enumerate(b["n_values"]):
            if verbose:
                print(f"Smooth-Wasserstein bound at n={n}...")
            law = law_for(n)
            s_n = law.sample_sum(n, b["sample_size"], rng.child(2).child(k))
            emp = empirical_w2h(s_n, x)
            for N in b["split"]:
                report = bound_w2(n, law, params, N, consts, derived=derived)
                rows.append(report.to_record(emp, False))
    df = pd.DataFrame(rows)
    return _save(config, df, "bound_sweep.csv",
                 {"x": "n", "columns": ["total", "empirical_distance"],
                  "title": f"bound vs empirical distance, alpha={params.alpha:g}",
                  "logx": True, "logy": True})


def cmd_sd_check(config):
    """Invert the self-decomposability ratio for each [sd] eta

    Reports the mass and minimum of the inverted density and the largest
    difference between the closed-form and quadrature ratio.
    """
    params = config.params
    derived = derive_params(params)
    sd = config["sd"]
    grid = GridSpec.centred(0.0, sd["half_width"], sd["n_points"])
    t_points = np.linspace(-5.0, 5.0, 41)
    rows = []
    for eta in sd["etas"]:
        if _verbose(config):
            print(f"Inverting cf ratio at eta={eta:g}...")
        values = fourier_invert(lambda t: sd_ratio_cf(params, eta, t, derived=derived), grid)
        closed = sd_ratio_cf(params, eta, t_points, "closed", derived=derived)
        quad = sd_ratio_cf(params, eta, t_points, "quadrature", derived=derived)
        rows.append({"eta": eta, "mass": float(np.sum(values) * grid.step),
                     "min_density": float(np.min(values)),
                     "form_difference": float(np.max(np.abs(np.asarray(closed) - np.asarray(quad))))})
    return _save(config, pd.DataFrame(rows), "sd_check.csv")
