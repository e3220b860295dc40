#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Empirical distances between samples, for comparison with the bounds
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from stablestein.errors import SurrogateWarning
from stablestein.stein.functions import w2_dictionary

__all__ = [
    "TransportEstimate",
    "delta_cost",
    "empirical_wdelta",
    "empirical_w2h",
]

EXACT_LIMIT = 2000


@dataclass(frozen=True)
class TransportEstimate:
    """Transport distance between two empirical measures"""
    value: float
    surrogate: bool
    n: int

    def __float__(self):
        return float(self.value)


def delta_cost(d, delta):
    """min(|d|, |d|^delta)"""
    d = np.abs(np.asarray(d, dtype=float))
    return np.minimum(d, d ** delta)


def empirical_wdelta(x_samples, y_samples, delta, exact_limit=EXACT_LIMIT):
    """Transport distance with cost min(|x-y|, |x-y|^delta)

    Solved exactly as an assignment problem up to exact_limit samples; above
    it the monotone (sorted) coupling is used, which need not be optimal for
    this cost, and a SurrogateWarning is issued.

    Parameters
    ----------
    x_samples, y_samples : numpy.ndarray
        Equally sized samples
    delta : float
        Exponent in (0, 1)
    exact_limit : int
        Largest sample size solved exactly

    Returns
    -------
    TransportEstimate
        Distance and surrogate flag
    """
    x = np.asarray(x_samples, dtype=float).ravel()
    y = np.asarray(y_samples, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"sample sizes differ: {x.size} vs {y.size}")
    if x.size == 0:
        raise ValueError("empty samples")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if x.size <= exact_limit:
        cost = delta_cost(x[:, None] - y[None, :], delta)
        rows, cols = linear_sum_assignment(cost)
        return TransportEstimate(float(cost[rows, cols].mean()), False, x.size)
    warnings.warn(f"{x.size} samples exceed the exact solver limit {exact_limit}; "
                  "using the monotone coupling", SurrogateWarning)
    return TransportEstimate(float(delta_cost(np.sort(x) - np.sort(y), delta).mean()), True, x.size)


def empirical_w2h(x_samples, y_samples, dictionary=None, tol=1e-9):
    """Largest |mean h(x) - mean h(y)| over a dictionary of smooth functions

    A lower estimate of the smooth Wasserstein distance, the supremum over
    h with ||h||, ||h'||, ||h''|| <= 1.

    Parameters
    ----------
    x_samples, y_samples : numpy.ndarray
        Samples
    dictionary : list of TestFunction, optional
        Functions, w2_dictionary() when omitted; each must satisfy the three
        norm constraints
    tol : float
        Slack on the norm constraints

    Returns
    -------
    float
        Dictionary supremum
    """
    dictionary = w2_dictionary() if dictionary is None else list(dictionary)
    for h in dictionary:
        if max(h.sup_norms) > 1 + tol:
            raise ValueError(f"{h.name} violates the unit norm constraints: {h.sup_norms}")
    x = np.asarray(x_samples, dtype=float).ravel()
    y = np.asarray(y_samples, dtype=float).ravel()
    if x.size == 0 or y.size == 0:
        raise ValueError("empty samples")
    return max(abs(float(np.mean(h.value(x))) - float(np.mean(h.value(y)))) for h in dictionary)
