#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import unittest, math
import numpy as np
from scipy import integrate as spi
from stablestein.errors import TailDivergence, WrongType
from stablestein.numerics.streams import RngStream, normal_stream
from stablestein.stable.levy import (IDDTriplet, compound_poisson_levy, stable_levy,
                                     tempered_cauchy_levy, zero_levy)
from stablestein.stable.params import StableParams, derive_params
from stablestein.stein import functions
from stablestein.stein.identity import MCEstimate, stein_identity_mc
from stablestein.stein.operators import (apply_gaussian, apply_stable, apply_symmetric,
                                         apply_type_a, apply_type_b, apply_type_c,
                                         gaussian_operator, stable_operator, type_a_operator)

class TestFunctions(unittest.TestCase):
    '''Unittest for test functions and their algebra'''

    def test_consistency(self):
        '''Test analytic derivatives against finite differences'''
        for g in functions.standard_dictionary() + functions.w2_dictionary():
            self.assertLess(g.check_consistency(tol=1e-4), 1e-4)

    def test_algebra(self):
        '''Test linear combinations and derivatives'''
        a, b = functions.gaussian_bump(-1.0), functions.compact_bump(0.5, 1.5)
        g = 2.0 * a - b
        x = np.linspace(-3.0, 3.0, 13)
        np.testing.assert_allclose(g(x), 2 * a(x) - b(x), atol=1e-15)
        np.testing.assert_allclose(g.d2(x), 2 * a.d2(x) - b.d2(x), atol=1e-15)
        self.assertEqual(g.decay_class, "gaussian")
        np.testing.assert_allclose(a.derivative()(x), a.d1(x), atol=1e-15)
        np.testing.assert_allclose(g.fourier(0.3), 2 * a.fourier(0.3) - b.fourier(0.3), atol=1e-12)

    def test_w2_norms(self):
        '''Test the smooth-Wasserstein dictionary respects the unit norms'''
        for h in functions.w2_dictionary():
            measured = h.measure_norms()
            self.assertLessEqual(max(h.sup_norms), 1 + 1e-9)
            for declared, found in zip(h.sup_norms, measured):
                self.assertLessEqual(found, declared + 1e-6)

    def test_fourier(self):
        '''Test closed-form transforms against numeric ones'''
        g = functions.cosine_bump(1.0, 0.3, 1.5)
        xi = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(g.fourier(xi), g.numeric_fourier()(xi), atol=1e-9)

    def test_from_samples(self):
        '''Test power-law continuation of sampled functions'''
        x = np.linspace(-10.0, 10.0, 201)
        g = functions.from_samples(x, 1 / (1 + x * x), tail_power=2)
        self.assertAlmostEqual(float(g(20.0)), (1 / 101) * (10 / 20) ** 2, delta=1e-12)
        self.assertEqual(g.decay_class, "polynomial")

class TestOperators(unittest.TestCase):
    '''Unittest for Stein operators'''

    def setUp(self):
        '''Set up e^{-x^2} as a test function'''
        self.g = functions.gaussian_bump(0.0, 1 / math.sqrt(2))

    def test_type_a(self):
        '''Test the type A operator against its closed form'''
        levy = compound_poisson_levy(lambda u: np.ones_like(u), (0.0, 1.0))
        value = apply_type_a(self.g, 0.0, levy).value
        self.assertAlmostEqual(value, -(1 - math.exp(-1)) / 2, delta=1e-8)
        with self.assertRaises(WrongType):
            apply_type_a(self.g, 0.0, stable_levy(StableParams(1.5)))

    def test_one_sided_half(self):
        '''Test the alpha=1/2 one-sided operator at 0'''
        params = StableParams(0.5, 0.0, 1.0, 0.0)
        derived = derive_params(params)
        value = apply_stable(self.g, 0.0, params, derived).value
        self.assertAlmostEqual(value, -derived.Gamma_alpha - math.gamma(0.25) / 2, delta=1e-7)

    def test_type_b_and_c_match_stable(self):
        '''Test the generic operators reproduce the stable one'''
        for params in (StableParams(0.5, 0.3, 1.0, 0.4), StableParams(1.5, -0.2, 0.5, 1.0)):
            derived = derive_params(params)
            levy = stable_levy(params)
            x = 0.7
            expected = apply_stable(self.g, x, params, derived).value
            if params.alpha < 1:
                beta = derived.Gamma_alpha + levy.small_moment()
                value = apply_type_b(self.g, x, levy, beta).value
            else:
                value = apply_type_c(self.g, x, levy, derived.Gamma_alpha).value
            self.assertAlmostEqual(value, expected, delta=1e-8)

    def test_tempered_limit(self):
        '''Test the tempered Cauchy operator converges to the alpha=1 operator'''
        params = StableParams(1.0)
        derived = derive_params(params)
        g = functions.gaussian_bump(0.5)
        for x in (-0.5, 0.3, 1.2):
            target = apply_stable(g, x, params, derived).value
            values = [apply_type_c(g, x, tempered_cauchy_levy(1.0, 1.0, gamma),
                                   derived.Gamma_alpha).value for gamma in (0.1, 0.01, 0.001)]
            self.assertLess(abs(values[2] - values[1]), abs(values[1] - values[0]))
            self.assertAlmostEqual(values[2], target, delta=0.01 * max(abs(target), 0.1))

    def test_branch_consistency(self):
        '''Test the operator is continuous across alpha=1'''
        g = functions.gaussian_bump(0.5)
        values = {a: apply_stable(g, 0.3, StableParams(a)).value
                  for a in (0.99, 0.995, 0.999, 1.001)}
        for value in values.values():
            self.assertTrue(math.isfinite(value))
        spacing = abs(values[0.995] - values[0.99])
        self.assertLessEqual(abs(values[1.001] - values[0.999]), 10 * spacing)

    def test_symmetric_matches_stable(self):
        '''Test the symmetric operator against the stable operator with m1=m2'''
        x = np.array([-1.2, 0.3, 2.0])
        for alpha in (0.5, 1.5):
            params = StableParams(alpha, 0.0, 0.8, 0.8)
            g = functions.gaussian_bump(0.5, 1.0)
            for v in x:
                self.assertAlmostEqual(apply_symmetric(g, v, alpha, 0.8).value,
                                       apply_stable(g, v, params).value, delta=1e-7)

    def test_symmetric_tanh(self):
        '''Test the symmetric operator on tanh at 0'''
        g = functions.scaled_tanh(1.0, amplitude=1.0)
        # int_0^inf tanh(u) u^-1.5 du, head with algebraic weight, tail against u^-1.5
        head = spi.quad(lambda u: math.tanh(u) / u if u else 1.0, 0.0, 1.0, weight="alg",
                        wvar=(-0.5, 0.0), epsabs=1e-13, epsrel=1e-12)[0]
        gap = spi.quad(lambda u: (1 - math.tanh(u)) * u ** -1.5, 1.0, np.inf,
                       epsabs=1e-13, epsrel=1e-12)[0]
        expected = -2 * (head + 2.0 - gap)
        self.assertAlmostEqual(apply_symmetric(g, 0.0, 1.5, 1.0).value, expected, delta=1e-6)

    def test_fixed_matches_adaptive(self):
        '''Test the vectorised path against pointwise adaptive quadrature'''
        x = np.linspace(-3.0, 3.0, 7)
        for params in (StableParams(0.5, 0.0, 1.0, 0.5), StableParams(1.5, 0.0, 2.0, 1.0)):
            op = stable_operator(params)
            for g in (functions.gaussian_bump(0.5), functions.compact_bump(0.5, 1.5)):
                fixed = apply_stable(g, x, params, method="fixed").value
                adaptive = apply_stable(g, x, params, method="adaptive").value
                np.testing.assert_allclose(fixed, adaptive, atol=1e-7)
                self.assertEqual(op(g, x).value.shape, x.shape)

    def test_gaussian(self):
        '''Test the Gaussian operator'''
        g = functions.gaussian_bump(0.5)
        value = apply_gaussian(g, 1.0, 0.2, 2.0).value
        self.assertAlmostEqual(value, 0.8 * float(g(1.0)) - 2.0 * float(g.d1(1.0)), delta=1e-14)
        with self.assertRaises(ValueError):
            apply_gaussian(g, 1.0, 0.0, 0.0)

    def test_tail_divergence(self):
        '''Test non-decaying functions are rejected for alpha < 1'''
        with self.assertRaises(TailDivergence):
            apply_stable(functions.scaled_tanh(1.0), 0.5, StableParams(0.5))

    def test_constant_function(self):
        '''Test the operator of a zero function vanishes'''
        zero = 0.0 * functions.gaussian_bump()
        np.testing.assert_array_equal(apply_stable(zero, np.zeros(3), StableParams(1.5)).value,
                                      np.zeros(3))

class TestIdentity(unittest.TestCase):
    '''Unittest for Monte Carlo checks of the characterising identity'''

    def pass_rate(self, op, target, g, seeds=5, n=20000):
        '''Fraction of seeds on which the identity passes at 3 standard errors'''
        results = [stein_identity_mc(op, target, g, n, RngStream(100, k)).passes(3.0)
                   for k in range(seeds)]
        return sum(results) / seeds

    def test_estimate(self):
        '''Test MCEstimate validation and z-score'''
        self.assertTrue(MCEstimate(0.1, 0.05, 100).passes())
        self.assertEqual(MCEstimate(0.0, 0.0, 10).z_score, 0.0)
        with self.assertRaises(ValueError):
            MCEstimate(0.0, 1.0, 1)

    def test_stable_identity(self):
        '''Test E[A g(X)] = 0 for symmetric and skewed stable laws'''
        g = functions.gaussian_bump(0.5)
        for params in (StableParams(0.5), StableParams(1.5, 0.0, 2.0, 1.0)):
            self.assertGreaterEqual(self.pass_rate(stable_operator(params), params, g), 0.8)

    def test_type_a_and_gaussian_identity(self):
        '''Test E[A g(X)] = 0 for compound-Poisson and Gaussian laws'''
        g = functions.gaussian_bump(0.5)
        levy = compound_poisson_levy(lambda u: np.full_like(u, 0.5), (-1.0, 2.0))
        triplet = IDDTriplet(levy.small_moment(), 0.0, levy)
        self.assertGreaterEqual(self.pass_rate(type_a_operator(levy), triplet, g), 0.8)
        normal = IDDTriplet(0.0, 1.0, zero_levy())
        self.assertGreaterEqual(self.pass_rate(gaussian_operator(0.0, 1.0), normal, g), 0.8)

    def test_wrong_target(self):
        '''Test normal samples fail the stable identity'''
        g = functions.gaussian_bump(1.0)
        op = stable_operator(StableParams(1.5))
        est = stein_identity_mc(op, lambda size, stream: normal_stream(stream, size), g, 20000,
                                RngStream(9))
        self.assertFalse(est.passes(3.0))

    def test_minimum_size(self):
        '''Test rejection of small Monte Carlo sizes'''
        with self.assertRaises(ValueError):
            stein_identity_mc(gaussian_operator(0.0, 1.0), IDDTriplet(0.0, 1.0, zero_levy()),
                              functions.gaussian_bump(), 999, RngStream(0))

if __name__ == "__main__":
    unittest.main()
