#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import unittest, math
import numpy as np
from stablestein.errors import AliasWarning, NonIntegrable
from stablestein.numerics.fourier import GridSpec, TailSpec, density_to_cf, fourier_invert
from stablestein.numerics.quadrature import (QuadratureSpec, graded_rule, integrate,
                                             integrate_oscillatory, jacobi_rule, panel_rule)
from stablestein.numerics.streams import (RngStream, merge_moments, normal_stream,
                                          parallel_moments, uniform_stream)

class TestQuadrature(unittest.TestCase):
    '''Unittest for adaptive and fixed-rule quadrature'''

    def test_singular_endpoint(self):
        '''Test u^-1/2 e^-u on (0, inf) against Gamma(1/2)'''
        spec = QuadratureSpec().singular(0.5)
        value = integrate(lambda u: u ** -0.5 * np.exp(-u), 0.0, math.inf, spec)
        self.assertAlmostEqual(value, math.sqrt(math.pi), delta=1e-8)

    def test_reversed_and_doubly_infinite(self):
        '''Test limit handling of the Gaussian integral'''
        f = lambda u: np.exp(-u * u)
        self.assertAlmostEqual(integrate(f, -math.inf, math.inf), math.sqrt(math.pi), delta=1e-8)
        self.assertAlmostEqual(integrate(f, 1.0, 0.0), -integrate(f, 0.0, 1.0), delta=1e-12)
        self.assertEqual(integrate(f, 2.0, 2.0), 0.0)

    def test_non_integrable(self):
        '''Test rejection of exponents s >= 1'''
        with self.assertRaises(NonIntegrable):
            QuadratureSpec(singularity_exponent=1.0)
        with self.assertRaises(NonIntegrable):
            jacobi_rule(8, -1.0)

    def test_oscillatory(self):
        '''Test the Fourier-weight path against int e^-u cos(2u) du = 1/5'''
        value = integrate_oscillatory(lambda u: np.exp(-u), 0.0, 2.0, "cos")
        self.assertAlmostEqual(value, 0.2, delta=1e-9)
        self.assertEqual(integrate_oscillatory(lambda u: np.exp(-u), 0.0, 0.0, "sin"), 0.0)

    def test_exponent_near_one(self):
        '''Test endpoint exponents close to 1 on both sides of the endpoint'''
        for s in (0.99, 0.995, 0.999):
            spec = QuadratureSpec().singular(s)
            value = integrate(lambda u: u ** -s, 0.0, 1.0, spec)
            self.assertAlmostEqual(value / (1 / (1 - s)), 1.0, delta=1e-7)
        spec = QuadratureSpec().singular(0.5)
        self.assertAlmostEqual(integrate(lambda u: abs(u) ** -0.5, 0.0, -4.0, spec), -4.0,
                               delta=1e-9)

    def test_linearity(self):
        '''Test integrate is linear in the integrand'''
        spec = QuadratureSpec().singular(0.5)
        f = lambda u: u ** -0.5 * np.exp(-u)
        g = lambda u: u ** -0.5 / (1 + u * u)
        combined = integrate(lambda u: 2 * f(u) - 3 * g(u), 0.0, math.inf, spec)
        separate = 2 * integrate(f, 0.0, math.inf, spec) - 3 * integrate(g, 0.0, math.inf, spec)
        self.assertAlmostEqual(combined, separate, delta=2 * spec.tolerance(separate))

    def test_oscillatory_relative_tolerance(self):
        '''Test the Fourier-weight path honours a tight relative tolerance'''
        spec = QuadratureSpec(abs_tol=1e-3, rel_tol=1e-13)
        value = integrate_oscillatory(lambda u: np.exp(-u), 0.0, 2.0, "cos", spec, b=10.0)
        decay = math.exp(-10.0)
        expected = (1 - decay * math.cos(20.0) + 2 * decay * math.sin(20.0)) / 5
        self.assertAlmostEqual(value, expected, delta=1e-11)

    def test_fixed_rules(self):
        '''Test Gauss-Jacobi, panel and graded rules'''
        v, w = jacobi_rule(16, -0.5)
        self.assertAlmostEqual(float(np.sum(w * v ** 2)), 1 / 2.5, delta=1e-13)
        nodes, weights = panel_rule(np.array([0.0, 0.0]), np.array([math.pi, 0.5 * math.pi]), 4)
        self.assertEqual(nodes.shape, (2, 64))
        np.testing.assert_allclose(np.sum(np.sin(nodes) * weights, axis=-1), [2.0, 1.0], atol=1e-12)
        nodes, weights = graded_rule(1.0)
        self.assertAlmostEqual(float(np.sum(nodes ** -0.5 * weights)), 2.0, delta=1e-8)

class TestFourier(unittest.TestCase):
    '''Unittest for density recovery by FFT'''

    def test_normal_density(self):
        '''Test inversion of the standard normal cf'''
        grid = GridSpec(-10.0, 10.0, 257)
        p = fourier_invert(lambda t: np.exp(-0.5 * t * t), grid)
        x = grid.points
        np.testing.assert_allclose(p, np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi), atol=1e-12)
        cf = density_to_cf(p, grid, [0.0, 1.0])
        np.testing.assert_allclose(cf, [1.0, math.exp(-0.5)], atol=1e-10)

    def test_cauchy_density(self):
        '''Test inversion of e^-|t| against the Cauchy density'''
        grid = GridSpec(-200.0, 200.0, 16385)
        tails = TailSpec(1.0, 1 / math.pi, 1 / math.pi)
        p = fourier_invert(lambda t: np.exp(-np.abs(t)), grid, tails=tails)
        x = grid.points
        centre = int(np.argmin(np.abs(x)))
        self.assertAlmostEqual(p[centre], 1 / math.pi, delta=1e-6)
        np.testing.assert_allclose(p, 1 / (math.pi * (1 + x * x)), atol=1e-6)

    def test_alias_warning(self):
        '''Test under-resolved and truncated grids are flagged'''
        cauchy = lambda t: np.exp(-np.abs(t))
        with self.assertWarns(AliasWarning):
            fourier_invert(cauchy, GridSpec(-2.0, 2.0, 64))
        with self.assertWarns(AliasWarning):
            fourier_invert(cauchy, GridSpec(-50.0, 50.0, 64))

    def test_grid(self):
        '''Test grid validation and core mask'''
        with self.assertRaises(ValueError):
            GridSpec(1.0, -1.0, 16)
        with self.assertRaises(ValueError):
            GridSpec(-1.0, 1.0, 4)
        grid = GridSpec.centred(0.0, 10.0, 21)
        self.assertAlmostEqual(grid.step, 1.0)
        self.assertEqual(int(np.sum(grid.core(0.8))), 17)

class TestStreams(unittest.TestCase):
    '''Unittest for reproducible random streams'''

    def test_reproducible(self):
        '''Test identical streams give identical draws'''
        rng = RngStream(7)
        np.testing.assert_array_equal(uniform_stream(rng, 10), uniform_stream(RngStream(7), 10))
        self.assertFalse(np.array_equal(uniform_stream(rng.child(0), 10),
                                        uniform_stream(rng.child(1), 10)))
        with self.assertRaises(ValueError):
            RngStream(-1)

    def test_uniform_mean(self):
        '''Test sample mean of 1e5 uniforms'''
        x = uniform_stream(RngStream(12), 100000)
        self.assertTrue(np.all((x >= 0) & (x < 1)))
        self.assertAlmostEqual(float(np.mean(x)), 0.5, delta=4 / math.sqrt(12 * 100000))

    def test_worker_and_child_disjoint(self):
        '''Test worker streams never coincide with child streams'''
        for rng in (RngStream(9), RngStream(9, 3, (1, 2))):
            for i in range(3):
                self.assertNotEqual(rng.worker(i), rng.child(i))
                self.assertFalse(np.array_equal(uniform_stream(rng.worker(i), 10),
                                                uniform_stream(rng.child(i), 10)))
        with self.assertRaises(ValueError):
            RngStream(9).child(-1)

    def test_normal_variance(self):
        '''Test sample variance of 1e5 normals'''
        x = normal_stream(RngStream(1), 100000)
        self.assertAlmostEqual(float(np.var(x, ddof=1)), 1.0, delta=0.02)

    def test_parallel_moments(self):
        '''Test streamed moments are deterministic and merge exactly'''
        draw = lambda size, stream: normal_stream(stream, size)
        first = parallel_moments(draw, 50000, RngStream(3), workers=3, chunk=7000)
        second = parallel_moments(draw, 50000, RngStream(3), workers=3, chunk=7000)
        self.assertEqual(first, second)
        self.assertEqual(first[0], 50000)
        self.assertAlmostEqual(first[1], 0.0, delta=5 * math.sqrt(1 / 50000))

        x = normal_stream(RngStream(4), 1000)
        parts = [(a.size, float(a.mean()), float(np.sum((a - a.mean()) ** 2)))
                 for a in np.split(x, [100, 350, 900])]
        count, mean, m2 = merge_moments(parts)
        self.assertEqual(count, 1000)
        self.assertAlmostEqual(mean, float(x.mean()), delta=1e-12)
        self.assertAlmostEqual(m2, float(np.sum((x - x.mean()) ** 2)), delta=1e-9)

if __name__ == "__main__":
    unittest.main()
