#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import unittest, itertools, math, warnings
import numpy as np
from scipy import integrate as spi
from stablestein.bounds.bounds import (BoundReport, ConstantsPolicy, bound_w2, bound_wdelta,
                                       calibrate_constants_w2, kernel_decomposition_check,
                                       levy_tail_moment, scaling_identity_check,
                                       sum_kernel_identity_mc, truncated_second_moment)
from stablestein.bounds.distances import delta_cost, empirical_w2h, empirical_wdelta
from stablestein.bounds.dna import DNASpec, pareto_dna, sample_dna, sample_dna_sum, stable_matched_dna
from stablestein.bounds.kernels import (DiscreteLaw, empirical_law, kernel_Ki, kernel_Knu,
                                        kernel_mismatch, two_point_law)
from stablestein.errors import SurrogateWarning
from stablestein.numerics.streams import RngStream, normal_stream
from stablestein.stable.params import StableParams
from stablestein.stein import functions

class TestKernels(unittest.TestCase):
    '''Unittest for the kernels of the smooth-Wasserstein bound'''

    def test_closed_form_value(self):
        '''Test K_nu(1, 2) = 2 - sqrt(2) for alpha=1.5, m1=1'''
        self.assertAlmostEqual(kernel_Knu(1.0, 2.0, StableParams(1.5)), 2 - math.sqrt(2),
                               delta=1e-10)

    def test_closed_form_against_quadrature(self):
        '''Test K_nu against its defining integral'''
        for alpha, t, N in itertools.product((1.2, 1.5, 1.8), (-1.5, -0.3, 0.1, 0.7, 1.9),
                                             (0.5, 1.0, 2.0, 3.0, 5.0)):
            params = StableParams(alpha, 0.0, 1.0, 0.4)
            m = 1.0 if t > 0 else 0.4
            if abs(t) <= N:
                expected = spi.quad(lambda u: m * u ** -alpha, abs(t), N, epsabs=1e-13,
                                    epsrel=1e-12)[0]
            else:
                expected = 0.0
            self.assertAlmostEqual(kernel_Knu(t, N, params), expected, delta=1e-8)
        self.assertTrue(math.isinf(kernel_Knu(0.0, 1.0, StableParams(1.5))))
        with self.assertRaises(ValueError):
            kernel_Knu(1.0, 2.0, StableParams(0.5))

    def test_two_point_kernel(self):
        '''Test K_i of the centred two-point law'''
        law = DiscreteLaw([-1.0, 1.0], [0.5, 0.5])
        self.assertAlmostEqual(kernel_Ki(0.5, 2.0, law), 0.5, delta=1e-15)
        self.assertAlmostEqual(kernel_Ki(-0.5, 2.0, law), 0.5, delta=1e-15)
        self.assertEqual(kernel_Ki(1.5, 2.0, law), 0.0)
        self.assertEqual(kernel_Ki(0.5, 0.8, law), 0.0)
        np.testing.assert_allclose(kernel_Ki(np.array([-0.5, 0.5]), 2.0, np.array([-1.0, 1.0])),
                                   [0.5, 0.5])

    def test_discrete_law(self):
        '''Test construction, tails and sampling of discrete laws'''
        law = DiscreteLaw([3.0, -1.0, 0.0], [0.2, 0.6, 0.2])
        np.testing.assert_array_equal(law.values, [-1.0, 0.0, 3.0])
        self.assertAlmostEqual(law.mean, 0.0, delta=1e-15)
        self.assertAlmostEqual(law.abs_tail(2.0), 0.6, delta=1e-15)
        np.testing.assert_array_equal(law.breakpoints(2.0), [-1.0])
        x = law.sample(50000, RngStream(1))
        self.assertAlmostEqual(float(np.mean(x == 3.0)), 0.2, delta=0.01)
        s = law.sample_sum(4, 20000, RngStream(2))
        self.assertAlmostEqual(float(np.mean(s)), 0.0, delta=5 * math.sqrt(4 * 2.4 / 20000))
        with self.assertRaises(ValueError):
            DiscreteLaw([0.0, 1.0], [0.5, 0.6])

    def test_mismatch_exact_against_quadrature(self):
        '''Test the piecewise closed-form mismatch against adaptive integration'''
        params = StableParams(1.5, 0.0, 1.0, 0.6)

        law = DiscreteLaw([-0.7, 0.2, 0.9], [0.3, 0.45, 0.25])
        exact = kernel_mismatch(params, law, 5, 2.0)
        N, total = 2.0, 0.0
        for sign in (1, -1):
            cuts = [0.0] + sorted(abs(v) for v in law.values if sign * v > 0) + [N]
            for a, b in zip(cuts[:-1], cuts[1:]):
                f = lambda s: abs(kernel_Knu(sign * s, N, params) / 5 - law.kernel(sign * s, N))
                total += spi.quad(f, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)[0]
        self.assertAlmostEqual(exact, 0.5 * 5 * total, delta=1e-7)

    def test_two_point_mismatch_decreases(self):
        '''Test the kernel mismatch of the two-point fixture decreases in n'''
        params = StableParams(1.5)
        values = [kernel_mismatch(params, two_point_law(n, 1.5), n, 4.0) for n in (10, 100, 1000)]
        self.assertTrue(values[0] > values[1] > values[2] > 0)
        law = two_point_law(8, 1.5, scale=2.0)
        self.assertAlmostEqual(float(law.values[1]), 2.0 / 8 ** (1 / 1.5), delta=1e-14)

class TestDistances(unittest.TestCase):
    '''Unittest for empirical transport distances'''

    def test_single_pair(self):
        '''Test the cost of one pair of atoms'''
        self.assertAlmostEqual(empirical_wdelta([0.0], [3.0], 0.5).value, math.sqrt(3),
                               delta=1e-15)
        self.assertAlmostEqual(float(delta_cost(0.25, 0.5)), 0.25)

    def test_exact_against_permutations(self):
        '''Test the assignment solver against exhaustive search at n=8'''
        rng = np.random.default_rng(3)
        x, y = rng.standard_cauchy(8), rng.standard_cauchy(8) + 0.5
        cost = delta_cost(x[:, None] - y[None, :], 0.4)
        brute = min(cost[np.arange(8), list(p)].mean() for p in itertools.permutations(range(8)))
        est = empirical_wdelta(x, y, 0.4)
        self.assertAlmostEqual(est.value, brute, delta=1e-12)
        self.assertFalse(est.surrogate)

    def test_surrogate(self):
        '''Test the monotone coupling above the exact limit'''
        x = normal_stream(RngStream(1), 50)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            est = empirical_wdelta(x, x + 0.1, 0.5, exact_limit=10)
        self.assertTrue(est.surrogate)
        self.assertTrue(any(issubclass(w.category, SurrogateWarning) for w in caught))
        self.assertAlmostEqual(est.value, 0.1, delta=1e-12)

    def test_w2h_increases_with_shift(self):
        '''Test the dictionary distance grows with a location shift'''
        x = normal_stream(RngStream(4), 20000)
        y = normal_stream(RngStream(5), 20000)
        d = [empirical_w2h(x, y + shift) for shift in (0.25, 0.5, 1.0)]
        self.assertTrue(0 < d[0] < d[1] < d[2])
        with self.assertRaises(ValueError):
            empirical_w2h(x, y, [functions.gaussian_bump(0.0, 0.5)])

class TestDNA(unittest.TestCase):
    '''Unittest for laws in the domain of normal attraction'''

    def test_pareto_tails(self):
        '''Test P(|Y| > 4) = 1/2 for Pareto tails with A=1/2, alpha=1/2'''
        spec = pareto_dna(0.5, A=0.5)
        self.assertAlmostEqual(float(spec.tail(4.0, 1) + spec.tail(4.0, -1)), 0.5, delta=1e-15)
        y = sample_dna(spec, 100000, RngStream(6))
        se = math.sqrt(0.25 / y.size)
        self.assertAlmostEqual(float(np.mean(np.abs(y) > 4)), 0.5, delta=4 * se)

    def test_cdf(self):
        '''Test the CDF is monotone and matches samples'''
        e_fn = lambda y: 0.1 * np.exp(-np.asarray(y, dtype=float) ** 2)
        e_d1 = lambda y: -0.2 * np.asarray(y, dtype=float) * e_fn(y)
        spec = DNASpec(0.6, 0.3, 0.2, e_fn, e_d1)
        grid = np.linspace(-20.0, 20.0, 2001)
        F = spec.cdf(grid)
        self.assertTrue(np.all(np.diff(F) >= 0))
        y = sample_dna(spec, 50000, RngStream(7))
        for q in (-5.0, 0.0, 3.0):
            self.assertAlmostEqual(float(np.mean(y <= q)), spec.cdf(q), delta=0.01)
        self.assertAlmostEqual(spec.K, 0.1 * math.exp(-1.0), delta=1e-12)

    def test_validation(self):
        '''Test invalid DNA laws are rejected'''
        with self.assertRaises(ValueError):
            DNASpec(1.5, 0.5)
        with self.assertRaises(ValueError):
            DNASpec(0.5, 2.0)
        with self.assertRaises(ValueError):
            DNASpec(0.5, 0.3, e_fn=lambda y: np.zeros_like(y))

    def test_matched(self):
        '''Test the stable-matched law has the Lévy tail constants'''
        params = StableParams(0.7, 0.0, 1.0, 0.5)
        spec = stable_matched_dna(params)
        self.assertAlmostEqual(spec.A * (1 + spec.theta) * 0.7, 1.0, delta=1e-12)
        self.assertAlmostEqual(spec.A * (1 - spec.theta) * 0.7, 0.5, delta=1e-12)
        self.assertLessEqual(spec.right_mass + spec.left_mass, 1.0)
        t = sample_dna_sum(spec, 7, 1000, RngStream(8))
        self.assertEqual(t.shape, (1000,))

class TestBounds(unittest.TestCase):
    '''Unittest for the approximation bounds'''

    def test_levy_moments(self):
        '''Test the closed-form Lévy moments'''
        params = StableParams(1.5)
        self.assertAlmostEqual(levy_tail_moment(params, 4.0), 2.0, delta=1e-12)
        self.assertAlmostEqual(truncated_second_moment(params, 1.0), 4.0, delta=1e-12)
        consts = ConstantsPolicy.from_truncation(params)
        self.assertAlmostEqual(consts.C_1_nu, 2.0, delta=1e-12)
        self.assertEqual(consts.C_2_nu, consts.C_1_nu)

    def test_policy_and_report_validation(self):
        '''Test constants and reports reject inconsistent input'''
        with self.assertRaises(ValueError):
            ConstantsPolicy(C_2_nu=math.inf)
        with self.assertRaises(ValueError):
            BoundReport("w2", {"a": 1.0, "b": 2.0}, total=4.0)
        self.assertEqual(BoundReport("w2", {"a": 1.0, "b": 2.0}).total, 3.0)

    def test_wdelta_power_laws(self):
        '''Test the n-scaling of the Wasserstein-delta terms with e = 0'''
        params = StableParams(0.75)
        spec = pareto_dna(0.75)
        consts = ConstantsPolicy.from_truncation(params, dna=spec)
        small = bound_wdelta(10, spec, params, 1.0, consts)
        large = bound_wdelta(80, spec, params, 1.0, consts)
        self.assertAlmostEqual(small.terms["constant"] / large.terms["constant"], 8.0, delta=1e-12)
        self.assertAlmostEqual(small.terms["levy"] / large.terms["levy"], 2.0, delta=1e-12)
        for key in ("e_near", "e_far", "gamma"):
            self.assertAlmostEqual(small.terms[key], 0.0, delta=1e-10)
        record = small.to_record(0.1, True)
        self.assertEqual(record["M_or_N"], 1.0)
        self.assertTrue(record["surrogate_flag"])
        with self.assertRaises(ValueError):
            bound_wdelta(10, spec, StableParams(1.5), 1.0, consts)

    def test_wdelta_perturbation(self):
        '''Test the e-integral terms against independent quadrature'''
        alpha = 0.5
        e_fn = lambda y: 0.1 * np.exp(-np.asarray(y, dtype=float) ** 2)
        e_d1 = lambda y: -0.2 * np.asarray(y, dtype=float) * e_fn(y)
        spec = DNASpec(alpha, 0.3, 0.0, e_fn, e_d1)
        report = bound_wdelta(4, spec, StableParams(alpha), 1.0, ConstantsPolicy())
        g = lambda y: float(abs(y) ** (1 - alpha) * e_d1(y) + alpha * abs(y) ** -alpha * e_fn(y))
        quad = lambda a, b: spi.quad(g, a, b, epsabs=1e-12, epsrel=1e-10)[0]
        near = quad(-1.0, 0.0) + quad(0.0, 1.0)
        far = quad(-np.inf, -1.0) + quad(1.0, np.inf)
        decay = 4 ** (1 - 1 / alpha)
        self.assertAlmostEqual(report.terms["e_near"], 3 * decay * near, delta=1e-8)
        self.assertAlmostEqual(report.terms["e_far"], decay * far, delta=1e-8)

    def test_w2_terms(self):
        '''Test the smooth-Wasserstein bound terms for the two-point fixture'''
        params = StableParams(1.5)
        consts = ConstantsPolicy(C_2_nu=math.sqrt(2))
        totals = []
        for n in (10, 100, 1000):
            law = two_point_law(n, 1.5)
            report = bound_w2(n, law, params, 4.0, consts)
            self.assertAlmostEqual(report.terms["levy_tail"], 4.0, delta=1e-12)
            self.assertEqual(report.terms["z_tail"], 0.0)
            self.assertAlmostEqual(report.terms["constant"], 1.0, delta=1e-15)
            self.assertAlmostEqual(report.terms["location"], 4.0, delta=1e-10)
            totals.append(report.terms["kernel_mismatch"])
        self.assertTrue(totals[0] >= totals[1] >= totals[2])
        with self.assertRaises(ValueError):
            bound_w2(10, DiscreteLaw([0.0, 1.0], [0.5, 0.5]), params, 4.0, consts)
        sampled = bound_w2(10, lambda size, rng: two_point_law(10, 1.5).sample(size, rng), params,
                           4.0, consts, rng=RngStream(1), n_mc=1000)
        self.assertGreater(sampled.total, 0.0)

    def test_calibration(self):
        '''Test calibrated constants make the bound dominate the measured distance'''
        params = StableParams(1.5)
        law_for = lambda n: two_point_law(n, 1.5)
        consts = calibrate_constants_w2(law_for, params, (5, 10), 4.0, 2000, RngStream(3))
        self.assertEqual(consts.source, "calibrated")
        self.assertGreater(consts.C_2_nu, 0.0)

    def test_scaling_identity(self):
        '''Test the change-of-scale identity for alpha < 1'''
        f = functions.gaussian_bump()
        self.assertLess(scaling_identity_check(f, 0.0, 0.5, StableParams(0.5)), 1e-6)
        self.assertLess(scaling_identity_check(f, 0.4, 0.3, StableParams(0.5, 0.0, 1.0, 0.5)), 1e-6)

    def test_kernel_decomposition(self):
        '''Test the kernel form of the compensated Lévy integral'''
        f = functions.gaussian_bump()
        self.assertLess(kernel_decomposition_check(f, 0.3, 2.0, StableParams(1.5)), 1e-5)

    def test_sum_kernel_identity(self):
        '''Test the kernel identity for sums of two-point variables'''
        f = functions.gaussian_bump(0.3)
        law = DiscreteLaw([-1.0, 1.0], [0.5, 0.5])
        for N in (2.0, 0.5):
            check = sum_kernel_identity_mc(f, law, 4, N, 20000, RngStream(12))
            self.assertTrue(check.agree)
        with self.assertRaises(TypeError):
            sum_kernel_identity_mc(f, np.array([-1.0, 1.0]), 4, 2.0, 100, RngStream(1))
        self.assertEqual(empirical_law([2.0, -2.0]).mean, 0.0)

if __name__ == "__main__":
    unittest.main()
