#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import unittest, tempfile, os, io, contextlib
import numpy as np
import pandas as pd
from stablestein.cli.config import load_config
from stablestein.cli.main import main
from stablestein.errors import ConfigError
from stablestein.stein import functions

class TestConfig(unittest.TestCase):
    '''Unittest for configuration files'''

    def setUp(self):
        '''Set up temporary directories'''
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        '''Clean up temporary files'''
        self.temp_dir.cleanup()

    def write(self, text):
        path = os.path.join(self.temp_dir.name, 'config.ini')
        with open(path, 'w') as fh:
            fh.write(text)
        return path

    def test_defaults(self):
        '''Test schema defaults and the comment header'''
        config = load_config()
        self.assertEqual(config.params.alpha, 1.5)
        self.assertEqual(config.get('bounds', 'split'), (4.0,))
        self.assertIsNone(config.get('constants', 'policy'))
        self.assertIn('# [bounds] split = 4', config.header_lines())

    def test_file_and_overrides(self):
        '''Test values from a file and from overrides'''
        path = self.write('[stable]\nalpha = 0.5  # index\n[bounds]\nn_values = 5, 50\n')
        config = load_config(path, {('mc', 'seed'): 3, ('output', 'plot'): 'no'})
        self.assertEqual(config.params.alpha, 0.5)
        self.assertEqual(config.get('bounds', 'n_values'), (5, 50))
        self.assertEqual(config.get('mc', 'seed'), 3)
        self.assertFalse(config.get('output', 'plot'))

    def test_rejects(self):
        '''Test unknown keys, unknown sections and invalid values'''
        for text in ('[stable]\nkappa = 1\n', '[plots]\ndpi = 300\n', '[stable]\nalpha = 2.5\n',
                     '[mc]\nn = many\n', '[solve]\nn_t = 7\n', '[constants]\npolicy = guess\n'):
            with self.assertRaises(ConfigError):
                load_config(self.write(text))
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.temp_dir.name, 'missing.ini'))

class TestCommands(unittest.TestCase):
    '''Unittest for the command line'''

    def setUp(self):
        '''Set up temporary directories'''
        self.temp_dir = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.temp_dir.name, 'out')

    def tearDown(self):
        '''Clean up temporary files'''
        self.temp_dir.cleanup()

    def run_cli(self, command, config_text, *flags):
        '''Run a command, returning the exit code and stderr'''
        path = os.path.join(self.temp_dir.name, 'config.ini')
        with open(path, 'w') as fh:
            fh.write(config_text)
        err = io.StringIO()
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(io.StringIO()):
            code = main([command, '--config', path, '--out', self.out, '--quiet', *flags])
        return code, err.getvalue()

    def read(self, name):
        return pd.read_csv(os.path.join(self.out, name), comment='#')

    def test_cf(self):
        '''Test the cf command agrees between both forms'''
        code, _ = self.run_cli('cf', '[stable]\nm1 = 2\n[grid]\nt_min = -2\nt_max = 2\nn_t = 9\n')
        self.assertEqual(code, 0)
        df = self.read('cf.csv')
        self.assertEqual(len(df), 9)
        self.assertLess(df['difference'].max(), 1e-6)
        self.assertTrue(os.path.isfile(os.path.join(self.out, 'plot_cf.py')))

    def test_sample_reproducible(self):
        '''Test reruns with the same seed are byte-identical'''
        text = '[mc]\nn = 1000\n'
        self.assertEqual(self.run_cli('sample', text, '--seed', '7')[0], 0)
        path = os.path.join(self.out, 'sample.csv')
        with open(path, 'rb') as fh:
            first = fh.read()
        self.assertEqual(self.run_cli('sample', text, '--seed', '7', '--overwrite')[0], 0)
        with open(path, 'rb') as fh:
            self.assertEqual(fh.read(), first)
        self.assertEqual(len(self.read('sample.csv')), 1000)
        self.run_cli('sample', text, '--seed', '8')
        with open(path, 'rb') as fh:
            self.assertEqual(fh.read(), first)

    def test_solve_out_of_scope(self):
        '''Test solve at alpha=1 exits with the scope code'''
        code, err = self.run_cli('solve', '[stable]\nalpha = 1.0\n')
        self.assertEqual(code, 4)
        self.assertIn('semigroup approach unavailable at alpha=1', err)

    def test_config_error_code(self):
        '''Test configuration errors exit with code 2'''
        code, err = self.run_cli('bound-sweep', '[bounds]\nsample_size = 200\n')
        self.assertEqual(code, 2)
        self.assertIn('[constants] policy', err)
        self.assertEqual(self.run_cli('cf', '[grid]\nn_points = two\n')[0], 2)

    def test_bound_sweep(self):
        '''Test the smooth-Wasserstein sweep for the two-point law'''
        text = ('[bounds]\nn_values = 10 100 1000\nsample_size = 2000\n'
                '[constants]\npolicy = truncation\n')
        self.assertEqual(self.run_cli('bound-sweep', text)[0], 0)
        df = self.read('bound_sweep.csv')
        self.assertEqual(list(df['n']), [10, 100, 1000])
        self.assertTrue(np.all(np.diff(df['kernel_mismatch']) <= 0))
        np.testing.assert_allclose(df['total'], df[['kernel_mismatch', 'levy_tail', 'z_tail',
                                                   'location', 'constant']].sum(axis=1))
        self.assertFalse(df['surrogate_flag'].any())

    def test_stein_check_mismatch(self):
        '''Test the mismatched-target run reports one row per test function'''
        text = '[mc]\nn = 1000\nmismatch = true\n'
        self.assertEqual(self.run_cli('stein-check', text)[0], 0)
        df = self.read('stein_check.csv')
        self.assertEqual(len(df), len(functions.standard_dictionary()))
        self.assertEqual(set(df['operator']), {'stable'})
        self.assertEqual(set(df['target']), {'gaussian'})

    def test_sd_check(self):
        '''Test the inverted cf ratios are probability densities'''
        text = '[sd]\netas = 0.5\nn_points = 2048\nhalf_width = 100\n'
        self.assertEqual(self.run_cli('sd-check', text)[0], 0)
        df = self.read('sd_check.csv')
        self.assertAlmostEqual(float(df['mass'][0]), 1.0, delta=1e-2)
        self.assertGreater(float(df['min_density'][0]), -1e-3)
        self.assertLess(float(df['form_difference'][0]), 1e-6)

if __name__ == "__main__":
    unittest.main()
