import math
import re

import numpy as np
from django.test import SimpleTestCase

from psibounds.exceptions import ConvergenceError, DomainError, LimitExceeded
from psibounds.utils import KahanSum, compensated_cumsum, hybrid_root, require


class CompensatedSumTests(SimpleTestCase):

    def test_cancellation(self):
        total = KahanSum()
        for value in (1.0, 1e100, 1.0, -1e100):
            total += value
        self.assertEqual(total.value, 2.0)

    def test_cumsum_tracks_fsum(self):
        values = np.log(np.arange(2, 200_002, dtype=float))
        out = compensated_cumsum(values, block=1000)
        self.assertEqual(out.shape, values.shape)
        for end in (1, 999, 1000, 1001, 123_457, values.size):
            self.assertLessEqual(abs(out[end - 1] - math.fsum(values[:end])), 1e-12 * out[end - 1])

    def test_empty(self):
        self.assertEqual(compensated_cumsum(np.array([])).size, 0)


class HybridRootTests(SimpleTestCase):

    def test_square_root(self):
        result = hybrid_root(lambda x: x * x - 2, lambda x: 2 * x, 0.0, 2.0, 1e-14)
        self.assertAlmostEqual(result.root, math.sqrt(2), places=14)
        self.assertLessEqual(result.residual, 1e-14)
        self.assertGreater(result.iterations, 0)

    def test_flat_derivative_falls_back_to_bisection(self):
        result = hybrid_root(lambda x: x ** 3, lambda x: 0.0, -1.0, 2.0, 1e-12)
        self.assertLessEqual(abs(result.root), 1e-4)

    def test_no_bracket(self):
        with self.assertRaises(ConvergenceError):
            hybrid_root(lambda x: x - 5, lambda x: 1.0, 0.0, 1.0, 1e-12)
        with self.assertRaisesMessage(ConvergenceError, 'T_0'):
            hybrid_root(lambda x: 1 - x, lambda x: -1.0, 0.0, 2.0, 1e-12, label='T_0')

    def test_collapsed_bracket_reports_iterations_taken(self):
        # a jump at 1/3 is bracketed but has no point with |f| below tolerance
        def step(x):
            return 1.0 if x >= 1 / 3 else -1.0

        with self.assertLogs('psibounds.utils', level='ERROR') as logs:
            with self.assertRaises(ConvergenceError) as ctx:
                hybrid_root(step, lambda x: 0.0, 0.0, 1.0, 1e-12, max_iter=200, label='jump')
        taken = int(re.search(r'after (\d+) iterations', str(ctx.exception)).group(1))
        self.assertGreater(taken, 40)
        self.assertLess(taken, 200)
        self.assertIn(f'after {taken} iterations', logs.output[0])


class RequireTests(SimpleTestCase):

    def test_scalars_and_arrays(self):
        require(3 > 2, 'unused')
        require(np.array([1.0, 2.0]) > 0, 'unused')
        with self.assertRaisesMessage(DomainError, 'x must be positive'):
            require(np.array([1.0, -1.0]) > 0, 'x must be positive')
        with self.assertRaises(LimitExceeded):
            require(False, 'too large', exc=LimitExceeded)
