import math

import mpmath
import numpy as np
from django.test import SimpleTestCase

from psibounds.exceptions import DomainError
from psibounds.field import make_profile, rational_field
from psibounds.specfun import (
    R, R_signature, SeriesPolicy, f1, f2, lambert_w0, lambert_w0_array, lambert_w0_from_log,
    lambert_w_asymptotic, lambert_w_upper,
)

SIGNATURES = [(1, 0), (0, 1), (2, 0), (0, 2), (3, 1)]
SAMPLE_X = [3.0, 10.0, 100.0, 1e4]


class LambertWTests(SimpleTestCase):

    def test_known_values(self):
        self.assertEqual(lambert_w0(0), 0.0)
        self.assertAlmostEqual(lambert_w0(math.e), 1.0, places=14)
        self.assertAlmostEqual(lambert_w0(10), 1.7455280027406994, places=13)

    def test_residual_on_wide_grid(self):
        for x in np.geomspace(1e-12, 1e300, 400):
            w = lambert_w0(x)
            self.assertLessEqual(abs(w * math.exp(w) - x), 1e-14 * (1 + w) ** 2 * x, msg=f'x = {x:g}')

    def test_agrees_with_mpmath(self):
        for x in [1e-6, 0.3, 1.0, 7.5, 1e3, 1e10, 1e100]:
            expected = float(mpmath.lambertw(x).real)
            self.assertAlmostEqual(lambert_w0(x), expected, delta=1e-14 * max(1.0, expected))

    def test_from_log_beyond_double_range(self):
        w = lambert_w0_from_log(800.0)
        self.assertAlmostEqual(w + math.log(w), 800.0, places=11)
        self.assertAlmostEqual(lambert_w0_from_log(math.log(1e10)), lambert_w0(1e10), places=12)

    def test_array_matches_scalar(self):
        xs = np.concatenate([[0.0], np.geomspace(1e-3, 1e200, 300)])
        values = lambert_w0_array(xs)
        for x, w in zip(xs, values):
            self.assertAlmostEqual(w, lambert_w0(x), delta=1e-13 * max(1.0, w))

    def test_rejects_bad_arguments(self):
        for bad in (-1.0, math.inf, math.nan):
            with self.assertRaises(DomainError):
                lambert_w0(bad)
        with self.assertRaises(DomainError):
            lambert_w0_array([1.0, -0.5])

    def test_upper_bound(self):
        self.assertEqual(lambert_w_upper(math.e), 1.0)
        t = math.exp(math.e)
        self.assertAlmostEqual(lambert_w_upper(t), math.e - 1 + 1.024 / math.e, places=12)
        for t in np.geomspace(math.e, 1e20, 500):
            self.assertGreaterEqual(lambert_w_upper(t) - lambert_w0(t), -1e-12, msg=f't = {t:g}')
        self.assertGreaterEqual(lambert_w_upper(100), lambert_w0(100))
        with self.assertRaises(DomainError):
            lambert_w_upper(2.0)

    def test_asymptotic_form_approaches_w(self):
        self.assertLess(abs(lambert_w_asymptotic(1e50) - lambert_w0(1e50)) / lambert_w0(1e50), 1e-3)
        with self.assertRaises(DomainError):
            lambert_w_asymptotic(math.e)


class SeriesTests(SimpleTestCase):

    def test_f1_against_mpmath(self):
        for x in SAMPLE_X:
            with mpmath.workdps(30):
                expected = mpmath.nsum(lambda r: mpmath.mpf(x) ** (1 - 2 * r) / (2 * r * (2 * r - 1)), [1, mpmath.inf])
            self.assertAlmostEqual(f1(x), float(expected), delta=1e-15 * max(1.0, float(expected)))

    def test_f2_against_mpmath(self):
        for x in SAMPLE_X:
            with mpmath.workdps(30):
                expected = mpmath.nsum(lambda r: mpmath.mpf(x) ** (2 - 2 * r) / ((2 * r - 1) * (2 * r - 2)), [2, mpmath.inf])
            self.assertAlmostEqual(f2(x), float(expected), delta=1e-15 * max(1.0, float(expected)))

    def test_f1_closed_form(self):
        x = 3.0
        closed = math.atanh(1 / x) + x / 2 * math.log(1 - x ** -2)
        self.assertAlmostEqual(f1(x), closed, places=14)

    def test_f1_vanishes_at_infinity(self):
        self.assertLess(f1(1e8), 1e-7)

    def test_domain(self):
        with self.assertRaises(DomainError):
            f1(1.0)
        with self.assertRaises(DomainError):
            f2(0.5)

    def test_series_policy_validation(self):
        with self.assertRaises(DomainError):
            SeriesPolicy(rel_tol=0)
        with self.assertRaises(DomainError):
            SeriesPolicy(max_terms=5)

    def test_truncated_series_logs(self):
        with self.assertLogs('psibounds.specfun', level='WARNING'):
            f1(1.0001, SeriesPolicy(rel_tol=1e-16, max_terms=10))


class RTests(SimpleTestCase):

    def test_rational_field(self):
        for x in SAMPLE_X:
            self.assertAlmostEqual(R(rational_field(), x), -f1(x), places=15)

    def test_imaginary_quadratic_at_three(self):
        profile = make_profile(2, 3, 0, 1)
        self.assertAlmostEqual(R(profile, 3), math.log(3) + 1 - f1(3) - f2(3), places=14)

    def test_real_quadratic_at_e(self):
        self.assertAlmostEqual(R_signature(2, 0, math.e), -2 * f1(math.e), places=13)

    def test_rejects_small_x(self):
        with self.assertRaises(DomainError):
            R(rational_field(), 2.5)

    def test_derivative_bounds(self):
        for r1, r2 in SIGNATURES:
            for x in SAMPLE_X:
                h = 1e-5 * x
                slope = (R_signature(r1, r2, x + h) - R_signature(r1, r2, x - h)) / (2 * h)
                lower = -(r1 + r2 - 1) * math.log(x)
                if (r1, r2) == (1, 0):
                    upper = -math.log(1 - x ** -2)
                elif (r1, r2) == (0, 1):
                    upper = -math.log(1 - 1 / x)
                else:
                    upper = 0.0
                tolerance = 1e-6 * max(abs(slope), abs(lower), abs(upper)) + 1e-12
                label = f'(r1, r2) = ({r1}, {r2}), x = {x:g}'
                self.assertGreaterEqual(slope, lower - tolerance, msg=label)
                self.assertLessEqual(slope, upper + tolerance, msg=label)
