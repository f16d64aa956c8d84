import math

import numpy as np
from django.test import SimpleTestCase

from psibounds.constants import C
from psibounds.exceptions import DomainError
from psibounds.field import from_scientific, make_profile, rational_field
from psibounds.specfun import lambert_w0
from psibounds.tselect import (
    E, cmax_row, cmax_scan, cmax_scan_aggregate, dE_dT, lemma_3_1_R, partial_w_L,
    next_scan_point, root_gap_diagnostics, select_T, select_T_array, solve_T0, solve_Tmin, t_f,
)

PROFILES = [
    rational_field(),
    make_profile(2, 3, 0, 1),
    make_profile(2, 5, 2, 0),
    make_profile(3, 23, 1, 1),
    make_profile(6, 9747, 0, 3),
    from_scientific(200, 8.0911, 374, 200, 0),
]


class TFTests(SimpleTestCase):

    def test_printed_value(self):
        self.assertAlmostEqual(t_f(), C.tf_printed, delta=1e-5)
        self.assertGreater(t_f(), 5)

    def test_quadratic_residual(self):
        T = t_f()
        self.assertLessEqual(abs(T ** 2 - 7.0604 * T - 10.1186), 1e-10)


class SelectTTests(SimpleTestCase):

    def test_closed_form_identity(self):
        for profile in PROFILES:
            for x in (3.0, 1e4, 1e12):
                selection = select_T(profile, x)
                self.assertLessEqual(selection.residuals['T_W'], 1e-9, msg=f'{profile.label}, x={x}')
                self.assertEqual(selection.T_W, selection.a / selection.w)
                self.assertGreaterEqual(selection.T, 8.2822)
                self.assertGreaterEqual(selection.T, selection.T_F)

    def test_rational_field_at_one_million(self):
        selection = select_T(rational_field(), 1e6)
        a = (math.sqrt(5) - 1) * math.pi * 500 + 21.3270 + 33.3542
        self.assertAlmostEqual(selection.a, a, places=9)
        w = lambert_w0(math.exp(math.sqrt(5)) * a / (2 * math.pi))
        self.assertAlmostEqual(selection.T, 8.2822 + a / w, places=9)

    def test_array_matches_scalar(self):
        xs = np.array([3.0, 17.0, 1e3, 1e6, 1e10])
        for profile in PROFILES:
            a, w, T = select_T_array(profile, xs)
            for x, value in zip(xs, T):
                self.assertAlmostEqual(value, select_T(profile, x).T, delta=1e-10 * value)

    def test_monotone_in_x_and_discriminant(self):
        q = rational_field()
        Ts = [select_T(q, x).T for x in (3, 100, 1e4, 1e8)]
        self.assertEqual(Ts, sorted(Ts))
        small = select_T(make_profile(2, 5, 2, 0), 1e6).T
        large = select_T(make_profile(2, 500, 2, 0), 1e6).T
        self.assertLess(large, small)

    def test_rejects_small_x(self):
        with self.assertRaises(DomainError):
            select_T(rational_field(), 2)
        with self.assertRaises(DomainError):
            select_T_array(rational_field(), [3, 2.5])


class ImplicitRootTests(SimpleTestCase):

    def test_T0_below_closed_form(self):
        for profile in PROFILES[:5]:
            for x in (3.0, 1e3, 1e6, 1e10):
                selection = select_T(profile, x, implicit=True)
                self.assertLess(selection.T_F, selection.T_0)
                self.assertLessEqual(selection.T_0, selection.T_F + selection.T_W)
                self.assertLess(selection.T_min, selection.T_0)
                self.assertLessEqual(selection.residuals['T_0'], 1e-9)
                self.assertLessEqual(selection.residuals['T_min'], 1e-9)

    def test_T0_residual(self):
        q, x = rational_field(), 1e6
        T = solve_T0(q, x)
        s = math.log(T / (2 * math.pi)) + math.sqrt(5)
        lhs = (T - 7.0604 - 10.1186 / T) * s
        rhs = (math.sqrt(5) - 1) * math.pi * 1000 / 2 + 21.3270 + 33.5251
        self.assertLessEqual(abs(lhs - rhs), 1e-9 * rhs)

    def test_gap_between_roots(self):
        diagnostics = root_gap_diagnostics(rational_field(), 1e10)
        ratio = diagnostics['gap'] / diagnostics['predicted_gap']
        self.assertGreater(ratio, 1 / 1.5)
        self.assertLess(ratio, 1.5)
        self.assertLessEqual(diagnostics['E_at_T_min'], diagnostics['E_at_T_0'])

    def test_T_min_is_stationary(self):
        for profile in PROFILES[:5]:
            for x in (10.0, 1e6):
                T = solve_Tmin(profile, x)
                self.assertLessEqual(abs(dE_dT(profile, x, T)), 1e-6 * abs(E(profile, x, T)) / T)


class ObjectiveTests(SimpleTestCase):

    def test_grows_without_bound_in_T(self):
        q = rational_field()
        self.assertGreater(E(q, 100, 1e8), E(q, 100, 1e3))

    def test_printed_derivative_tracks_E(self):
        profile = make_profile(3, 23, 1, 1)
        for x, T in ((100.0, 20.0), (1e6, 300.0)):
            h = 1e-4 * T
            slope = (E(profile, x, T + h) - E(profile, x, T - h)) / (2 * h)
            s = math.log(T / (2 * math.pi)) + math.sqrt(5) + profile.log_root_disc
            self.assertLessEqual(abs(slope - dE_dT(profile, x, T)), 1e-3 * (1 + abs(s)) / T ** 3)

    def test_ranges(self):
        with self.assertRaises(DomainError):
            E(rational_field(), 100, 4)
        with self.assertRaises(DomainError):
            E(rational_field(), 2, 10)


class CmaxTests(SimpleTestCase):

    def test_scan_points(self):
        self.assertEqual([next_scan_point(x) for x in (3, 4999, 5000, 9990, 10_000, 99_900, 100_000)],
                         [4, 5000, 5010, 10_000, 10_100, 100_000, 200_000])

    def test_R_decreasing(self):
        profile = make_profile(3, 23, 3, 0)
        self.assertGreater(lemma_3_1_R(profile, 100), lemma_3_1_R(profile, 1e4))

    def test_partial_w_L(self):
        for profile in PROFILES[:5]:
            value = partial_w_L(profile, 1e4)
            self.assertGreater(value, 0)
            self.assertLess(value, 1)

    def test_degree_seven_row_is_negative(self):
        result = cmax_scan(7, 184607)
        self.assertLess(result.c_max, 0)
        self.assertIsNone(result.c_max_reported)
        self.assertEqual((result.x_at_max, result.n_points), (3, 1))

    def test_degree_three_row(self):
        result = cmax_scan(3, 23)
        self.assertEqual((result.c_max_reported, result.x_at_max, result.n_points), (0.5167, 3986, 6398))
        self.assertLessEqual(result.c_max, C.cmax_bound)

    def test_degree_one_row(self):
        result = cmax_scan(1, 1)
        self.assertEqual((result.c_max_reported, result.x_at_max, result.n_points), (0.2110, 2810, 6411))

    def test_aggregate_row(self):
        result = cmax_row(12, 2225015137)
        self.assertEqual(result.row_label, '≥12')
        self.assertEqual((result.x_at_max, result.n_points), (3, 1))
        self.assertIsNone(cmax_scan_aggregate(2225015137).c_max_reported)
        self.assertEqual(cmax_scan_aggregate(2225015137).to_dict()['n'], '≥9')

    def test_cap_stops_the_scan(self):
        with self.assertLogs('psibounds.tselect', level='WARNING'):
            result = cmax_scan(3, 23, x_cap=100)
        self.assertTrue(result.capped)
        self.assertEqual(result.n_points, 98)

    def test_invalid_rows(self):
        with self.assertRaises(DomainError):
            cmax_scan(0, 1)
        with self.assertRaises(DomainError):
            cmax_scan(2, 0.5)
