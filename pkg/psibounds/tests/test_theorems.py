import math

import numpy as np
from django.test import SimpleTestCase

from psibounds.exceptions import DomainError, NoCrossover, ValidityError
from psibounds.field import from_scientific, make_profile, rational_field
from psibounds.theorems import (
    RIVALS, AsymptoticForm, BoundFormula, asymptotic_rhs, crossover, crossover_best, crossover_grid,
    eq_1_1, eq_1_2, eq_1_3, eq_1_4, eq_1_5, evaluate, evaluate_on_grid, published_tables, table_profiles,
)
from psibounds.tselect import select_T
from psibounds.zero_estimates import psi_gap_bound_at_T

PROFILES = [
    rational_field(),
    make_profile(2, 5, 2, 0),
    make_profile(3, 23, 1, 1),
    make_profile(6, 9747, 0, 3),
    from_scientific(200, 8.0911, 374, 200, 0),
]


class FormulaTests(SimpleTestCase):

    def test_parse(self):
        self.assertIs(BoundFormula.parse('eq1.1'), BoundFormula.EQ11)
        self.assertIs(BoundFormula.parse(' EQ15 '), BoundFormula.EQ15)
        self.assertIs(BoundFormula.parse('thm2.5'), BoundFormula.THM25)
        with self.assertRaisesMessage(DomainError, 'Unknown formula'):
            BoundFormula.parse('eq9.9')

    def test_validity_ranges(self):
        q = rational_field()
        with self.assertRaisesMessage(ValidityError, 'requires x ≥ 2000'):
            eq_1_5(q, 100)
        with self.assertRaisesMessage(ValidityError, 'requires x ≥ 100'):
            eq_1_3(q, 99)
        with self.assertRaises(ValidityError):
            eq_1_1(q, 2.9)
        with self.assertRaises(DomainError):
            evaluate(BoundFormula.THM25, q, 100)

    def test_chebyshev_type_bound(self):
        result = eq_1_2(rational_field(), 100)
        expected = (0.9722 * 10 - 2.1042) + 100 / 10 + 9.0458 * 10 + 7.0320
        self.assertAlmostEqual(result.value, expected, places=10)
        self.assertEqual(result.params['T'], 10)

    def test_earlier_bounds(self):
        q, x = rational_field(), 100.0
        lx = math.log(x)
        self.assertAlmostEqual(eq_1_3(q, x).value, 10 * (lx ** 2 / (8 * math.pi) + 2), places=10)
        u = math.log(18.8 * x / lx ** 2)
        expected = 10 * (u ** 2 / (8 * math.pi) + 1.3) + 10 * (0.3 * lx + 14.6)
        self.assertAlmostEqual(eq_1_4(q, x).value, expected, places=10)
        x = 5000.0
        lx = math.log(x)
        u = math.log(x / lx ** 2)
        root = math.sqrt(x)
        expected = root * (u ** 2 / (8 * math.pi) + 1.1) + root * (1.2 * lx + 10.2)
        self.assertAlmostEqual(eq_1_5(q, x).value, expected, places=8)

    def test_main_bound_terms(self):
        result = eq_1_1(make_profile(3, 23, 1, 1), 1e6)
        self.assertAlmostEqual(sum(result.terms.values()), result.value, places=8)
        self.assertEqual(result.params['T'], select_T(make_profile(3, 23, 1, 1), 1e6).T)

    def test_grid_matches_scalar(self):
        xs = np.array([3.0, 10.0, 2000.0, 1e5, 1e9])
        for profile in PROFILES:
            for formula, scalar in ((BoundFormula.EQ11, eq_1_1), (BoundFormula.EQ12, eq_1_2)):
                for x, value in zip(xs, evaluate_on_grid(formula, profile, xs)):
                    self.assertAlmostEqual(value, scalar(profile, x).value, delta=1e-10 * abs(value))
            grid = evaluate_on_grid(BoundFormula.EQ15, profile, xs[2:])
            for x, value in zip(xs[2:], grid):
                self.assertAlmostEqual(value, eq_1_5(profile, x).value, delta=1e-10 * abs(value))

    def test_main_bound_dominates_fixed_T_bound(self):
        for n, disc, r1, r2 in ((2, 5, 2, 0), (2, 8, 2, 0), (3, 49, 3, 0), (6, 300_125, 6, 0), (10, 1e13, 0, 5)):
            profile = make_profile(n, disc, r1, r2)
            for x in np.geomspace(3, 1e8, 48):
                T = select_T(profile, float(x)).T
                gap = psi_gap_bound_at_T(profile, float(x), T).value
                self.assertGreaterEqual(eq_1_1(profile, float(x)).value, gap, msg=f'{profile.label}, x={x:g}')

    def test_bounds_are_positive(self):
        for profile in PROFILES:
            for x in (3.0, 50.0, 1e6):
                self.assertGreater(eq_1_1(profile, x).value, 0)
                self.assertGreater(eq_1_2(profile, x).value, 0)


class AsymptoticTests(SimpleTestCase):

    def test_forms_agree(self):
        for n, disc in ((1, 1), (2, 5), (6, 9747), (20, 6.5601e27)):
            profile = make_profile(n, disc, n, 0)
            for x in (1e4, 1e8, 1e12):
                expanded = asymptotic_rhs(profile, x)
                for form in (AsymptoticForm.INTERMEDIATE, AsymptoticForm.REORGANIZED):
                    self.assertAlmostEqual(asymptotic_rhs(profile, x, form) / expanded, 1.0, places=11)

    def test_tracks_main_bound(self):
        for profile in PROFILES[:4]:
            x = 1e60
            self.assertLess(abs(asymptotic_rhs(profile, x) / eq_1_1(profile, x).value - 1), 0.05)

    def test_small_x_rejected(self):
        with self.assertRaises(DomainError):
            asymptotic_rhs(rational_field(), 15)


class CrossoverTests(SimpleTestCase):

    def test_grid(self):
        grid = crossover_grid(100, 10_000, linear_limit=1000, ratio=1.1)
        self.assertEqual(grid[0], 100)
        self.assertEqual(grid[-1], 10_000)
        self.assertTrue(np.all(np.diff(grid) >= 1))
        self.assertEqual(int(np.sum(grid <= 1000)), 901)

    def test_real_quadratic_against_earlier_bound(self):
        profile = make_profile(2, 4.9535, 2, 0)
        row = crossover(profile, BoundFormula.EQ13)
        self.assertLessEqual(abs(row.crossover_x - 187929), 0.001 * 187929)
        self.assertFalse(row.clamped)
        row.published = 187929
        self.assertTrue(row.matches(0.001))

    def test_clamped_at_validity_start(self):
        row = crossover(make_profile(2, 4.9535, 2, 0), BoundFormula.EQ14)
        self.assertEqual(row.crossover_x, 3)
        self.assertTrue(row.clamped)
        row = crossover(from_scientific(50, 7.1245, 81, 50, 0), BoundFormula.EQ15)
        self.assertEqual(row.crossover_x, 2425)

    def test_best_of_is_earlier(self):
        profile = from_scientific(6, 2.9169, 5, 6, 0)
        plain = crossover(profile, BoundFormula.EQ13)
        best = crossover_best(profile, BoundFormula.EQ13)
        self.assertEqual(plain.crossover_x, 107)
        self.assertEqual(best.crossover_x, 100)
        self.assertLessEqual(best.crossover_x, plain.crossover_x)

    def test_no_crossover_below_cap(self):
        profile = make_profile(2, 4.9535, 2, 0)
        with self.assertRaises(NoCrossover):
            crossover(profile, BoundFormula.EQ13, x_cap=150_000)
        with self.assertRaises(DomainError):
            crossover(profile, BoundFormula.EQ15, x_cap=1000)

    def test_table_profiles(self):
        profiles = table_profiles()
        self.assertEqual(len(profiles), 28)
        self.assertEqual({tp.kind for tp in profiles}, {'real', 'imaginary'})
        for tp in profiles:
            self.assertEqual(set(tp.crossover), {rival.identifier for rival in RIVALS})
            if tp.kind == 'imaginary':
                self.assertEqual(tp.profile.r1, 0)

    def test_row_errors_are_reported(self):
        rows = published_tables(x_cap=1000)
        self.assertEqual(len(rows), 28 * 3)
        failed = [row for row in rows if row.error]
        self.assertTrue(failed)
        self.assertTrue(all(row.rival is not BoundFormula.EQ14 for row in failed))
        self.assertTrue(any('x_cap must be at least 2000' in row.to_dict()['error'] for row in failed))
