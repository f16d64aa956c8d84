import math

import numpy as np
from django.test import SimpleTestCase, override_settings

from psibounds.exceptions import DomainError, LimitExceeded, NotFundamental
from psibounds.psi_oracle import (
    PsiMethod, QuadraticField, is_fundamental_discriminant, jacobi_symbol, kronecker_symbol,
    lambda_K_character, lambda_K_direct, psi_Q, psi_quadratic, psi_quadratic_grid, verify_bound,
    von_mangoldt_sieve,
)
from psibounds.theorems import BoundFormula

LOG2, LOG3, LOG5, LOG7 = (math.log(p) for p in (2, 3, 5, 7))


def naive_von_mangoldt(k):
    for p in range(2, k + 1):
        if k % p == 0:
            while k % p == 0:
                k //= p
            return math.log(p) if k == 1 else 0.0
    return 0.0


class RationalPsiTests(SimpleTestCase):

    def test_von_mangoldt(self):
        lam = von_mangoldt_sieve(100)
        self.assertEqual(lam[0], 0.0)
        self.assertEqual(lam[1], 0.0)
        self.assertEqual(lam[6], 0.0)
        self.assertAlmostEqual(lam[8], LOG2, places=15)
        self.assertAlmostEqual(lam[97], math.log(97), places=15)

    def test_sieve_matches_trial_division(self):
        lam = von_mangoldt_sieve(3000)
        for k in range(3001):
            self.assertAlmostEqual(lam[k], naive_von_mangoldt(k), places=14, msg=f'k = {k}')

    def test_psi_at_ten(self):
        value = psi_Q(10)
        self.assertAlmostEqual(value.value, 3 * LOG2 + 2 * LOG3 + LOG5 + LOG7, places=13)
        self.assertEqual(value.prime_power_count, 7)
        self.assertIs(value.method, PsiMethod.RATIONAL)
        self.assertEqual(psi_Q(10.9).value, value.value)

    def test_small_and_negative_x(self):
        self.assertEqual(psi_Q(1.5).value, 0.0)
        with self.assertRaises(DomainError):
            psi_Q(-1)

    def test_psi_is_close_to_x(self):
        self.assertLess(abs(psi_Q(1e6).value - 1e6), 1e3)

    @override_settings(PSIBOUNDS_SETTINGS={'SIEVE_LIMIT': 1000})
    def test_sieve_guard(self):
        self.assertGreater(psi_Q(500).value, 0)
        with self.assertRaises(LimitExceeded):
            psi_Q(5000)


class CharacterTests(SimpleTestCase):

    def test_jacobi(self):
        self.assertEqual(jacobi_symbol(1001, 9907), -1)
        self.assertEqual(jacobi_symbol(2, 15), 1)
        self.assertEqual(jacobi_symbol(3, 9), 0)
        with self.assertRaises(DomainError):
            jacobi_symbol(2, 4)

    def test_kronecker_at_two(self):
        self.assertEqual(kronecker_symbol(5, 2), -1)
        self.assertEqual(kronecker_symbol(-7, 2), 1)
        self.assertEqual(kronecker_symbol(-4, 2), 0)
        self.assertEqual(kronecker_symbol(13, 1), 1)
        with self.assertRaises(DomainError):
            kronecker_symbol(5, 0)

    def test_euler_criterion(self):
        primes = [p for p in range(3, 200) if all(p % q for q in range(2, p))]
        for D in (-3, -4, 5, 8, -7, 12, 13, -20, 24):
            for p in primes:
                if D % p == 0:
                    self.assertEqual(kronecker_symbol(D, p), 0)
                    continue
                euler = pow(D % p, (p - 1) // 2, p)
                self.assertEqual(kronecker_symbol(D, p), 1 if euler == 1 else -1, msg=f'D={D}, p={p}')

    def test_gaussian_character(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 97):
            self.assertEqual(kronecker_symbol(-4, p), 1 if p % 4 == 1 else -1)

    def test_completely_multiplicative(self):
        for D in (-3, 5, 12, -8):
            for m in range(1, 40):
                for n in range(1, 40):
                    self.assertEqual(kronecker_symbol(D, m * n), kronecker_symbol(D, m) * kronecker_symbol(D, n))

    def test_fundamental_discriminants(self):
        for D in (-3, -4, 5, 8, -7, -8, 12, 13, -15, 24, -20):
            self.assertTrue(is_fundamental_discriminant(D), msg=str(D))
        for D in (0, 1, 6, 9, -12, 20, 16, 25, 2, -1):
            self.assertFalse(is_fundamental_discriminant(D), msg=str(D))


class QuadraticFieldTests(SimpleTestCase):

    def test_from_disc(self):
        with self.assertRaises(NotFundamental):
            QuadraticField.from_disc(6)
        field = QuadraticField.from_disc(-4)
        self.assertEqual(field.label, 'Q(sqrt(-1))')
        self.assertEqual(QuadraticField.from_disc(12).label, 'Q(sqrt(3))')
        self.assertEqual(QuadraticField.from_disc(5).label, 'Q(sqrt(5))')

    def test_profile(self):
        imaginary = QuadraticField(-4).profile
        self.assertEqual((imaginary.degree, imaginary.r1, imaginary.r2), (2, 0, 1))
        self.assertAlmostEqual(imaginary.log_disc, math.log(4), places=15)
        self.assertEqual(QuadraticField(5).profile.signature, (2, 0))

    def test_splitting(self):
        field = QuadraticField(-4)
        self.assertEqual([field.splitting(p) for p in (2, 3, 5, 7, 13)], [0, -1, 1, -1, 1])
        self.assertEqual(QuadraticField(-7).splitting(2), 1)
        self.assertEqual(QuadraticField(5).splitting(2), -1)

    def test_character_table_is_periodic(self):
        field = QuadraticField(12)
        table = field.character_table()
        for k in range(1, 60):
            self.assertEqual(table[k % 12], kronecker_symbol(12, k))


class QuadraticPsiTests(SimpleTestCase):

    def test_gaussian_integers(self):
        field = QuadraticField(-4)
        for method in (PsiMethod.DIRECT_IDEALS, PsiMethod.CHARACTER_DECOMP):
            self.assertAlmostEqual(psi_quadratic(field, 3, method).value, LOG2, places=14)
            self.assertAlmostEqual(psi_quadratic(field, 5, method).value, 2 * LOG2 + 2 * LOG5, places=14)
            # the inert prime 3 has norm 9
            self.assertAlmostEqual(psi_quadratic(field, 9, method).value,
                                   3 * LOG2 + 2 * LOG3 + 2 * LOG5, places=13)
        self.assertEqual(psi_quadratic(field, 1.5).value, 0.0)

    def test_rational_method_rejected(self):
        with self.assertRaises(DomainError):
            psi_quadratic(QuadraticField(5), 100, PsiMethod.RATIONAL)

    def test_methods_agree(self):
        for D in (-3, -4, 5, 8, -7, 12, 13, -163, 229):
            field = QuadraticField.from_disc(D)
            direct, character = psi_quadratic_grid(field, 100_000)
            scale = np.maximum(1.0, np.arange(direct.size))
            self.assertLessEqual(float(np.max(np.abs(direct - character) / scale)), 1e-9, msg=f'D = {D}')

    def test_weights_per_norm(self):
        field = QuadraticField(-7)
        direct = lambda_K_direct(field, 2000)
        character = lambda_K_character(field, 2000)
        np.testing.assert_allclose(direct, character, atol=1e-12)
        # 2 splits in Q(sqrt(-7)): two ideals of norm 2
        self.assertAlmostEqual(direct[2], 2 * LOG2, places=15)
        # 3 is inert: no ideal of norm 3, one of norm 9
        self.assertEqual(direct[3], 0.0)
        self.assertAlmostEqual(direct[9], 2 * LOG3, places=15)

    def test_nondecreasing(self):
        direct, _ = psi_quadratic_grid(QuadraticField(13), 20_000)
        self.assertTrue(np.all(np.diff(direct) >= 0))
        self.assertLess(abs(direct[-1] - 20_000), 2000)


class VerifyBoundTests(SimpleTestCase):

    def test_rational_field_main_bound(self):
        with self.assertLogs('psibounds.psi_oracle', level='INFO'):
            report = verify_bound(None, BoundFormula.EQ11, 1_000_000)
        self.assertTrue(report.passed)
        self.assertEqual(report.field, 'Q')
        self.assertEqual(report.points, 2 * (1_000_000 - 2))
        self.assertTrue(report.to_dict()['pass'])

    def test_real_quadratic_chebyshev_bound(self):
        report = verify_bound(QuadraticField(5), BoundFormula.EQ12, 1_000_000)
        self.assertTrue(report.passed)
        self.assertLess(report.max_ratio, 1)
        self.assertGreater(report.bound_at_argmax, 0)

    def test_earlier_bound_and_stride(self):
        report = verify_bound(QuadraticField(-4), BoundFormula.EQ13, 20_000, stride=7)
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.argmax_x, 100)

    def test_rejections(self):
        with self.assertRaises(DomainError):
            verify_bound(None, BoundFormula.THM25, 1000)
        with self.assertRaises(DomainError):
            verify_bound(None, BoundFormula.EQ15, 1500)

    @override_settings(PSIBOUNDS_SETTINGS={'SIEVE_LIMIT': 1000})
    def test_memory_guard(self):
        with self.assertRaises(LimitExceeded):
            verify_bound(None, BoundFormula.EQ11, 5000)

    def test_every_bound_holds_on_small_fields(self):
        formulas = (BoundFormula.EQ11, BoundFormula.EQ12, BoundFormula.EQ13, BoundFormula.EQ14, BoundFormula.EQ15)
        for D in (None, -3, -4, 5, 8, -7, 12):
            field = None if D is None else QuadraticField.from_disc(D)
            for formula in formulas:
                report = verify_bound(field, formula, 1_000_000, stride=7)
                self.assertTrue(report.passed, msg=f'{report.field} {formula.identifier}: {report.max_ratio}')
