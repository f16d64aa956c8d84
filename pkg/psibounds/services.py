import json
import math
import time
import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from django.conf import settings

from .constants import C
from .exceptions import DomainError, PsiBoundsError
from .field import FieldProfile, make_profile
from .models import TableRun, VerificationRun
from .psi_oracle import QuadraticField, psi_quadratic_grid, verify_bound
from .specfun import lambert_w0, lambert_w_upper
from .theorems import (
    AsymptoticForm, BoundFormula, asymptotic_rhs, eq_1_1, evaluate, load_published_tables, published_tables,
)
from .tselect import cmax_row, select_T
from .zero_estimates import (
    assembled_psi_bound, coefficient_set, difference_coefficients, psi_gap_bound_at_T,
)

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / 'data'


def _setting(name, default):
    return getattr(settings, 'PSIBOUNDS_SETTINGS', {}).get(name, default)


def load_minimal_discriminants(path: Optional[str] = None) -> Dict[int, int]:
    """Smallest |Delta_K| for each degree, from the versioned data file."""
    path = Path(path or _setting('MINIMAL_DISCRIMINANTS_PATH', DATA_DIR / 'minimal_discriminants.json'))
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
        table = {int(n): int(disc) for n, disc in data['minimal_discriminants'].items()}
    except (OSError, KeyError, ValueError) as exc:
        raise DomainError(f'cannot read minimal discriminants from {path}: {exc}')
    missing = [n for n in range(1, 10) if n not in table]
    if missing:
        raise DomainError(f'{path} lacks degrees {missing}')
    return table


@contextmanager
def worker_map(workers: int):
    """An ordered map over a process pool; a single worker maps in-process."""
    if workers <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield pool.map


class TableService:
    """Reproduces the crossover tables and the c_max table and compares them with the printed values"""

    def __init__(self, workers: Optional[int] = None, x_cap: Optional[int] = None,
                 min_disc_path: Optional[str] = None, tables_path: Optional[str] = None):
        """
        Args:
            workers: size of the process pool, 1 to stay in-process
            x_cap: upper end of the crossover search
            min_disc_path: minimal-discriminant table overriding the shipped one
            tables_path: printed tables overriding the shipped ones
        """
        self.workers = workers or _setting('WORKERS', 1)
        self.x_cap = x_cap
        self.min_disc_path = min_disc_path
        self.tables_path = tables_path
        self.tolerance = _setting('CROSSOVER_TOLERANCE', 0.001)

    def crossover(self, best_of: bool = False) -> Dict[str, Any]:
        """
        Crossover rows for all printed profiles and rivals.

        Returns:
            Dict with success status, rows in table order, match counts and timing
        """
        start_time = time.time()
        with worker_map(self.workers) as mapper:
            rows = published_tables(best_of=best_of, x_cap=self.x_cap, path=self.tables_path, mapper=mapper)
        processing_time = time.time() - start_time

        rendered = [row.to_dict(self.tolerance) for row in rows]
        matched = sum(1 for row in rendered if row['match'])
        errors = [f"{row['table']} {row['kind']} n={row['n']} {row['rival']}: {row['error']}"
                  for row in rendered if row['error']]

        logger.info(f"Crossover table ({'best of' if best_of else 'main'}): {matched}/{len(rows)} rows match "
                    f"in {processing_time:.2f}s with {self.workers} workers")
        return {
            'success': matched == len(rows),
            'table': 'crossover-best' if best_of else 'crossover',
            'rows': rendered,
            'matched': matched,
            'total': len(rows),
            'processing_time': processing_time,
            'error': '; '.join(errors) or None,
        }

    def cmax(self) -> Dict[str, Any]:
        """
        c_max rows for n_K = 1..8 and the aggregate row for n_K >= 9.

        Returns:
            Dict with success status, rows, match counts and timing
        """
        start_time = time.time()
        minimal = load_minimal_discriminants(self.min_disc_path)
        golden = {row['n']: row for row in load_published_tables(self.tables_path)['cmax']}
        scan_cap = _setting('SCAN_X_CAP', 1e12)
        degrees = list(range(1, 10))

        try:
            with worker_map(self.workers) as mapper:
                results = list(mapper(cmax_row, degrees, [minimal[n] for n in degrees], [scan_cap] * len(degrees)))
        except PsiBoundsError as exc:
            logger.error(f"c_max scan failed: {exc}")
            return {
                'success': False,
                'table': 'cmax',
                'rows': [],
                'matched': 0,
                'total': len(degrees),
                'processing_time': time.time() - start_time,
                'error': str(exc),
            }

        rows = []
        for result in results:
            row = result.to_dict()
            published = golden.get(result.row_label, {})
            row['published_c_max'] = published.get('c_max')
            row['published_x_at_max'] = published.get('x_at_max')
            row['published_n_points'] = published.get('n_points')
            row['match'] = bool(published) and self._cmax_matches(result.c_max_reported, published) \
                and result.x_at_max == published['x_at_max'] and result.n_points == published['n_points']
            rows.append(row)

        processing_time = time.time() - start_time
        matched = sum(1 for row in rows if row['match'])
        logger.info(f"c_max table: {matched}/{len(rows)} rows match in {processing_time:.2f}s")
        return {
            'success': matched == len(rows),
            'table': 'cmax',
            'rows': rows,
            'matched': matched,
            'total': len(rows),
            'processing_time': processing_time,
            'error': None,
        }

    @staticmethod
    def _cmax_matches(reported: Optional[float], published: Dict[str, Any]) -> bool:
        if published.get('c_max') is None:
            return reported is None
        return reported is not None and abs(reported - published['c_max']) <= 1e-4 + 1e-12

    def record(self, result: Dict[str, Any]) -> TableRun:
        """Persist a table run as a TableRun log."""
        return TableRun.objects.create(
            table=result['table'],
            rows_total=result['total'],
            rows_matched=result['matched'],
            processing_time=result['processing_time'],
            workers=self.workers,
            payload={'rows': result['rows']},
            success=result['success'],
            error_message=result['error'],
        )


class VerificationService:
    """Checks a bound against the exact psi_K of Q or of a quadratic field"""

    def verify(self, field: Optional[QuadraticField], formula: BoundFormula, x_max: int,
               stride: int = 1) -> Dict[str, Any]:
        """
        Args:
            field: the quadratic field, or None for Q
            formula: any bound except the general one
            x_max: last integer checked

        Returns:
            Dict with success status, the report and timing
        """
        start_time = time.time()
        try:
            report = verify_bound(field, formula, x_max, stride)
        except PsiBoundsError as exc:
            logger.error(f"Verification of {formula.identifier} failed to run: {exc}")
            return {'success': False, 'error': str(exc), 'processing_time': time.time() - start_time}

        return {
            'success': True,
            'report': report,
            'disc': field.disc if field else None,
            'processing_time': time.time() - start_time,
        }

    def record(self, result: Dict[str, Any]) -> VerificationRun:
        report = result['report']
        return VerificationRun.objects.create(
            field_label=report.field,
            disc=result['disc'],
            formula=report.formula,
            x_max=report.x_max,
            max_ratio=report.max_ratio,
            argmax_x=report.argmax_x,
            psi_at_argmax=report.psi_at_argmax,
            bound_at_argmax=report.bound_at_argmax,
            passed=report.passed,
            processing_time=result['processing_time'],
        )


def evaluate_bound(profile: FieldProfile, formula: BoundFormula, x: float,
                   T: Optional[float] = None, kappa: Optional[float] = None) -> Dict[str, Any]:
    """One bound value with its breakdown and, for the main bound, the T selection."""
    result = evaluate(formula, profile, x, T=T, kappa=kappa)
    payload = {'bound': result}
    if formula is BoundFormula.EQ11:
        payload['selection'] = select_T(profile, x)
    return payload


# Self-test

class SelfTestService:
    """
    The invariant suite behind ``selftest``.

    Each check returns (passed, detail); a check that raises counts as failed.
    """

    SELFTEST_DISCS = (-3, -4, 5, 8, -7, 12, 13)

    def checks(self) -> List[tuple]:
        return [
            ('lambert-residuals', self.check_lambert_residuals),
            ('lambert-upper-bound', self.check_lambert_upper_bound),
            ('coefficient-identities', self.check_coefficient_identities),
            ('difference-positivity', self.check_difference_positivity),
            ('epsilon-justification', self.check_epsilon_justification),
            ('asymptotic-identity', self.check_asymptotic_identity),
            ('assembly', self.check_assembly),
            ('dominance', self.check_dominance),
            ('dual-psi-methods', self.check_dual_psi_methods),
        ]

    def run(self, corrupt: Optional[tuple] = None) -> Dict[str, Any]:
        """
        Args:
            corrupt: optional (name, value) overriding one stored constant for the run

        Returns:
            Dict with success status, the per-check results and timing
        """
        start_time = time.time()
        if corrupt:
            with C.overridden(*corrupt):
                results = self._run_checks()
        else:
            results = self._run_checks()
        failures = [row['check'] for row in results if not row['passed']]
        processing_time = time.time() - start_time
        logger.info(f"selftest: {len(results) - len(failures)}/{len(results)} checks pass in {processing_time:.2f}s")
        return {
            'success': not failures,
            'rows': results,
            'failures': failures,
            'processing_time': processing_time,
        }

    def _run_checks(self):
        results = []
        for name, check in self.checks():
            try:
                passed, detail = check()
            except PsiBoundsError as exc:
                passed, detail = False, f'raised {type(exc).__name__}: {exc}'
            if not passed:
                logger.error(f"selftest check {name} failed: {detail}")
            results.append({'check': name, 'passed': bool(passed), 'detail': detail})
        return results

    @staticmethod
    def check_lambert_residuals():
        worst = 0.0
        for x in np.concatenate([[0.0], np.logspace(-10, 30, 199)]):
            w = lambert_w0(x)
            worst = max(worst, abs(w * math.exp(w) - x) / max(1.0, x))
        return worst <= 1e-12, f'max scaled residual {worst:.2e}'

    @staticmethod
    def check_lambert_upper_bound():
        slack = min(lambert_w_upper(t) - lambert_w0(t) for t in np.geomspace(math.e, 1e20, 200))
        return slack >= 0, f'min slack {slack:.3e}'

    @staticmethod
    def check_coefficient_identities():
        worst = 0.0
        for kappa in np.linspace(0.1, 2.0, 20):
            for T in (5.0, 10.0, 100.0, 1e4):
                errors = coefficient_set(float(kappa), T).consistency_errors()
                worst = max(worst, max(errors.values()))
        return worst <= 1e-12, f'max |D - (M+ - M-)| {worst:.2e}'

    @staticmethod
    def check_difference_positivity():
        # the 1/T^2 parts of all three; the 1/T part of D_W changes sign inside [-6, 4]
        lowest = math.inf
        for kappa in np.linspace(-6, 4, 101):
            kappa = float(kappa)
            for T in np.geomspace(5, 1e4, 40):
                T = float(T)
                d = difference_coefficients(kappa, T)
                lowest = min(
                    lowest,
                    T ** 2 * d['D_c'],
                    T ** 2 * d['D_n'] - T * (18 + kappa ** 2) / 6,
                    T ** 2 * d['D_W'] - T * (18 - kappa ** 2) / 6,
                )
        return lowest > 0, f'min 1/T^2 coefficient {lowest:.4f}'

    @staticmethod
    def check_epsilon_justification():
        # smallest root discriminant allowed by the inequality is sqrt(5)
        log_delta = 0.5 * math.log(5)
        margin = math.inf
        for kappa in np.linspace(0.0, 2.0, 41):
            for T in np.geomspace(5, 1e4, 400):
                d = difference_coefficients(float(kappa), float(T))
                lhs = d['D_W'] * (log_delta + math.log(T / (2 * math.pi))) + d['D_n']
                margin = min(margin, lhs - C.eps_slope * math.pi / T)
        return margin >= 0, f'min margin {margin:.3e}'

    @staticmethod
    def check_asymptotic_identity():
        worst = 0.0
        for n, disc in ((1, 1), (2, 5), (6, 9747), (20, 6.5601e27)):
            profile = make_profile(n, disc, n, 0)
            for x in (1e4, 1e8, 1e12, 1e16):
                expanded = asymptotic_rhs(profile, x, AsymptoticForm.EXPANDED)
                for form in (AsymptoticForm.INTERMEDIATE, AsymptoticForm.REORGANIZED):
                    worst = max(worst, abs(asymptotic_rhs(profile, x, form) / expanded - 1))
        return worst <= 1e-12, f'max relative gap {worst:.2e}'

    @staticmethod
    def check_assembly():
        worst = 0.0
        for profile in (make_profile(2, 5, 2, 0), make_profile(3, 23, 1, 1), make_profile(6, 9747, 0, 3)):
            for x in (10.0, 1e4, 1e8):
                T = select_T(profile, x).T
                direct = psi_gap_bound_at_T(profile, x, T).value
                worst = max(worst, abs(assembled_psi_bound(profile, x, T).value / direct - 1))
        return worst <= 1e-9, f'max relative gap {worst:.2e}'

    @staticmethod
    def check_dominance():
        slack = math.inf
        for n, disc, r1, r2 in ((2, 5, 2, 0), (2, 8, 2, 0), (3, 49, 3, 0), (6, 300_125, 6, 0), (10, 1e13, 0, 5)):
            profile = make_profile(n, disc, r1, r2)
            for x in np.geomspace(3, 1e8, 48):
                T = select_T(profile, float(x)).T
                ours = eq_1_1(profile, float(x)).value
                gap = psi_gap_bound_at_T(profile, float(x), T).value
                slack = min(slack, (ours - gap) / gap)
        return slack >= 0, f'min relative slack {slack:.3e}'

    def check_dual_psi_methods(self):
        worst = 0.0
        for D in self.SELFTEST_DISCS:
            direct, character = psi_quadratic_grid(QuadraticField.from_disc(D), 10_000)
            scale = np.maximum(1.0, np.arange(direct.size))
            worst = max(worst, float(np.max(np.abs(direct - character) / scale)))
        return worst <= 1e-9, f'max scaled gap {worst:.2e}'
