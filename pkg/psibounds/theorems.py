"""
Final explicit bounds for |psi_K(x) - x|, the earlier bounds they are compared
with, the large-x expansion of the main bound, and the crossover search behind
the comparison tables.
"""
import json
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
from django.conf import settings

from .constants import C
from .exceptions import DomainError, NoCrossover, PsiBoundsError, ValidityError
from .field import FieldProfile, from_scientific
from .tselect import select_T, select_T_array
from .zero_estimates import BoundResult, GeneralBoundInput, epsilon, theorem_2_5_bound

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / 'data'


class BoundFormula(Enum):
    EQ11 = ('eq1.1', 3)
    EQ12 = ('eq1.2', 3)
    EQ13 = ('eq1.3', 100)
    EQ14 = ('eq1.4', 3)
    EQ15 = ('eq1.5', 2000)
    THM25 = ('thm2.5', 3)

    def __init__(self, identifier, validity_min_x):
        self.identifier = identifier
        self.validity_min_x = validity_min_x

    @classmethod
    def parse(cls, text: str) -> 'BoundFormula':
        key = text.strip().lower()
        for formula in cls:
            if key in (formula.identifier, formula.name.lower()):
                return formula
        choices = ', '.join(formula.identifier for formula in cls)
        raise DomainError(f'Unknown formula {text!r} (choose from {choices})')

    def check(self, x):
        low = float(np.min(x))
        if low < self.validity_min_x:
            raise ValidityError(self.identifier, low, self.validity_min_x)


RIVALS = (BoundFormula.EQ13, BoundFormula.EQ14, BoundFormula.EQ15)


class AsymptoticForm(Enum):
    EXPANDED = 'expanded'
    INTERMEDIATE = 'intermediate'
    REORGANIZED = 'reorganized'


# Main bounds

def _main_log_term(w, log_delta):
    # log(e^(w+1) + 33.5251 delta_K), without overflow for large w or delta_K
    return np.logaddexp(w + 1, math.log(C.main_shift) + log_delta)


def eq_1_1(profile: FieldProfile, x: float) -> BoundResult:
    BoundFormula.EQ11.check(x)
    selection = select_T(profile, x)
    n, log_delta = profile.degree, profile.log_root_disc
    root = math.sqrt(x) / math.pi
    L = float(_main_log_term(selection.w, log_delta))
    return BoundResult.from_terms(
        BoundFormula.EQ11.identifier,
        disc=root * C.alpha * log_delta * n + C.r_disc * profile.log_disc,
        degree=root * (0.5 * L ** 2 - 0.5 * log_delta ** 2 + C.main_const) * n - C.r_degree * n,
        const=root * C.gamma + C.main_tail,
        epsilon=epsilon(profile, x, selection.T),
        x=x, T=selection.T, kappa=C.kappa_default,
    )


def eq_1_2(profile: FieldProfile, x: float) -> BoundResult:
    BoundFormula.EQ12.check(x)
    root = math.sqrt(x)
    return BoundResult.from_terms(
        BoundFormula.EQ12.identifier,
        disc=(C.cheb_disc * root + C.r_disc) * profile.log_disc,
        degree=(C.cheb_degree * root - C.r_degree) * profile.degree,
        const=x / C.cheb_t + C.cheb_sqrt * root + C.cheb_const,
        epsilon=epsilon(profile, x, C.cheb_t),
        x=x, T=C.cheb_t, kappa=C.cheb_kappa,
    )


# Earlier bounds

def _eq_1_3_terms(profile, x):
    log_x = np.log(x)
    root = np.sqrt(x)
    disc = root * (log_x / (2 * np.pi) + C.lo_disc) * profile.log_disc
    degree = root * (log_x ** 2 / (8 * np.pi) + C.lo_degree) * profile.degree
    return disc, degree, np.zeros_like(root)


def _oesterle_type_terms(profile, x, scale, disc_c, degree_c, log_c, const_c):
    log_x = np.log(x)
    root = np.sqrt(x)
    u = np.log(scale * x / log_x ** 2)
    disc = root * (u / (2 * np.pi) + disc_c) * profile.log_disc
    degree = root * (u ** 2 / (8 * np.pi) + degree_c) * profile.degree
    const = root * (log_c * log_x + const_c)
    return disc, degree, const


def _eq_1_4_terms(profile, x):
    return _oesterle_type_terms(profile, x, C.c13_scale, C.c13_disc, C.c13_degree, C.c13_log, C.c13_const)


def _eq_1_5_terms(profile, x):
    return _oesterle_type_terms(profile, x, 1.0, C.c15_disc, C.c15_degree, C.c15_log, C.c15_const)


_RIVAL_TERMS = {
    BoundFormula.EQ13: _eq_1_3_terms,
    BoundFormula.EQ14: _eq_1_4_terms,
    BoundFormula.EQ15: _eq_1_5_terms,
}


def _rival(formula: BoundFormula, profile: FieldProfile, x: float) -> BoundResult:
    formula.check(x)
    disc, degree, const = _RIVAL_TERMS[formula](profile, float(x))
    return BoundResult.from_terms(formula.identifier, disc=disc, degree=degree, const=const, epsilon=0.0, x=x)


def eq_1_3(profile: FieldProfile, x: float) -> BoundResult:
    return _rival(BoundFormula.EQ13, profile, x)


def eq_1_4(profile: FieldProfile, x: float) -> BoundResult:
    return _rival(BoundFormula.EQ14, profile, x)


def eq_1_5(profile: FieldProfile, x: float) -> BoundResult:
    return _rival(BoundFormula.EQ15, profile, x)


def evaluate(formula: BoundFormula, profile: FieldProfile, x: float,
             T: Optional[float] = None, kappa: Optional[float] = None) -> BoundResult:
    """Evaluate one formula at one point; the general bound needs T and kappa."""
    if formula is BoundFormula.THM25:
        if T is None or kappa is None:
            raise DomainError('thm2.5 needs explicit T and kappa')
        return theorem_2_5_bound(GeneralBoundInput(profile, x, T, kappa))
    return {
        BoundFormula.EQ11: eq_1_1,
        BoundFormula.EQ12: eq_1_2,
        BoundFormula.EQ13: eq_1_3,
        BoundFormula.EQ14: eq_1_4,
        BoundFormula.EQ15: eq_1_5,
    }[formula](profile, x)


def evaluate_on_grid(formula: BoundFormula, profile: FieldProfile, xs) -> np.ndarray:
    """Vectorized bound values on a grid of x."""
    xs = np.asarray(xs, dtype=float)
    formula.check(xs)
    n, log_delta = profile.degree, profile.log_root_disc

    if formula is BoundFormula.EQ11:
        _, w, T = select_T_array(profile, xs)
        L = _main_log_term(w, log_delta)
        bracket = (0.5 * L ** 2 - 0.5 * log_delta ** 2 + C.alpha * log_delta + C.main_const) * n + C.gamma
        return (np.sqrt(xs) / np.pi * bracket + C.r_disc * profile.log_disc - C.r_degree * n
                + C.main_tail + epsilon(profile, xs, T))
    if formula is BoundFormula.EQ12:
        root = np.sqrt(xs)
        return ((C.cheb_disc * root + C.r_disc) * profile.log_disc
                + (C.cheb_degree * root - C.r_degree) * n
                + xs / C.cheb_t + C.cheb_sqrt * root + C.cheb_const
                + epsilon(profile, xs, C.cheb_t))
    if formula in _RIVAL_TERMS:
        disc, degree, const = _RIVAL_TERMS[formula](profile, xs)
        return disc + degree + const
    raise DomainError(f'{formula.identifier} has no grid evaluation')


# Large-x expansion of the main bound

def asymptotic_rhs(profile: FieldProfile, x: float, form: AsymptoticForm = AsymptoticForm.EXPANDED) -> float:
    """The main bound's expansion in x, dropping the o(sqrt(x)) remainder."""
    if x < 16:
        raise DomainError(f'the asymptotic expansion requires x ≥ 16 (got x = {x:g})')
    n, log_delta, log_disc = profile.degree, profile.log_root_disc, profile.log_disc
    lx = math.log(x)
    llx = math.log(lx)
    a = math.log(C.nu / n)
    root = math.sqrt(x)
    tail = C.gamma * root / math.pi

    if form is AsymptoticForm.EXPANDED:
        bracket = (
            0.25 * lx ** 2 - lx * llx
            + (log_delta + 1 + a) * lx
            + llx ** 2
            - 2 * (log_delta + a) * llx
            + (2 * a + C.asy_disc) * log_delta
            + a ** 2 + C.asy_const
        )
        return n * root / (2 * math.pi) * bracket + tail

    disc_part = root / (2 * math.pi) * (2 + 2 * a + lx - 2 * llx + C.asy_reorg_disc) * log_disc
    u = lx - 2 * llx
    if form is AsymptoticForm.INTERMEDIATE:
        degree_bracket = (
            u ** 2 + 4 * (1 + a) * u + 4 * (1 + a) ** 2
            - 8 * (a - llx) + C.asy_mid_n
        )
    else:
        scaled = 2 + 2 * a + u
        degree_bracket = scaled ** 2 - 4 * (2 + 2 * a - 2 * llx) + C.asy_last_n
    return disc_part + root / (8 * math.pi) * degree_bracket * n + tail


# Crossover search

@dataclass
class CrossoverRow:
    profile: FieldProfile
    rival: BoundFormula
    crossover_x: Optional[int]
    clamped: bool
    best_of: bool = False
    table: Optional[str] = None
    kind: Optional[str] = None
    published: Optional[int] = None
    error: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def delta(self) -> Optional[int]:
        if self.published is None or self.crossover_x is None:
            return None
        return self.crossover_x - self.published

    def matches(self, tolerance: float) -> bool:
        if self.crossover_x is None or self.published is None:
            return False
        if self.published == self.rival.validity_min_x:
            return self.crossover_x == self.published
        return abs(self.crossover_x - self.published) <= tolerance * self.published

    def to_dict(self, tolerance: float = 0.001) -> Dict[str, Any]:
        return {
            'table': self.table,
            'kind': self.kind,
            'best_of': self.best_of,
            'n': self.profile.degree,
            'log_disc': self.profile.log_disc,
            'signature': list(self.profile.signature),
            'rival': self.rival.identifier,
            'computed': self.crossover_x,
            'published': self.published,
            'delta': self.delta,
            'clamped': self.clamped,
            'match': self.matches(tolerance) if self.published is not None else None,
            'error': self.error,
        }


def _setting(name, default):
    return getattr(settings, 'PSIBOUNDS_SETTINGS', {}).get(name, default)


def crossover_grid(start: int, x_cap: int, linear_limit: Optional[int] = None,
                   ratio: Optional[float] = None) -> np.ndarray:
    """Integers start..linear_limit, then a geometric grid of integers up to x_cap."""
    linear_limit = int(linear_limit or _setting('CROSSOVER_LINEAR_LIMIT', 100_000))
    ratio = ratio or _setting('CROSSOVER_RATIO', 1.001)
    linear = np.arange(start, min(linear_limit, x_cap) + 1, dtype=np.int64)
    points = []
    x = max(linear_limit, start)
    while x < x_cap:
        x = min(max(x + 1, int(math.ceil(x * ratio))), x_cap)
        points.append(x)
    return np.concatenate([linear, np.array(points, dtype=np.int64)])


def _ours_on_grid(profile, xs, best_of):
    values = evaluate_on_grid(BoundFormula.EQ11, profile, xs)
    if best_of:
        values = np.minimum(values, evaluate_on_grid(BoundFormula.EQ12, profile, xs))
    return values


def _crossover(profile: FieldProfile, rival: BoundFormula, x_cap: Optional[int], best_of: bool) -> CrossoverRow:
    x_cap = int(x_cap or _setting('CROSSOVER_X_CAP', 10_000_000))
    start = rival.validity_min_x
    if x_cap < start:
        raise DomainError(f'x_cap must be at least {start} for {rival.identifier} (got {x_cap})')

    xs = crossover_grid(start, x_cap)
    worse = _ours_on_grid(profile, xs, best_of) > evaluate_on_grid(rival, profile, xs)
    if not worse.any():
        return CrossoverRow(profile, rival, start, True, best_of)
    last = int(np.flatnonzero(worse)[-1])
    if last == xs.size - 1:
        raise NoCrossover(f'{profile.label}: bound never beats {rival.identifier} up to x = {x_cap}')

    lo, hi = int(xs[last]), int(xs[last + 1])
    # between two geometric grid points the sign of the difference changes once
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _ours_on_grid(profile, [mid], best_of)[0] > evaluate_on_grid(rival, profile, [mid])[0]:
            lo = mid
        else:
            hi = mid
    return CrossoverRow(profile, rival, hi, hi == start, best_of)


def crossover(profile: FieldProfile, rival: BoundFormula, x_cap: Optional[int] = None) -> CrossoverRow:
    """Smallest x from which the main bound stays below ``rival`` on the search grid."""
    return _crossover(profile, rival, x_cap, best_of=False)


def crossover_best(profile: FieldProfile, rival: BoundFormula, x_cap: Optional[int] = None) -> CrossoverRow:
    """As ``crossover``, comparing the better of the two main bounds."""
    return _crossover(profile, rival, x_cap, best_of=True)


# The printed comparison tables

@dataclass(frozen=True)
class TableProfile:
    table: str
    kind: str
    profile: FieldProfile
    crossover: Dict[str, int]
    crossover_best: Dict[str, int]


def load_published_tables(path: Optional[str] = None) -> Dict[str, Any]:
    path = Path(path or _setting('PUBLISHED_TABLES_PATH', DATA_DIR / 'published_tables.json'))
    with open(path, encoding='utf-8') as handle:
        return json.load(handle)


def table_profiles(path: Optional[str] = None) -> List[TableProfile]:
    """The profiles of the comparison tables: totally real (n, 0) or totally imaginary (0, n/2)."""
    profiles = []
    for entry in load_published_tables(path)['profiles']:
        n = int(entry['n'])
        r1, r2 = (n, 0) if entry['kind'] == 'real' else (0, n // 2)
        profile = from_scientific(n, float(entry['mantissa']), int(entry['exponent']), r1, r2)
        profiles.append(TableProfile(entry['table'], entry['kind'], profile,
                                     entry['crossover'], entry['crossover_best']))
    return profiles


@dataclass(frozen=True)
class CrossoverTask:
    table_profile: TableProfile
    rival: BoundFormula
    best_of: bool
    x_cap: Optional[int] = None

    def __call__(self) -> CrossoverRow:
        tp = self.table_profile
        golden = tp.crossover_best if self.best_of else tp.crossover
        try:
            row = _crossover(tp.profile, self.rival, self.x_cap, self.best_of)
        except PsiBoundsError as exc:
            logger.error(f'{tp.profile.label} vs {self.rival.identifier}: {exc}')
            row = CrossoverRow(tp.profile, self.rival, None, False, self.best_of, error=str(exc))
        row.table, row.kind = tp.table, tp.kind
        row.published = golden.get(self.rival.identifier)
        return row


def _run_task(task: CrossoverTask) -> CrossoverRow:
    return task()


def published_tables(best_of: bool = False, x_cap: Optional[int] = None, path: Optional[str] = None,
                     mapper: Callable[[Callable, Iterable], Iterable] = map) -> List[CrossoverRow]:
    """
    Crossover rows for every printed profile and rival, in table order.

    ``mapper`` is any ordered map (a worker pool's ``map``); per-row errors are
    reported on the row instead of aborting the run.
    """
    tasks = [
        CrossoverTask(tp, rival, best_of, x_cap)
        for tp in table_profiles(path)
        for rival in RIVALS
    ]
    return list(mapper(_run_task, tasks))
