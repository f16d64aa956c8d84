"""
Choice of the truncation height T.

The objective E(x, T) is the kappa = sqrt(5) - 1 relaxation of the
|psi_K(x) - x| bound divided by n_K sqrt(x)/pi. Its minimiser T_min, the
modified root T_0 and the closed-form Lambert W choice T = T_F + T_W are all
computed here, together with the scan bounding the remainder R of the last
relaxation step.
"""
import math
import logging
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_CEILING
from typing import Dict, Optional

import numpy as np
from django.conf import settings

from .constants import C
from .exceptions import DomainError, ConvergenceError
from .field import FieldProfile
from .specfun import lambert_w0_array, lambert_w0_from_log
from .utils import hybrid_root

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
LOG_TWO_PI = math.log(TWO_PI)


def _setting(name, default):
    return getattr(settings, 'PSIBOUNDS_SETTINGS', {}).get(name, default)


def t_f() -> float:
    """Positive root of T^2 - 7.0604 T - 10.1186."""
    return (C.tf_lin + math.sqrt(C.tf_lin ** 2 + 4 * C.tf_const)) / 2


@dataclass
class TSelection:
    a: float
    w: float
    T_F: float
    T_W: float
    T: float
    T_0: Optional[float] = None
    T_min: Optional[float] = None
    residuals: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            'a': self.a, 'w': self.w, 'T_F': self.T_F, 'T_W': self.T_W, 'T': self.T,
            'T_0': self.T_0, 'T_min': self.T_min, 'residuals': dict(self.residuals),
        }


@dataclass(frozen=True)
class CmaxResult:
    degree: int
    disc_used: float
    c_max: float
    x_at_max: int
    n_points: int
    capped: bool = False
    label: Optional[str] = None

    @property
    def c_max_reported(self) -> Optional[float]:
        """c_max rounded up to four decimals; None when it is negative."""
        if self.c_max < 0:
            return None
        return float(Decimal(repr(self.c_max)).quantize(Decimal('0.0001'), rounding=ROUND_CEILING))

    @property
    def row_label(self) -> str:
        return self.label or str(self.degree)

    def to_dict(self):
        return {
            'n': self.row_label,
            'disc': self.disc_used,
            'c_max': self.c_max,
            'c_max_reported': self.c_max_reported,
            'x_at_max': self.x_at_max,
            'n_points': self.n_points,
            'capped': self.capped,
        }


def _check_x(x):
    if x < 3:
        raise DomainError(f'T selection requires x ≥ 3 (got x = {x:g})')


def _aggregate_a(n: int, x):
    return C.kappa_default * np.pi * np.sqrt(x) / (2 * n) + C.e_t1 + C.h_t1 / n


def select_T(profile: FieldProfile, x: float, implicit: bool = False) -> TSelection:
    """
    Closed-form truncation height T = 8.2822 + a / w.

    With ``implicit`` the roots T_0 and T_min are solved as well.
    """
    _check_x(x)
    n = profile.degree
    log_delta = profile.log_root_disc
    a = float(_aggregate_a(n, x))
    w = lambert_w0_from_log(C.sqrt5 - LOG_TWO_PI + log_delta + math.log(a))
    T_W = a / w
    selection = TSelection(a=a, w=w, T_F=t_f(), T_W=T_W, T=C.main_t + T_W)
    selection.residuals['T_W'] = abs(T_W * (math.log(T_W / TWO_PI) + C.sqrt5 + log_delta) - a) / a

    if implicit:
        T_0, residual = _solve_T0(profile, x, C.t0_n)
        T_min, residual_min = _solve_Tmin(profile, x)
        selection.T_0, selection.T_min = T_0, T_min
        selection.residuals['T_0'] = residual
        selection.residuals['T_min'] = residual_min
    return selection


def select_T_array(profile: FieldProfile, xs):
    """(a, w, T) with T = 8.2822 + a / w for every x of a grid."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 3):
        raise DomainError('T selection requires x ≥ 3')
    a = _aggregate_a(profile.degree, xs)
    log_scale = C.sqrt5 - LOG_TWO_PI + profile.log_root_disc
    if log_scale + np.log(np.max(a)) < 700:
        w = lambert_w0_array(np.exp(log_scale) * a)
    else:
        w = np.array([lambert_w0_from_log(log_scale + math.log(value)) for value in a])
    return a, w, C.main_t + a / w


def _second_factor(log_delta, T):
    return math.log(T / TWO_PI) + C.sqrt5 + log_delta


def _solve_increasing(func, derivative, lo, hi, rhs, label, rtol=None):
    """Root of func above lo, growing hi until it brackets."""
    if rtol is None:
        rtol = _setting('SOLVER_TOLERANCE', 1e-9)
    max_iter = _setting('SOLVER_MAX_ITER', 200)
    for _ in range(60):
        if func(hi) >= 0:
            break
        hi = lo + 2 * (hi - lo)
    else:
        raise ConvergenceError(f'{label}: could not bracket the root')
    result = hybrid_root(func, derivative, lo, hi, tolerance=rtol * rhs, max_iter=max_iter, label=label)
    return result.root, result.residual / rhs


def _solve_T0(profile: FieldProfile, x: float, s_constant: float, rtol=None):
    n = profile.degree
    log_delta = profile.log_root_disc
    T_F = t_f()
    rhs = C.kappa_default * math.pi * math.sqrt(x) / (2 * n) + C.e_t1 + s_constant / n

    def func(T):
        return (T - C.tf_lin - C.tf_const / T) * _second_factor(log_delta, T) - rhs

    def derivative(T):
        return ((1 + C.tf_const / T ** 2) * _second_factor(log_delta, T)
                + (T - C.tf_lin - C.tf_const / T) / T)

    T_W = float(select_T(profile, x).T_W)
    return _solve_increasing(func, derivative, T_F + 1e-9, T_F + T_W + 1, rhs, 'T_0', rtol)


def solve_T0(profile: FieldProfile, x: float, s_constant: float = C.t0_n, rtol=None) -> float:
    """
    The root above T_F of

        (T - 7.0604 - 10.1186/T)(log(T/2pi) + sqrt(5) + log delta_K)
            = kappa pi sqrt(x)/(2 n_K) + 21.3270 + s_constant/n_K
    """
    _check_x(x)
    return _solve_T0(profile, x, s_constant, rtol)[0]


def _solve_Tmin(profile: FieldProfile, x: float):
    n = profile.degree
    log_delta = profile.log_root_disc
    T_F = t_f()
    base = C.kappa_default * math.pi * math.sqrt(x) / (2 * n) + C.tmin_c + C.h_t1 / n

    def rhs(T):
        return base + C.tmin_t1 / T + C.tmin_nt1 / (n * T)

    def func(T):
        return (T - C.tf_lin - C.tf_const / T) * _second_factor(log_delta, T) - rhs(T)

    def derivative(T):
        return ((1 + C.tf_const / T ** 2) * _second_factor(log_delta, T)
                + (T - C.tf_lin - C.tf_const / T) / T
                + (C.tmin_t1 + C.tmin_nt1 / n) / T ** 2)

    T_W = float(select_T(profile, x).T_W)
    return _solve_increasing(func, derivative, T_F + 1e-9, T_F + T_W + 1, base, 'T_min')


def solve_Tmin(profile: FieldProfile, x: float) -> float:
    """The minimiser of E(x, .) above T_F, i.e. the zero of its T-derivative."""
    _check_x(x)
    return _solve_Tmin(profile, x)[0]


def E(profile: FieldProfile, x, T):
    """The relaxed objective E(x, T) at kappa = sqrt(5) - 1."""
    x = np.asarray(x, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(x < 3):
        raise DomainError('E requires x ≥ 3')
    if np.any(T < 5):
        raise DomainError('E requires T ≥ 5')
    n = profile.degree
    log_delta = profile.log_root_disc
    s = np.log(T / TWO_PI) + C.sqrt5 + log_delta
    value = (
        0.5 * s ** 2 - 0.5 * log_delta ** 2
        + (C.f_t1 / T + C.e_t2 / T ** 2) * s
        + C.kappa_default * np.pi * np.sqrt(x) / (2 * n * T)
        + C.e_t1 / T + C.e_t2c / T ** 2
        + (C.h_t1 / T + C.h_t2 / T ** 2) / n
        + C.alpha * log_delta + C.g_const + C.gamma / n
        + C.r_const * np.pi / (n * np.sqrt(x))
    )
    return float(value) if value.ndim == 0 else value


def dE_dT(profile: FieldProfile, x: float, T: float) -> float:
    n = profile.degree
    s = _second_factor(profile.log_root_disc, T)
    return (
        (1 / T - C.tf_lin / T ** 2 - C.tf_const / T ** 3) * s
        - (C.tmin_c / T ** 2 + C.tmin_t1 / T ** 3
           + (C.h_t1 / T ** 2 + C.tmin_nt1 / T ** 3) / n
           + C.kappa_default * math.pi * math.sqrt(x) / (2 * n * T ** 2))
    )


def _scan_R(n: int, log_delta: float, T_0: float) -> float:
    w = math.log(T_0 / TWO_PI) + C.sqrt5 + log_delta
    return (C.e_t2c + C.h_t2 / n - C.r_w * w) / T_0 ** 2


def lemma_3_1_R(profile: FieldProfile, x: float, rtol=None) -> float:
    """
    R = (18.7781 + 27.5673/n_K - 5.0593 w) / T_0^2, with T_0 solved using the
    33.3542/n_K right-hand side.
    """
    T_0 = solve_T0(profile, x, s_constant=C.h_t1, rtol=rtol)
    return _scan_R(profile.degree, profile.log_root_disc, T_0)


def partial_w_L(profile: FieldProfile, x: float) -> float:
    """Derivative of w with respect to L = sqrt(5) + log delta_K, from the implicit function theorem."""
    T_0 = solve_T0(profile, x, s_constant=C.h_t1)
    first = (T_0 + C.tf_const / T_0) * _second_factor(profile.log_root_disc, T_0)
    return first / (first + (T_0 - C.tf_lin - C.tf_const / T_0))


def next_scan_point(x: int) -> int:
    if x < 5000:
        return x + 1
    if x < 10_000:
        return x + 10
    if x < 100_000:
        return x + 100
    return 2 * x


def _scan_profile(n: int, disc: float) -> FieldProfile:
    if n < 1:
        raise DomainError(f'Degree must be at least 1 (got {n})')
    if disc < 1:
        raise DomainError(f'Minimal discriminant must be at least 1 (got {disc:g})')
    # R only depends on n_K and delta_K
    return FieldProfile(n, math.log(disc), n, 0)


def cmax_scan(n: int, disc: float, x_cap: Optional[float] = None) -> CmaxResult:
    """
    Scan c_k = n_K sqrt(x_{k+1}) / pi * R(x_k) along x_1 = 3, x_2, ... until R
    turns negative. x_1 is always evaluated; later points stop the scan,
    uncounted, as soon as R(x_k) < 0.
    """
    if x_cap is None:
        x_cap = _setting('SCAN_X_CAP', 1e12)
    profile = _scan_profile(n, disc)
    log_delta = profile.log_root_disc
    rtol = 1e-12

    x = 3
    T_0 = solve_T0(profile, x, s_constant=C.h_t1, rtol=rtol)
    r = _scan_R(n, log_delta, T_0)
    x_next = next_scan_point(x)
    c_max = n * math.sqrt(x_next) / math.pi * r
    x_at_max, n_points, capped = x, 1, False

    x = x_next
    while r >= 0:
        if x > x_cap:
            logger.warning(f'c_max scan for n = {n} reached the cap x = {x_cap:g}')
            capped = True
            break
        r = _scan_R(n, log_delta, solve_T0(profile, x, s_constant=C.h_t1, rtol=rtol))
        if r < 0:
            break
        x_next = next_scan_point(x)
        c = n * math.sqrt(x_next) / math.pi * r
        n_points += 1
        if c > c_max:
            c_max, x_at_max = c, x
        x = x_next

    logger.debug(f'c_max scan n = {n}: c_max = {c_max:.7f} at x = {x_at_max}, {n_points} points')
    return CmaxResult(n, disc, c_max, x_at_max, n_points, capped)


def cmax_scan_aggregate(disc: float, n: int = 9) -> CmaxResult:
    """
    The row covering every n_K >= n: R evaluated with T_0 = T_F and the
    degree-n minimal discriminant, at x = 3.
    """
    profile = _scan_profile(n, disc)
    r = _scan_R(n, profile.log_root_disc, t_f())
    c = n * math.sqrt(next_scan_point(3)) / math.pi * r
    return CmaxResult(n, disc, c, 3, 1, label=f'≥{n}')


def root_gap_diagnostics(profile: FieldProfile, x: float) -> Dict[str, float]:
    """Compare T_0, T_min and the closed-form choice T_F + T_W at one point."""
    selection = select_T(profile, x, implicit=True)
    T_0, T_min = selection.T_0, selection.T_min
    return {
        'T_0': T_0,
        'T_min': T_min,
        'T_F_plus_T_W': selection.T_F + selection.T_W,
        'T': selection.T,
        'gap': T_0 - T_min,
        'predicted_gap': C.f_t1 / math.log(T_0),
        'E_at_T_0': E(profile, x, T_0),
        'E_at_T_min': E(profile, x, T_min),
        'E_at_T': E(profile, x, selection.T),
    }


def cmax_row(n: int, disc: float, x_cap: Optional[float] = None) -> CmaxResult:
    """One row of the c_max table; every degree from 9 on shares the aggregate row."""
    if n >= 9:
        return cmax_scan_aggregate(disc, n)
    return cmax_scan(n, disc, x_cap)
