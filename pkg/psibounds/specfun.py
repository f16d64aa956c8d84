"""
Special functions: the principal branch of Lambert W on [0, inf) and the
series f1, f2 and R_{r1,r2} used in the explicit formula.
"""
import math
import logging
from dataclasses import dataclass

import numpy as np

from .constants import C
from .exceptions import ConvergenceError, DomainError
from .field import FieldProfile

logger = logging.getLogger(__name__)

HALLEY_MAX_ITER = 60
HALLEY_RTOL = 4e-16


@dataclass(frozen=True)
class SeriesPolicy:
    rel_tol: float = 1e-16
    max_terms: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f'rel_tol must be positive (got {self.rel_tol})')
        if self.max_terms < 10:
            raise DomainError(f'max_terms must be at least 10 (got {self.max_terms})')


DEFAULT_POLICY = SeriesPolicy()


def _initial_guess(x: float) -> float:
    if x < math.e:
        return math.log1p(x)
    lx = math.log(x)
    return lx - math.log(lx)


def lambert_w0(x: float) -> float:
    """
    Principal branch W(x) for x >= 0, so that W(x) * exp(W(x)) = x.

    Halley iteration from a logarithmic initial guess, kept inside the bracket
    [0, log(1 + x)] that always contains the root.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f'lambert_w0 requires a finite argument (got {x!r})')
    if x < 0:
        raise DomainError(f'lambert_w0 is only implemented for x ≥ 0 (got {x:g})')
    if x == 0:
        return 0.0

    lo, hi = 0.0, math.log1p(x)
    w = min(max(_initial_guess(x), lo), hi)
    for _ in range(HALLEY_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0:
            return w
        if f < 0:
            lo = w
        else:
            hi = w
        wp1 = w + 1
        step = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        candidate = w - step
        if not lo <= candidate <= hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - w) <= HALLEY_RTOL * (2 + abs(w)):
            return candidate
        w = candidate

    logger.error(f'lambert_w0({x!r}) did not converge')
    raise ConvergenceError(f'lambert_w0({x:g}) did not converge')


def lambert_w0_from_log(log_x: float) -> float:
    """W(exp(log_x)), usable when exp(log_x) overflows a double."""
    if log_x < 700:
        return lambert_w0(math.exp(log_x))
    # w + log w = log_x
    w = log_x - math.log(log_x)
    for _ in range(HALLEY_MAX_ITER):
        step = (w + math.log(w) - log_x) / (1 + 1 / w)
        w -= step
        if abs(step) <= HALLEY_RTOL * w:
            return w
    raise ConvergenceError(f'lambert_w0_from_log({log_x:g}) did not converge')


def lambert_w0_array(x) -> np.ndarray:
    """Vectorized ``lambert_w0`` for grid evaluations."""
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise DomainError('lambert_w0_array requires finite arguments ≥ 0')

    safe = np.where(x > 0, x, 1.0)
    log_x = np.log(safe)
    w = np.where(
        safe < np.e,
        np.log1p(safe),
        log_x - np.log(np.where(log_x > 0, log_x, 1.0)),
    )
    with np.errstate(over='ignore', invalid='ignore'):
        for _ in range(HALLEY_MAX_ITER):
            ew = np.exp(w)
            f = w * ew - safe
            wp1 = w + 1
            dw = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
            w = w - dw
            if np.all(np.abs(dw) <= HALLEY_RTOL * (2 + np.abs(w))):
                break
    return np.where(x > 0, w, 0.0)


def lambert_w_upper(t: float) -> float:
    """log t - log log t + 1.024 log log t / log t, an upper bound for W(t) when t >= e."""
    if t < math.e:
        raise DomainError(f'lambert_w_upper requires t ≥ e (got {t:g})')
    lt = math.log(t)
    llt = math.log(lt)
    return lt - llt + C.w_upper * llt / lt


def lambert_w_asymptotic(t: float) -> float:
    """The first three terms of the large-t expansion of W(t)."""
    if t <= math.e:
        raise DomainError(f'lambert_w_asymptotic requires t > e (got {t:g})')
    lt = math.log(t)
    llt = math.log(lt)
    return lt - llt + llt / lt


def _series(first_term, ratio, policy: SeriesPolicy, name: str) -> float:
    # terms are generated lazily: term(r) for r = 1, 2, ...
    total = 0.0
    for r in range(1, policy.max_terms + 1):
        term = first_term(r)
        total += term
        if ratio(r) * term < policy.rel_tol * total:
            return total
    logger.warning(f'{name}: truncated at max_terms = {policy.max_terms}')
    return total


def f1(x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """sum_{r >= 1} x^(1-2r) / (2r (2r-1))."""
    if x <= 1:
        raise DomainError(f'f1 requires x > 1 (got {x:g})')
    inv_sq = 1.0 / (x * x)
    return _series(
        lambda r: x ** (1 - 2 * r) / (2 * r * (2 * r - 1)),
        lambda r: inv_sq,
        policy,
        'f1',
    )


def f2(x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """sum_{r >= 2} x^(2-2r) / ((2r-1)(2r-2))."""
    if x <= 1:
        raise DomainError(f'f2 requires x > 1 (got {x:g})')
    inv_sq = 1.0 / (x * x)
    return _series(
        lambda k: x ** (-2 * k) / ((2 * k + 1) * (2 * k)),
        lambda k: inv_sq,
        policy,
        'f2',
    )


def R_signature(r1: int, r2: int, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """
    R_{r1,r2}(x) for any x > 1.

    The bound formulas only use x >= 3 (see ``R``); the wider range is kept for
    finite differences taken around x = 3.
    """
    log_x = math.log(x)
    return (
        -(r1 + r2 - 1) * (x * log_x - x)
        + r2 * (log_x + 1)
        - (r1 + r2) * f1(x, policy)
        - r2 * f2(x, policy)
    )


def R(profile: FieldProfile, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    if x < 3:
        raise DomainError(f'R requires x ≥ 3 (got {x:g})')
    return R_signature(profile.r1, profile.r2, x, policy)
