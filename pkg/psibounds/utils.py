import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


def require(condition, message: str, exc=DomainError):
    """Raise ``exc(message)`` unless ``condition`` holds everywhere (scalars or arrays)."""
    if not np.all(condition):
        raise exc(message)


class KahanSum:
    """
    Running compensated sum (Neumaier's variant of Kahan summation).

    Keeps the rounding error of every addition in a carry, so that long sums
    of logarithms stay accurate to a few ulps of the total.
    """

    def __init__(self, value: float = 0.0):
        self.sum = float(value)
        self.carry = 0.0

    def add(self, value: float) -> 'KahanSum':
        value = float(value)
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total
        return self

    def __iadd__(self, value):
        return self.add(value)

    @property
    def value(self) -> float:
        return self.sum + self.carry


def compensated_cumsum(values: np.ndarray, block: int = 4096) -> np.ndarray:
    """
    Cumulative sum of ``values`` with block-wise compensation.

    Each block is summed with numpy from zero, so its rounding error is bounded
    by the block size; the offsets carried between blocks go through
    ``KahanSum``.
    """
    values = np.asarray(values, dtype=np.float64)
    out = np.empty_like(values)
    offset = KahanSum()
    for start in range(0, values.size, block):
        chunk = np.cumsum(values[start:start + block])
        out[start:start + block] = chunk + offset.value
        offset.add(chunk[-1])
    return out


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def hybrid_root(
    func: Callable[[float], float],
    derivative: Callable[[float], float],
    lo: float,
    hi: float,
    tolerance: float,
    max_iter: int = 200,
    label: str = 'root',
    polish: Optional[int] = 3,
) -> RootResult:
    """
    Find the root of an increasing function bracketed by [lo, hi].

    Newton steps are taken from the current point while they stay inside the
    bracket and shrink it fast enough; otherwise the bracket is bisected. The
    solve succeeds when |func(x)| <= tolerance. A few extra Newton polishing
    steps are tried at the end when they reduce the residual.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo > 0 or f_hi < 0:
        raise ConvergenceError(
            f'{label}: [{lo:g}, {hi:g}] does not bracket a root (f = {f_lo:g}, {f_hi:g})'
        )

    x = 0.5 * (lo + hi)
    step_old = hi - lo
    iterations = 0
    for iterations in range(1, max_iter + 1):
        fx = func(x)
        if abs(fx) <= tolerance:
            result = _polish(func, derivative, x, fx, lo, hi, polish)
            logger.debug(f'{label}: converged to {result.root!r} after {iterations} iterations '
                         f'(residual {result.residual:.3e})')
            return RootResult(result.root, result.residual, iterations)

        if fx < 0:
            lo = x
        else:
            hi = x

        dfx = derivative(x)
        newton = x - fx / dfx if dfx > 0 else None
        if newton is not None and lo < newton < hi and abs(fx / dfx) < 0.5 * step_old:
            step_old = abs(fx / dfx)
            x = newton
        else:
            step_old = hi - lo
            x = 0.5 * (lo + hi)

        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            break

    fx = func(x)
    if abs(fx) <= tolerance:
        return RootResult(x, abs(fx), iterations)
    logger.error(f'{label}: residual {abs(fx):.3e} above {tolerance:.1e} after {iterations} iterations')
    raise ConvergenceError(f'{label}: residual {abs(fx):.3e} above {tolerance:.1e} after {iterations} iterations')


def _polish(func, derivative, x, fx, lo, hi, steps):
    best_x, best_f = x, abs(fx)
    for _ in range(steps or 0):
        dfx = derivative(best_x)
        if dfx <= 0:
            break
        candidate = best_x - func(best_x) / dfx
        if not lo <= candidate <= hi:
            break
        f_candidate = abs(func(candidate))
        if f_candidate >= best_f:
            break
        best_x, best_f = candidate, f_candidate
    return RootResult(best_x, best_f, 0)
