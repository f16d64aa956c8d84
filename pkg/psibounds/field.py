"""
Number-field profiles: the tuple (n_K, Delta_K, r1, r2) and its derived invariants.

A profile may describe an actual field or a hypothetical one built from a
discriminant lower bound, so Delta_K is a real number. The logarithm of the
discriminant is the primary representation; discriminants such as 6.5467e749
do not fit in a double.
"""
import json
import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .constants import C
from .exceptions import DomainError, SignatureMismatch, StrictValidationError

logger = logging.getLogger(__name__)

LOG10 = math.log(10.0)


@dataclass(frozen=True)
class FieldProfile:
    """Degree, log-discriminant and signature of a number field."""

    degree: int
    log_disc: float
    r1: int
    r2: int
    source: Optional[str] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.degree

    @property
    def abs_disc(self) -> float:
        """Delta_K, or ``inf`` when it does not fit in a double."""
        try:
            return math.exp(self.log_disc)
        except OverflowError:
            return math.inf

    @property
    def log_root_disc(self) -> float:
        return self.log_disc / self.degree

    @property
    def root_disc(self) -> float:
        return math.exp(self.log_root_disc)

    @property
    def unit_rank(self) -> int:
        """d_K = r1 + r2 - 1."""
        return self.r1 + self.r2 - 1

    @property
    def signature(self) -> tuple:
        return (self.r1, self.r2)

    @property
    def is_totally_real(self) -> bool:
        return self.r2 == 0

    @property
    def label(self) -> str:
        return f'n={self.degree} disc={format_disc(self.log_disc)} ({self.r1},{self.r2})'

    def to_dict(self) -> Dict[str, Any]:
        data = {'n': self.degree, 'r1': self.r1, 'r2': self.r2}
        if math.isfinite(self.abs_disc):
            data['disc'] = self.abs_disc
        else:
            data['logdisc'] = self.log_disc
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FieldProfile':
        try:
            n, r1, r2 = int(data['n']), int(data['r1']), int(data['r2'])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f'Invalid field profile {data!r}: {exc}') from exc
        if 'logdisc' in data:
            return from_log_disc(n, float(data['logdisc']), r1, r2)
        if 'disc' not in data:
            raise DomainError(f'Field profile {data!r} needs "disc" or "logdisc"')
        return make_profile(n, float(data['disc']), r1, r2)

    @classmethod
    def from_json(cls, text: str) -> 'FieldProfile':
        return cls.from_dict(json.loads(text))


def _check_signature(n: int, r1: int, r2: int):
    if n < 1:
        raise DomainError(f'Degree must be at least 1 (got {n})')
    if r1 < 0 or r2 < 0:
        raise DomainError(f'Signature must be non-negative (got ({r1},{r2}))')
    if n != r1 + 2 * r2:
        raise SignatureMismatch(f'n_K = {n} differs from r1 + 2*r2 = {r1 + 2 * r2}')


def make_profile(n: int, disc: float, r1: int, r2: int) -> FieldProfile:
    """Build a profile from the absolute discriminant."""
    if not math.isfinite(disc):
        raise DomainError(f'Discriminant must be finite (got {disc!r}); use a log-discriminant')
    if disc <= 0:
        raise DomainError(f'Discriminant must be positive (got {disc:g})')
    if disc < 1:
        raise DomainError(f'Absolute discriminant must be at least 1 (got {disc:g})')
    _check_signature(n, r1, r2)
    return FieldProfile(n, math.log(disc), r1, r2)


def from_log_disc(n: int, log_disc: float, r1: int, r2: int) -> FieldProfile:
    """Build a profile from log Delta_K."""
    if not math.isfinite(log_disc):
        raise DomainError(f'log-discriminant must be finite (got {log_disc!r})')
    if log_disc < 0:
        raise DomainError(f'Absolute discriminant must be at least 1 (got log = {log_disc:g})')
    _check_signature(n, r1, r2)
    return FieldProfile(n, float(log_disc), r1, r2)


def from_scientific(n: int, mantissa: float, exponent: int, r1: int, r2: int) -> FieldProfile:
    """Build a profile from Delta_K = mantissa * 10**exponent."""
    if mantissa <= 0:
        raise DomainError(f'Mantissa must be positive (got {mantissa:g})')
    return from_log_disc(n, math.log(mantissa) + exponent * LOG10, r1, r2)


def rational_field() -> FieldProfile:
    return FieldProfile(1, 0.0, 1, 0)


def format_disc(log_disc: float, digits: int = 5) -> str:
    """Render Delta_K from its logarithm, in scientific notation once it gets large."""
    if log_disc < 20 * LOG10:
        return f'{math.exp(log_disc):.{digits}g}'
    exponent = math.floor(log_disc / LOG10)
    mantissa = math.exp(log_disc - exponent * LOG10)
    if mantissa >= 10:
        mantissa, exponent = mantissa / 10, exponent + 1
    return f'{mantissa:.{digits - 1}f}e{exponent}'


def log_minkowski_bound(n: int, r2: int) -> float:
    """log of (pi/4)^(2 r2) (n^n / n!)^2, the Minkowski lower bound for Delta_K."""
    return 2 * r2 * math.log(math.pi / 4) + 2 * (n * math.log(n) - math.lgamma(n + 1))


def minkowski_lower_bound(n: int, r2: int) -> float:
    return math.exp(log_minkowski_bound(n, r2))


def validate(profile: FieldProfile, strict: bool = False) -> List[str]:
    """
    Check a profile against the conditions the bounds rely on.

    Returns the list of diagnostics. Each one is logged as a warning; in strict
    mode the first one raises StrictValidationError instead.
    """
    diagnostics = []
    if profile.degree == 1 and profile.log_disc != 0:
        diagnostics.append('n_K = 1 requires Delta_K = 1')
    if profile.unit_rank > 0 and profile.log_root_disc < 0.5 * math.log(5):
        diagnostics.append(
            f'δ_K < √5 with d_K > 0 (δ_K = {profile.root_disc:.6g}); '
            'the ε̃ justification condition fails'
        )
    # tolerance absorbs the rounding of printed lower bounds
    if profile.log_disc < log_minkowski_bound(profile.degree, profile.r2) - 1e-9:
        diagnostics.append(
            f'Delta_K below the Minkowski lower bound '
            f'{format_disc(log_minkowski_bound(profile.degree, profile.r2))} for '
            f'(n_K, r2) = ({profile.degree}, {profile.r2})'
        )

    for message in diagnostics:
        if strict:
            logger.error(f'{profile.label}: {message}')
            raise StrictValidationError(message)
        logger.warning(f'{profile.label}: {message}')
    return diagnostics


def e_K(profile: FieldProfile) -> float:
    if profile.signature == (1, 0):
        return C.e_rational
    if profile.signature == (0, 1):
        return C.e_imag_quadratic
    return 0.0


def W_K(profile: FieldProfile, T):
    """log Delta_K + n_K log(T / 2 pi); accepts scalars or arrays."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise DomainError('W_K requires T > 0')
    value = profile.log_disc + profile.degree * np.log(T / (2 * np.pi))
    return value if value.ndim else float(value)
