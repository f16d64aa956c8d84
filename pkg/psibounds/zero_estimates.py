"""
Closed-form GRH estimates for sums over the zeros of the Dedekind zeta function,
the general (kappa, T) bound and the |psi_K(x) - x| bound assembled from them.

Functions of x or T accept numpy arrays as well as scalars; scalars come back
as floats.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .constants import C
from .exceptions import DomainError
from .field import FieldProfile, W_K, e_K
from .utils import require

logger = logging.getLogger(__name__)

R_Q_EXACT = math.log(2 * math.pi)
T_MIN = 5.0


def _scalar(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _check_T(T, name: str):
    require(np.asarray(T) >= T_MIN, f'{name} requires T ≥ 5 (got T = {np.min(T):g})')


def _check_x(x, name: str):
    require(np.asarray(x) >= 3, f'{name} requires x ≥ 3 (got x = {np.min(x):g})')


def _check_kappa(kappa: float, name: str):
    if not 0 < kappa <= 2:
        raise DomainError(f'{name} requires 0 < kappa ≤ 2 (got kappa = {kappa:g})')


def _log_t(T):
    return np.log(np.asarray(T, dtype=float) / (2 * np.pi))


@dataclass
class BoundResult:
    """A bound value with its per-term breakdown and the parameters used."""

    formula: str
    value: float
    terms: Dict[str, float]
    params: Dict[str, Optional[float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'formula': self.formula,
            'value': self.value,
            'terms': dict(self.terms),
            'params': dict(self.params),
        }

    @classmethod
    def from_terms(cls, formula, disc, degree, const, epsilon, **params) -> 'BoundResult':
        terms = {
            'disc': float(disc),
            'degree': float(degree),
            'const': float(const),
            'epsilon': float(epsilon),
        }
        return cls(formula, math.fsum(terms.values()), terms, params)


# Zero statistics

def r_K_bound(profile: FieldProfile) -> float:
    """Upper bound for |r_K|, the constant term of zeta_K'/zeta_K at s = 0."""
    return C.r_disc * profile.log_disc - C.r_degree * profile.degree + C.r_const - e_K(profile)


def low_zero_sum_bound(profile: FieldProfile) -> float:
    """Bound for the sum of 1/|rho| over zeros with |gamma| <= 5."""
    return C.low_disc * profile.log_disc - C.low_degree * profile.degree + C.low_const


def zero_count_bound(profile: FieldProfile, T):
    """Bound for the number of zeros with |gamma| <= T."""
    _check_T(T, 'zero_count_bound')
    T = np.asarray(T, dtype=float)
    value = (
        T / np.pi * (1 + C.count_w / T) * W_K(profile, T)
        - T / np.pi * (1 - C.count_n / T) * profile.degree
        + C.count_c / np.pi
    )
    return _scalar(value)


def inv_rho_sq_tail_bound(profile: FieldProfile, T):
    """Bound for the sum of 1/|rho|^2 over zeros with |gamma| >= T."""
    _check_T(T, 'inv_rho_sq_tail_bound')
    T = np.asarray(T, dtype=float)
    value = (
        (1 + C.tail_w / T) * W_K(profile, T) / (np.pi * T)
        + (1 + C.tail_n / T) * profile.degree / (np.pi * T)
        + C.tail_c / (np.pi * T ** 2)
    )
    return _scalar(value)


def pi_inv_rho_bound(profile: FieldProfile, T):
    """Bound for the sum of pi/|rho| over zeros with |gamma| <= T."""
    _check_T(T, 'pi_inv_rho_bound')
    l = _log_t(T)
    value = (l + C.alpha) * profile.log_disc + (0.5 * l ** 2 + C.beta) * profile.degree + C.gamma
    return _scalar(value)


def zero_sum_x_bound(profile: FieldProfile, x, T):
    """Bound for |sum_{|gamma| < T} x^rho / rho|."""
    _check_T(T, 'zero_sum_x_bound')
    x = np.asarray(x, dtype=float)
    require(x > 0, 'zero_sum_x_bound requires x > 0')
    return _scalar(np.sqrt(x) / np.pi * pi_inv_rho_bound(profile, T))


# Coefficient functions of the general bound

def _D_W(kappa, T):
    return (18 - kappa ** 2) / (6 * T) + (C.dw_a - C.dw_b * kappa - C.dw_c * kappa ** 2) / T ** 2


def _D_n(kappa, T):
    return (18 + kappa ** 2) / (6 * T) + (C.dn_a - C.dn_b * kappa - C.dn_c * kappa ** 2) / T ** 2


def _D_c(kappa, T):
    return (C.dc_a - C.dc_b * kappa - C.dc_c * kappa ** 2) / T ** 2


def difference_coefficients(kappa: float, T: float) -> Dict[str, float]:
    """D_W, D_n and D_c from their printed closed forms; defined for kappa in [-6, 4]."""
    if not -6 <= kappa <= 4:
        raise DomainError(f'D coefficients require -6 ≤ kappa ≤ 4 (got {kappa:g})')
    _check_T(T, 'difference_coefficients')
    return {'D_W': _D_W(kappa, T), 'D_n': _D_n(kappa, T), 'D_c': _D_c(kappa, T)}


def _half_kappa_terms(kappa):
    return 2 / kappa + kappa / 2, 2 / kappa - kappa / 2


def general_w_coefficient(kappa, T):
    """M_{W,+} with the constant used by the general bound (4.3282)."""
    plus, _ = _half_kappa_terms(kappa)
    return (
        plus
        + (C.gen_w_a * kappa ** 2 + C.gen_w_b * kappa + C.gen_w_c) / (2 * kappa * T)
        + (C.gen_w_d * kappa + C.gen_w_e) / T ** 2
    )


def general_n_coefficient(kappa, T):
    _, minus = _half_kappa_terms(kappa)
    return (
        minus
        + (C.gen_n_a * kappa ** 2 + C.gen_n_b * kappa + C.gen_n_c) / (2 * kappa * T)
        + (C.gen_n_d * kappa + C.gen_n_e) / T ** 2
    )


def general_c_coefficient(kappa, T):
    """The bracket multiplying sqrt(x)/pi in the constant group of the general bound."""
    return (
        (C.gen_c_a * kappa ** 2 + C.gen_c_b) * np.pi / (kappa * T)
        + (C.gen_c_c * kappa + C.gen_c_d) * np.pi / T ** 2
    )


@dataclass(frozen=True)
class CoefficientSet:
    kappa: float
    T: float
    M_W_plus: float
    M_n_plus: float
    M_c_plus: float
    M_W_minus: float
    M_n_minus: float
    M_c_minus: float
    D_W: float
    D_n: float
    D_c: float

    def consistency_errors(self) -> Dict[str, float]:
        """|D - (M_+ - M_-)| for each of the three groups."""
        return {
            'D_W': abs(self.D_W - (self.M_W_plus - self.M_W_minus)),
            'D_n': abs(self.D_n - (self.M_n_plus - self.M_n_minus)),
            'D_c': abs(self.D_c - (self.M_c_plus - self.M_c_minus)),
        }


def coefficient_set(kappa: float, T: float) -> CoefficientSet:
    """The M_{.,+}, M_{.,-} and D_. functions at (kappa, T), as displayed in the proof."""
    _check_kappa(kappa, 'coefficient_set')
    _check_T(T, 'coefficient_set')
    plus, minus = _half_kappa_terms(kappa)
    k2, k3 = kappa ** 2, kappa ** 3

    m_w_plus = (
        plus
        + (C.gen_w_a * k2 + C.gen_w_b * kappa + C.gen_w_c) / (2 * kappa * T)
        + (C.gen_w_d * kappa + C.mp_w_e) / T ** 2
    )
    m_w_minus = (
        plus
        + (k3 / 3 + C.gen_w_a * k2 - C.gen_w_b * kappa + C.gen_w_c) / (2 * kappa * T)
        + (C.mm_w_a * k2 + C.mm_w_b * kappa - C.mm_w_c) / T ** 2
    )
    m_n_plus = general_n_coefficient(kappa, T)
    m_n_minus = (
        minus
        + (-k3 / 3 + C.gen_n_a * k2 - C.gen_n_b * kappa + C.gen_n_c) / (2 * kappa * T)
        + (C.mm_n_a * k2 + C.mm_n_b * kappa - C.mm_n_c) / T ** 2
    )
    shared_c = (C.mp_c_a * k2 + C.mp_c_b) / (kappa * T)
    m_c_plus = shared_c + (C.mp_c_c * kappa + C.mp_c_d) / T ** 2
    m_c_minus = shared_c + (C.mm_c_a * k2 + C.mm_c_b * kappa - C.mm_c_c) / T ** 2

    return CoefficientSet(
        kappa=kappa,
        T=T,
        M_W_plus=m_w_plus,
        M_n_plus=m_n_plus,
        M_c_plus=m_c_plus,
        M_W_minus=m_w_minus,
        M_n_minus=m_n_minus,
        M_c_minus=m_c_minus,
        D_W=_D_W(kappa, T),
        D_n=_D_n(kappa, T),
        D_c=_D_c(kappa, T),
    )


# Correction terms

def epsilon_tilde(profile: FieldProfile, x, T):
    _check_x(x, 'epsilon_tilde')
    x = np.asarray(x, dtype=float)
    if profile.signature == (1, 0):
        value = -np.log1p(-1 / x ** 2)
    elif profile.signature == (0, 1):
        value = -np.log1p(-1 / x)
    else:
        value = epsilon(profile, x, T)
    return _scalar(value)


def epsilon(profile: FieldProfile, x, T):
    """max(0, d_K log x - 3.6133 n_K sqrt(x) / T), for every signature."""
    x = np.asarray(x, dtype=float)
    require(x >= 3, 'epsilon requires x ≥ 3')
    require(np.asarray(T) > 0, 'epsilon requires T > 0')
    value = profile.unit_rank * np.log(x) - C.eps_slope * profile.degree * np.sqrt(x) / T
    return _scalar(np.maximum(0.0, value))


# General bound

@dataclass(frozen=True)
class GeneralBoundInput:
    profile: FieldProfile
    x: float
    T: float
    kappa: float

    def __post_init__(self):
        if self.x < 3:
            raise DomainError(f'the general bound requires x ≥ 3 (got x = {self.x:g})')
        _check_T(self.T, 'the general bound')
        _check_kappa(self.kappa, 'the general bound')


def _general_groups(profile: FieldProfile, x, T, kappa):
    """The W_K, n_K and constant groups of the general bound, split by term."""
    root = np.sqrt(np.asarray(x, dtype=float)) / np.pi
    m_w = general_w_coefficient(kappa, T)
    disc = root * m_w * profile.log_disc
    degree = root * (m_w * _log_t(T) + general_n_coefficient(kappa, T)) * profile.degree
    const = kappa * np.asarray(x, dtype=float) / (2 * T) + root * general_c_coefficient(kappa, T)
    return disc, degree, const


def theorem_2_5_bound(bound_input: GeneralBoundInput) -> BoundResult:
    """Bound for |psi_K(x) - x + sum_{|gamma| < T} x^rho / rho|."""
    profile, x, T, kappa = bound_input.profile, bound_input.x, bound_input.T, bound_input.kappa
    disc, degree, const = _general_groups(profile, x, T, kappa)
    return BoundResult.from_terms(
        'thm2.5',
        disc=disc + C.r_disc * profile.log_disc,
        degree=degree - C.r_degree * profile.degree,
        const=const + C.r_const - e_K(profile),
        epsilon=epsilon_tilde(profile, x, T),
        x=x, T=T, kappa=kappa,
    )


# |psi_K(x) - x| at a given T

def F(T, kappa: float = C.kappa_default):
    T = np.asarray(T, dtype=float)
    return _scalar(_log_t(T) + general_w_coefficient(kappa, T) + C.alpha)


def G(T, kappa: float = C.kappa_default):
    T = np.asarray(T, dtype=float)
    l = _log_t(T)
    return _scalar(0.5 * l ** 2 + general_w_coefficient(kappa, T) * l + C.beta
                   + general_n_coefficient(kappa, T))


def H(profile: FieldProfile, x, T, kappa: float = C.kappa_default):
    x = np.asarray(x, dtype=float)
    value = (
        kappa * x / (2 * T)
        + np.sqrt(x) / np.pi * (C.gamma + general_c_coefficient(kappa, T))
        + C.r_const
        + epsilon(profile, x, T)
    )
    return _scalar(value)


def F_simplified(T):
    """Upper estimate of F at kappa = sqrt(5) - 1."""
    T = np.asarray(T, dtype=float)
    return _scalar(_log_t(T) + C.sqrt5 + C.f_t1 / T + C.f_t2 / T ** 2 + C.alpha)


def G_simplified(T):
    """Upper estimate of G at kappa = sqrt(5) - 1."""
    T = np.asarray(T, dtype=float)
    l = _log_t(T)
    return _scalar(
        0.5 * (l + C.sqrt5) ** 2
        + (C.f_t1 / T + C.f_t2 / T ** 2) * l
        + C.g_const + C.g_t1 / T + C.g_t2 / T ** 2
    )


def H_simplified(profile: FieldProfile, x, T):
    """Upper estimate of H at kappa = sqrt(5) - 1."""
    x = np.asarray(x, dtype=float)
    value = (
        C.kappa_default * x / (2 * T)
        + np.sqrt(x) / np.pi * (C.gamma + C.h_t1 / T + C.h_t2 / T ** 2)
        + C.r_const
        + epsilon(profile, x, T)
    )
    return _scalar(value)


def psi_gap_bound_at_T(profile: FieldProfile, x, T, kappa: float = C.kappa_default) -> BoundResult:
    """
    Bound for |psi_K(x) - x| at a fixed truncation height T:

        ((sqrt(x)/pi) F(T) + 1.0155) log Delta_K
        + ((sqrt(x)/pi) G(T) - 2.1042) n_K + H(x, T)
    """
    GeneralBoundInput(profile, x, T, kappa)
    root = math.sqrt(x) / math.pi
    eps = epsilon(profile, x, T)
    return BoundResult.from_terms(
        'psi-gap',
        disc=(root * F(T, kappa) + C.r_disc) * profile.log_disc,
        degree=(root * G(T, kappa) - C.r_degree) * profile.degree,
        const=H(profile, x, T, kappa) - eps,
        epsilon=eps,
        x=x, T=T, kappa=kappa,
    )


def assembled_psi_bound(profile: FieldProfile, x, T, kappa: float = C.kappa_default) -> BoundResult:
    """
    The same bound as ``psi_gap_bound_at_T``, summed from its ingredients: the
    general bound groups, the zero-sum bound and the |r_K| bound without e_K.
    """
    GeneralBoundInput(profile, x, T, kappa)
    disc, degree, const = _general_groups(profile, x, T, kappa)
    root = math.sqrt(x) / math.pi
    l = float(_log_t(T))
    return BoundResult.from_terms(
        'psi-gap-assembled',
        disc=disc + root * (l + C.alpha) * profile.log_disc + C.r_disc * profile.log_disc,
        degree=degree + root * (0.5 * l ** 2 + C.beta) * profile.degree - C.r_degree * profile.degree,
        const=const + root * C.gamma + C.r_const,
        epsilon=epsilon(profile, x, T),
        x=x, T=T, kappa=kappa,
    )


def E0(profile: FieldProfile, x, T):
    """F(T) log delta_K + G(T) + pi/(n_K sqrt(x)) (H(x, T) - epsilon_K(x, T)) at kappa = sqrt(5) - 1."""
    _check_x(x, 'E0')
    _check_T(T, 'E0')
    x = np.asarray(x, dtype=float)
    kappa = C.kappa_default
    value = (
        F(T, kappa) * profile.log_root_disc
        + G(T, kappa)
        + np.pi / (profile.degree * np.sqrt(x)) * (H(profile, x, T, kappa) - epsilon(profile, x, T))
    )
    return _scalar(value)
