"""
Numerical constants of the explicit GRH bounds.

Every constant is written once, as the decimal string printed with the
formula it belongs to, and parsed once when the module is imported. Call
sites read them through ``C.<name>``; nothing retypes a literal.
"""
import math
import logging
from contextlib import contextmanager
from decimal import Decimal
from typing import Dict, Iterator

logger = logging.getLogger(__name__)


# name -> (decimal literal, where it is printed)
LITERALS: Dict[str, tuple] = {
    # zero-sum bound, used with log(T/2pi)
    'alpha': ('3.9792', 'zero-sum bound, log-discriminant offset'),
    'beta': ('-1.4969', 'zero-sum bound, degree offset'),
    'gamma': ('25.5362', 'zero-sum bound, constant'),

    # |r_K| bound and the e_K correction
    'r_disc': ('1.0155', '|r_K| bound, log-discriminant coefficient'),
    'r_degree': ('2.1042', '|r_K| bound, degree coefficient'),
    'r_const': ('8.3423', '|r_K| bound, constant'),
    'e_rational': ('4.4002', 'e_K for signature (1,0)'),
    'e_imag_quadratic': ('0.6931', 'e_K for signature (0,1)'),

    # sum over low zeros |gamma| <= 5 of 1/|rho|
    'low_disc': ('1.0111', 'low-zero sum, log-discriminant coefficient'),
    'low_degree': ('1.6550', 'low-zero sum, degree coefficient'),
    'low_const': ('7.0320', 'low-zero sum, constant'),

    # zero counting, tail of 1/|rho|^2 and pi/|rho| sums
    'count_w': ('1.4427', 'zero count, W_K correction'),
    'count_n': ('8.9250', 'zero count, degree correction'),
    'count_c': ('8.6542', 'zero count, constant'),
    'tail_w': ('2.8854', 'tail sum, W_K correction'),
    'tail_n': ('18.6019', 'tail sum, degree correction'),
    'tail_c': ('17.3084', 'tail sum, constant'),

    # general (kappa, T) bound as stated
    'gen_w_a': ('1.4427', 'W_K group, kappa^2 coefficient of 1/(2 kappa T)'),
    'gen_w_b': ('3', 'W_K group, kappa coefficient of 1/(2 kappa T)'),
    'gen_w_c': ('11.5416', 'W_K group, constant of 1/(2 kappa T)'),
    'gen_w_d': ('0.5915', 'W_K group, kappa coefficient of 1/T^2'),
    'gen_w_e': ('4.3282', 'W_K group, constant of 1/T^2 (general bound)'),
    'gen_n_a': ('8.9250', 'degree group, kappa^2 coefficient of 1/(2 kappa T)'),
    'gen_n_b': ('3', 'degree group, kappa coefficient of 1/(2 kappa T)'),
    'gen_n_c': ('74.4076', 'degree group, constant of 1/(2 kappa T)'),
    'gen_n_d': ('1.7702', 'degree group, kappa coefficient of 1/T^2'),
    'gen_n_e': ('27.9029', 'degree group, constant of 1/T^2'),
    'gen_c_a': ('1.3774', 'constant group, kappa^2 coefficient of pi/(kappa T)'),
    'gen_c_b': ('11.0190', 'constant group, constant of pi/(kappa T)'),
    'gen_c_c': ('0.4133', 'constant group, kappa coefficient of pi/T^2'),
    'gen_c_d': ('8.2643', 'constant group, constant of pi/T^2'),
    'eps_slope': ('3.6133', 'epsilon correction, sqrt(x)/T coefficient'),

    # M_{.,+} (h > 0) as displayed in the proof
    'mp_w_e': ('4.3281', 'M_W+, constant of 1/T^2 (proof display)'),
    'mp_c_a': ('4.3271', 'M_c+, kappa^2 coefficient of 1/(kappa T)'),
    'mp_c_b': ('34.6168', 'M_c+, constant of 1/(kappa T)'),
    'mp_c_c': ('1.2982', 'M_c+, kappa coefficient of 1/T^2'),
    'mp_c_d': ('25.9626', 'M_c+, constant of 1/T^2'),

    # M_{.,-} (h < 0)
    'mm_w_a': ('0.2405', 'M_W-, kappa^2 coefficient of 1/T^2'),
    'mm_w_b': ('0.7886', 'M_W-, kappa coefficient of 1/T^2'),
    'mm_w_c': ('4.3281', 'M_W-, constant of 1/T^2 (negated)'),
    'mm_n_a': ('1.4875', 'M_n-, kappa^2 coefficient of 1/T^2'),
    'mm_n_b': ('2.3602', 'M_n-, kappa coefficient of 1/T^2'),
    'mm_n_c': ('27.9028', 'M_n-, constant of 1/T^2 (negated)'),
    'mm_c_a': ('1.4424', 'M_c-, kappa^2 coefficient of 1/T^2'),
    'mm_c_b': ('1.7309', 'M_c-, kappa coefficient of 1/T^2'),
    'mm_c_c': ('25.9626', 'M_c-, constant of 1/T^2 (negated)'),

    # D = M_+ - M_-
    'dw_a': ('8.6562', 'D_W, constant of 1/T^2'),
    'dw_b': ('0.1971', 'D_W, kappa coefficient of 1/T^2'),
    'dw_c': ('0.2405', 'D_W, kappa^2 coefficient of 1/T^2'),
    'dn_a': ('55.8057', 'D_n, constant of 1/T^2'),
    'dn_b': ('0.5900', 'D_n, kappa coefficient of 1/T^2'),
    'dn_c': ('1.4875', 'D_n, kappa^2 coefficient of 1/T^2'),
    'dc_a': ('51.9252', 'D_c, constant of 1/T^2'),
    'dc_b': ('0.4327', 'D_c, kappa coefficient of 1/T^2'),
    'dc_c': ('1.4424', 'D_c, kappa^2 coefficient of 1/T^2'),

    # simplified estimates at kappa = sqrt(5) - 1
    'f_t1': ('7.0604', 'F, G, E: coefficient of 1/T'),
    'f_t2': ('5.0593', 'F, G: coefficient of 1/T^2'),
    'e_t2': ('5.0594', 'E: coefficient of 1/T^2'),
    'g_const': ('-2.9969', 'G, E: constant'),
    'g_t1': ('37.1145', 'G: coefficient of 1/T'),
    'g_t2': ('30.0910', 'G: coefficient of 1/T^2'),
    'h_t1': ('33.3542', 'H, E, truncation aggregate: coefficient of 1/(n T)'),
    'h_t2': ('27.5673', 'H, E, R: coefficient of 1/(n T^2)'),
    'e_t1': ('21.3270', 'E, truncation aggregate: coefficient of 1/T'),
    'e_t2c': ('18.7781', 'E, R: coefficient of 1/T^2'),
    'tf_lin': ('7.0604', 'T_F quadratic, linear coefficient'),
    'tf_const': ('10.1186', 'T_F quadratic, constant'),
    'tmin_c': ('14.2666', 'stationarity equation, constant'),
    'tmin_t1': ('32.4969', 'stationarity equation, coefficient of 1/T'),
    'tmin_nt1': ('55.1346', 'stationarity equation, coefficient of 1/(n T)'),
    't0_n': ('33.5251', 'T_0 equation, coefficient of 1/n'),
    'r_w': ('5.0593', 'R numerator, w coefficient'),
    'cmax_bound': ('0.5167', 'bound on R, largest c_max'),

    # final bounds
    'main_shift': ('33.5251', 'main bound, delta_K coefficient inside log'),
    'main_const': ('-3.4969', 'main bound, constant of the n_K bracket'),
    'main_tail': ('8.8590', 'main bound, constant'),
    'main_t': ('8.2822', 'main bound, additive shift of T'),
    'cheb_disc': ('2.2543', 'Chebyshev-type bound, sqrt(x) log-discriminant coefficient'),
    'cheb_degree': ('0.9722', 'Chebyshev-type bound, sqrt(x) degree coefficient'),
    'cheb_sqrt': ('9.0458', 'Chebyshev-type bound, sqrt(x) coefficient'),
    'cheb_const': ('7.0320', 'Chebyshev-type bound, constant'),
    'cheb_t': ('10', 'Chebyshev-type bound, fixed T'),
    'cheb_kappa': ('2', 'Chebyshev-type bound, fixed kappa'),

    # earlier explicit bounds
    'lo_disc': ('2', 'first earlier bound, log-discriminant offset'),
    'lo_degree': ('2', 'first earlier bound, degree offset'),
    'c13_scale': ('18.8', 'second earlier bound, argument scale'),
    'c13_disc': ('2.3', 'second earlier bound, log-discriminant offset'),
    'c13_degree': ('1.3', 'second earlier bound, degree offset'),
    'c13_log': ('0.3', 'second earlier bound, log x coefficient'),
    'c13_const': ('14.6', 'second earlier bound, constant'),
    'c15_disc': ('1.8', 'third earlier bound, log-discriminant offset'),
    'c15_degree': ('1.1', 'third earlier bound, degree offset'),
    'c15_log': ('1.2', 'third earlier bound, log x coefficient'),
    'c15_const': ('10.2', 'third earlier bound, constant'),

    # asymptotic expansion
    'asy_disc': ('7.9584', 'expanded form, log delta_K coefficient'),
    'asy_const': ('-5.9938', 'expanded form, constant'),
    'asy_reorg_disc': ('5.9584', 'reorganized forms, log Delta_K constant'),
    'asy_mid_n': ('-27.9752', 'intermediate form, degree constant'),
    'asy_last_n': ('-19.9752', 'reorganized form, degree constant'),
    'e_nu': ('15.7187', 'printed value of e * nu'),

    # Lambert W upper bound
    'w_upper': ('1.024', 'Lambert W upper bound coefficient'),

    # printed root of the T_F quadratic
    'tf_printed': ('8.282137', 'printed value of T_F'),
}


class PublishedConstants:
    """
    Read-only view over the parsed literals, plus the derived constants.

    ``kappa_default`` is sqrt(5) - 1, the minimiser of kappa*exp(2/kappa + kappa/2);
    ``nu`` is ((sqrt(5) - 1)/2) * exp(sqrt(5)).
    """

    def __init__(self, literals: Dict[str, tuple]):
        self._decimals = {name: Decimal(text) for name, (text, _) in literals.items()}
        self._values = {name: float(value) for name, value in self._decimals.items()}
        self.kappa_default = math.sqrt(5.0) - 1.0
        self.sqrt5 = math.sqrt(5.0)
        self.nu = (math.sqrt(5.0) - 1.0) / 2.0 * math.exp(math.sqrt(5.0))

    def __getattr__(self, name: str) -> float:
        try:
            return self.__dict__['_values'][name]
        except KeyError:
            raise AttributeError(f'Unknown constant: {name}') from None

    def decimal(self, name: str) -> Decimal:
        """The exact decimal literal behind ``name``."""
        return self._decimals[name]

    def names(self):
        return sorted(self._values)

    @contextmanager
    def overridden(self, name: str, value: float) -> Iterator['PublishedConstants']:
        """
        Temporarily replace one constant. Used by the self-test harness to
        prove that a corrupted constant is caught.
        """
        if name not in self._values:
            raise KeyError(f'Unknown constant: {name}')
        original = self._values[name]
        logger.warning(f'Constant {name} overridden: {original} -> {value}')
        self._values[name] = float(value)
        try:
            yield self
        finally:
            self._values[name] = original


C = PublishedConstants(LITERALS)
