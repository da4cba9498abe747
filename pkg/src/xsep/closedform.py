"""Closed-form separability probabilities and the integrals behind them.

Exact results come back as :class:`~xsep.exactnum.ExactReal` (or plain
``Fraction`` where the value is always rational); parameters outside the exact
domain fall back to floating point through log-gamma.

Notation used throughout:

* ``alpha`` -- weight exponent of the Hilbert-Schmidt type measure
  (1/2 real, 1 complex, 2 quaternionic entries);
* ``k`` -- power of ``det xi`` in the induced measure;
* ``I(m, n)`` -- the double integral
  ``int_0^{1/2} ds int_0^b v^m {(a-v)^n sqrt((a-v)/(b-v)) + (b-v)^n sqrt((b-v)/(a-v))} dv``
  with ``a = ((1-s)/2)^2`` and ``b = (s/2)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ._validation import (
    as_exact_integer,
    check_alpha,
    check_k,
    require_nonnegative_integer,
    require_positive_integer,
)
from .exactnum import ExactReal, as_half_integer, binomial, gamma_half, log_gamma, pochhammer

__all__ = [
    "IntMN",
    "MeasureSpec",
    "TwoAlpha",
    "aux_sum_S",
    "aux_sum_S_direct",
    "i_alpha",
    "i_alpha_reciprocal",
    "incomplete_beta_poly",
    "induced_polynomial_factor",
    "integral_I",
    "integral_I_via_S",
    "min_degenerate_sep_prob",
    "nonsep_prob_alpha1_alt",
    "nonsep_prob_alpha1_gamma",
    "nonsep_prob_alpha2",
    "nonsep_prob_induced",
    "nonsep_prob_induced_poly",
    "nonsep_prob_induced_via_integrals",
    "norm_const",
    "norm_const_induced",
    "rel_nonsep_prob",
    "rel_nonsep_prob_alpha1",
    "rel_nonsep_prob_alpha1_3f2",
    "sep_prob",
    "sep_prob_asymptotic",
    "sep_prob_float",
    "sep_prob_gamma_ratio",
    "sigma",
    "sigma_branch",
    "sigma_branch_as_printed",
    "vwp_series",
]

Number = Union[ExactReal, Fraction, float]
HALF = Fraction(1, 2)
PI = ExactReal.pi_power(2)


@dataclass(frozen=True)
class IntMN:
    """``I(m, n)`` for nonnegative integers."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("I(m, n) needs m, n >= 0")


@dataclass(frozen=True)
class TwoAlpha:
    """``I(2 alpha, 0)`` for real ``alpha > 0``."""

    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)


IntegralSpec = Union[IntMN, TwoAlpha]


@dataclass(frozen=True)
class MeasureSpec:
    """Induced measure ``(det xi)^k dnu_alpha``."""

    alpha: float
    k: float = 0

    def __post_init__(self):
        check_alpha(self.alpha)
        check_k(self.k)


def _fact(n: int) -> int:
    return math.factorial(n)


def _gamma_exact(x) -> ExactReal:
    return gamma_half(x)


# --------------------------------------------------------------------------
# normalisation constants


def norm_const(alpha) -> Number:
    """``Gamma(4a+4) / (Gamma(a+1)^2 Gamma(a)^2)``; exact when ``2a`` is an integer."""
    check_alpha(alpha)
    a = as_half_integer(alpha)
    if a is not None:
        return _gamma_exact(4 * a + 4) / (_gamma_exact(a + 1) ** 2 * _gamma_exact(a) ** 2)
    a = float(alpha)
    return math.exp(log_gamma(4 * a + 4) - 2 * log_gamma(a + 1) - 2 * log_gamma(a))


def norm_const_induced(alpha, k=0) -> Number:
    """``Gamma(4a+4k+4) / (Gamma(k+a+1)^2 Gamma(k+1)^2 Gamma(a)^2)``."""
    if isinstance(alpha, MeasureSpec):
        alpha, k = alpha.alpha, alpha.k
    check_alpha(alpha)
    check_k(k)
    a, kk = as_half_integer(alpha), as_half_integer(k)
    if a is not None and kk is not None:
        return _gamma_exact(4 * a + 4 * kk + 4) / (
            _gamma_exact(kk + a + 1) ** 2 * _gamma_exact(kk + 1) ** 2 * _gamma_exact(a) ** 2
        )
    a, kf = float(alpha), float(k)
    return math.exp(
        log_gamma(4 * a + 4 * kf + 4)
        - 2 * log_gamma(kf + a + 1)
        - 2 * log_gamma(kf + 1)
        - 2 * log_gamma(a)
    )


# --------------------------------------------------------------------------
# the I-family


def _integral_mn(m: int, n: int) -> Fraction:
    return (
        Fraction(_fact(m) ** 2 * _fact(m + n + 1), 2 ** (2 * m + 2 * n + 3) * _fact(2 * m + n + 2))
        * pochhammer(HALF, n + 1)
        / pochhammer(HALF, m + n + 2)
    )


def _integral_two_alpha(alpha) -> Number:
    a = as_half_integer(alpha)
    if a is not None:
        power_of_two = ExactReal(Fraction(1, 2 ** (6 + int(8 * a))))
        return (
            PI
            * power_of_two
            * _gamma_exact(2 * a + 1) ** 2
            / (_gamma_exact(2 * a + Fraction(3, 2)) * _gamma_exact(2 * a + Fraction(5, 2)))
        )
    a = float(alpha)
    return math.exp(
        math.log(math.pi)
        - (6 + 8 * a) * math.log(2)
        + 2 * log_gamma(2 * a + 1)
        - log_gamma(2 * a + 1.5)
        - log_gamma(2 * a + 2.5)
    )


def integral_I(spec: IntegralSpec) -> Number:
    """Closed form of ``I(m, n)`` or ``I(2 alpha, 0)``.

    ``IntMN`` always gives a Fraction.  ``TwoAlpha`` gives an ExactReal when
    ``2 alpha`` is an integer and a float otherwise.
    """
    if isinstance(spec, IntMN):
        return _integral_mn(spec.m, spec.n)
    if isinstance(spec, TwoAlpha):
        return _integral_two_alpha(spec.alpha)
    raise TypeError(f"expected IntMN or TwoAlpha, got {type(spec).__name__}")


def aux_sum_S_direct(m: int, n: int) -> Fraction:
    """The double hypergeometric-type sum ``S(m, n)`` term by term."""
    total = Fraction(0)
    for i in range(m + 1):
        outer = pochhammer(-m, i) * pochhammer(n + 1, i) / (_fact(i) * pochhammer(m + n + 2, i))
        if outer == 0:
            continue
        for j in range(n + 1):
            inner = pochhammer(-n, j) * pochhammer(HALF - n, j) / (_fact(j) * pochhammer(HALF, j))
            total += outer * inner / (i + j + HALF)
    return total


def aux_sum_S(m: int, n: int) -> Fraction:
    """Closed-form value of ``S(m, n)``."""
    if m < 0 or n < 0:
        raise ValueError("S(m, n) needs m, n >= 0")
    return (
        Fraction(
            2 ** (2 * m + 2 * n) * _fact(m) * _fact(m + n) * _fact(m + n + 1),
            _fact(n) * _fact(n + 2 * m + 1),
        )
        * pochhammer(HALF, n)
        / pochhammer(HALF, m + n + 1)
    )


def integral_I_via_S(m: int, n: int) -> Fraction:
    """``I(m, n) = 2^(-4m-4n-5) B(m+1, n+2) S(m, n+1)``, using the direct double sum."""
    beta = Fraction(_fact(m) * _fact(n + 1), _fact(m + n + 2))
    return Fraction(1, 2 ** (4 * m + 4 * n + 5)) * beta * aux_sum_S_direct(m, n + 1)


def _vwp_ratio(i: int, two_a: float) -> float:
    # t_{i+1} / t_i for sum (-2a)_i (2)_i^2 (1/2)_i / (i! (2a+3)_i (1)_i (5/2)_i)
    return (
        (-two_a + i) * (2 + i) ** 2 * (0.5 + i)
        / ((i + 1) * (two_a + 3 + i) * (1 + i) * (2.5 + i))
    )


def vwp_series(alpha, tol: float = 1e-12, max_terms: int = 10_000_000):
    """Very-well-poised series behind ``I(2 alpha, 0)``.

    ``I(2a, 0) = 2^(-8a-2) / (3 (2a+1)(2a+2)) * vwp_series(a)``.

    Terminates (and is returned as an exact Fraction) when ``2 alpha`` is a
    positive integer.  Otherwise terms are summed until the comparison bound
    ``C * sum_{n>N} n^(-2a-1)``, with ``C`` fitted to the last term, drops below
    ``tol`` times the partial sum.
    """
    check_alpha(alpha)
    a = as_half_integer(alpha)
    if a is not None:
        two_a = int(2 * a)
        total = Fraction(0)
        for i in range(two_a + 1):
            total += (
                pochhammer(-two_a, i) * pochhammer(2, i) ** 2 * pochhammer(HALF, i)
                / (_fact(i) * pochhammer(two_a + 3, i) * _fact(i) * pochhammer(Fraction(5, 2), i))
            )
        return total

    two_a = 2.0 * float(alpha)
    terms = [1.0]
    term = 1.0
    partial = 1.0
    for i in range(max_terms):
        term *= _vwp_ratio(i, two_a)
        terms.append(term)
        partial += term
        n = i + 1
        # sum_{j>n} j^(-p-1) <= n^(-p) / p with p = 2a
        tail = abs(term) * n / two_a
        if n > two_a + 2 and tail <= tol * abs(partial):
            return math.fsum(terms)
    raise RuntimeError(f"vwp_series did not reach tol={tol} in {max_terms} terms")


# --------------------------------------------------------------------------
# Hilbert-Schmidt type measure: Pr{det xi^PT >= 0}


def i_alpha(alpha) -> Number:
    """The reduced integral ``I_alpha = 4 / alpha^2 * I(2 alpha, 0)``."""
    check_alpha(alpha)
    a = as_half_integer(alpha)
    if a is not None:
        return ExactReal(4 / a**2) * _integral_two_alpha(a)
    return 4 / float(alpha) ** 2 * _integral_two_alpha(alpha)


def i_alpha_reciprocal(alpha) -> int:
    """``1 / I_alpha`` as an integer, valid when ``2 alpha`` is a positive integer."""
    a = as_half_integer(alpha)
    if a is None or a <= 0:
        raise ValueError(f"i_alpha_reciprocal needs 2*alpha a positive integer, got {alpha!r}")
    two_a = int(2 * a)
    return (
        2
        * (2 * two_a + 3)
        * binomial(two_a + 2, 2) ** 2
        * binomial(2 * two_a + 1, two_a + 2) ** 2
    )


def sep_prob_float(alpha) -> float:
    """Separability probability from the quarter-integer gamma ratio, in floats."""
    a = check_alpha(alpha)
    return math.exp(
        2 * log_gamma(a + 0.5)
        + log_gamma(a + 1.5)
        - log_gamma(a + 0.75)
        - log_gamma(a + 1.0)
        - log_gamma(a + 1.25)
    ) / math.sqrt(2 * math.pi)


def sep_prob(alpha) -> Number:
    """``Pr{det xi^PT >= 0}`` under the normalised measure with parameter ``alpha``.

    Computed as ``c_alpha * I_alpha``: exact for ``2 alpha`` integral, float
    otherwise.

    >>> sep_prob(1)
    ExactReal(2/5)
    >>> sep_prob(Fraction(1, 2))
    ExactReal(16/3 * pi^-2)
    """
    check_alpha(alpha)
    if as_half_integer(alpha) is not None:
        return norm_const(alpha) * i_alpha(alpha)
    return sep_prob_float(alpha)


def sep_prob_gamma_ratio(alpha) -> ExactReal:
    """Second closed form, with the quarter-integer pair removed by duplication.

    ``Gamma(a+3/4) Gamma(a+5/4) = 2^(-2a-1/2) sqrt(pi) Gamma(2a+3/2)`` turns the
    ratio into ``2^(2a) Gamma(a+1/2)^2 Gamma(a+3/2) / (pi Gamma(a+1) Gamma(2a+3/2))``.
    """
    a = as_half_integer(alpha)
    if a is None or a <= 0:
        raise ValueError("exact gamma-ratio form needs 2*alpha a positive integer")
    two_a = int(2 * a)
    return (
        ExactReal(Fraction(2) ** two_a)
        * _gamma_exact(a + HALF) ** 2
        * _gamma_exact(a + Fraction(3, 2))
        / (PI * _gamma_exact(a + 1) * _gamma_exact(2 * a + Fraction(3, 2)))
    )


def sep_prob_asymptotic(alpha) -> float:
    """Large-alpha comparator ``1 / sqrt(2 pi alpha)``."""
    return 1.0 / math.sqrt(2 * math.pi * check_alpha(alpha))


def min_degenerate_sep_prob(alpha) -> Number:
    """Separability probability on the boundary component ``s5 = 1``: half of ``p(alpha)``."""
    p = sep_prob(alpha)
    if isinstance(p, ExactReal):
        return p * Fraction(1, 2)
    return p / 2


# --------------------------------------------------------------------------
# induced measure (det xi)^k dnu_alpha, integer alpha


def nonsep_prob_induced(alpha, k=0) -> Fraction | float:
    """``Pr{det xi^PT <= 0}`` under ``c_{alpha,k} (det xi)^k dnu_alpha``.

    Exact for integer ``k``; non-integer ``k`` is continued through log-gamma
    and carries no exactness claim.  Only integer ``alpha`` is supported.
    """
    if isinstance(alpha, MeasureSpec):
        alpha, k = alpha.alpha, alpha.k
    a = require_positive_integer(alpha, "alpha")
    check_k(k)
    kk = as_exact_integer(k)
    if kk is not None:
        total = Fraction(0)
        for j in range(a):
            total += Fraction(
                2 * _fact(2 * a + 2 * kk + 1) ** 2 * _fact(2 * a + kk - j - 1) ** 2,
                _fact(a + kk) ** 3 * _fact(a - j - 1) * _fact(4 * a + 3 * kk - j + 1),
            )
        return total
    kf = float(k)
    terms = [
        2.0
        * math.exp(
            2 * log_gamma(2 * a + 2 * kf + 2)
            + 2 * log_gamma(2 * a + kf - j)
            - 3 * log_gamma(a + kf + 1)
            - log_gamma(a - j)
            - log_gamma(4 * a + 3 * kf - j + 2)
        )
        for j in range(a)
    ]
    return math.fsum(terms)


def nonsep_prob_induced_via_integrals(alpha, k=0) -> Fraction:
    """The same probability assembled from incomplete-beta terms and ``I(m, n)``.

    ``2 c_{a,k} B(a, k+1) sum_j (-1)^j (1-a)_j (k+j+1)! / ((k+1)_{j+1} (1/2)_{k+j+2}) I(2a+k-1-j, k+j+1)``
    """
    a = require_positive_integer(alpha, "alpha")
    kk = require_nonnegative_integer(k, "k")
    beta = Fraction(_fact(a - 1) * _fact(kk), _fact(a + kk))
    total = Fraction(0)
    for j in range(a):
        total += (
            (-1) ** j
            * pochhammer(1 - a, j)
            * _fact(kk + j + 1)
            / (pochhammer(kk + 1, j + 1) * pochhammer(HALF, kk + j + 2))
            * _integral_mn(2 * a + kk - 1 - j, kk + j + 1)
        )
    return 2 * norm_const_induced(a, kk).to_fraction() * beta * total


def induced_polynomial_factor(alpha, k) -> Fraction:
    """``sum_j (-1)^j (a+k+1)_{a-1-j}^2 (-1-3k-4a)_j / ((a-1-j)! (a+k+1))``.

    For ``alpha >= 2`` this is a polynomial in ``k`` of degree ``2 alpha - 3``.
    The factorial is ``(a-1-j)!``, one per term; a common ``(a-1)!`` agrees
    only for ``alpha <= 2``.
    """
    a = require_positive_integer(alpha, "alpha")
    kq = Fraction(k)
    total = Fraction(0)
    for j in range(a):
        total += Fraction(
            (-1) ** j * pochhammer(a + kq + 1, a - 1 - j) ** 2 * pochhammer(-1 - 3 * kq - 4 * a, j),
            _fact(a - 1 - j),
        )
    return total / (a + kq + 1)


def nonsep_prob_induced_poly(alpha, k=0) -> Fraction:
    """Gamma prefactor times :func:`induced_polynomial_factor`."""
    a = require_positive_integer(alpha, "alpha")
    kk = require_nonnegative_integer(k, "k")
    prefactor = Fraction(
        _fact(2 * a + 2 * kk + 2) ** 2, 2 * _fact(a + kk + 1) * _fact(4 * a + 3 * kk + 1)
    )
    return prefactor * induced_polynomial_factor(a, kk)


def nonsep_prob_alpha1_gamma(k) -> Fraction:
    """``2 Gamma(2k+4)^2 / (Gamma(k+2) Gamma(3k+6))``."""
    k = require_nonnegative_integer(k, "k")
    return Fraction(2 * _fact(2 * k + 3) ** 2, _fact(k + 1) * _fact(3 * k + 5))


def nonsep_prob_alpha1_alt(k) -> Fraction:
    """``2^(4k+7) (1/2)_{k+2}^2 / (3^(3k+5) (1/3)_{k+2} (2/3)_{k+2})``."""
    k = require_nonnegative_integer(k, "k")
    return (
        Fraction(2 ** (4 * k + 7), 3 ** (3 * k + 5))
        * pochhammer(HALF, k + 2) ** 2
        / (pochhammer(Fraction(1, 3), k + 2) * pochhammer(Fraction(2, 3), k + 2))
    )


def nonsep_prob_alpha2(k) -> Fraction:
    """``(2/3) (k+6) Gamma(2k+6)^2 / (Gamma(k+3) Gamma(3k+9))``."""
    k = require_nonnegative_integer(k, "k")
    return Fraction(2 * (k + 6) * _fact(2 * k + 5) ** 2, 3 * _fact(k + 2) * _fact(3 * k + 8))


def incomplete_beta_poly(alpha, k, d0):
    """``int_{d0}^1 v^(alpha-1) (1-v)^k dv`` by the finite antiderivative sum.

    Works in exact arithmetic when ``d0`` is a Fraction and ``k`` an integer.
    """
    a = require_positive_integer(alpha, "alpha")
    check_k(k)
    if not 0 <= d0 <= 1:
        raise ValueError(f"d0 must lie in [0, 1], got {d0!r}")
    kk = as_exact_integer(k)
    exact = kk is not None and isinstance(d0, (int, Fraction))
    if exact:
        total = Fraction(0)
        for j in range(a):
            total += (
                (-1) ** j * pochhammer(1 - a, j) / pochhammer(kk + 1, j + 1)
                * Fraction(d0) ** (a - 1 - j) * (1 - Fraction(d0)) ** (kk + j + 1)
            )
        return total
    kf, x = float(k), float(d0)
    terms = []
    for j in range(a):
        coeff = (-1) ** j * float(pochhammer(1 - a, j))
        rising = math.prod(kf + 1 + i for i in range(j + 1))
        terms.append(coeff / rising * x ** (a - 1 - j) * (1 - x) ** (kf + j + 1))
    return math.fsum(terms)


# --------------------------------------------------------------------------
# Pr{det xi^PT <= det xi}


def _check_sigma_args(k, alpha, i):
    kk = require_nonnegative_integer(k, "k")
    a = require_positive_integer(alpha, "alpha")
    if not isinstance(i, int) or not 0 <= i <= kk + a:
        raise ValueError(f"i must be an integer in [0, k + alpha] = [0, {kk + a}], got {i!r}")
    return kk, a


def sigma(k, alpha, i) -> Fraction:
    """Coefficient of ``(d1 - d2)^i d2^(2k+2a-i)`` after the ``s4, s5`` integrations.

    Direct finite sum over ``j``; this is the reference definition.
    """
    k, a = _check_sigma_args(k, alpha, i)
    total = Fraction(0)
    for j in range(max(0, i - k - 1), a):
        total += Fraction(
            _fact(k) * _fact(a - 1) * _fact(2 * a - 2 - j) * _fact(2 * k + j - i + 1),
            _fact(i) * _fact(a - 1 - j) * _fact(k + 1 + j - i) * _fact(2 * k + 2 * a - i),
        )
    return total


def _sigma_low_branch(k: int, a: int, i: int, top: int) -> Fraction:
    prefactor = Fraction(
        _fact(k) * _fact(2 * k + 1 - i) * _fact(2 * a - 2),
        _fact(i) * _fact(k + 1 - i) * _fact(top),
    )
    series = Fraction(0)
    for j in range(a):
        series += (
            pochhammer(1 - a, j) * pochhammer(2 * k + 2 - i, j)
            / (pochhammer(2 - 2 * a, j) * pochhammer(k + 2 - i, j))
        )
    return prefactor * series


def _sigma_high_branch(k: int, a: int, i: int) -> Fraction:
    return Fraction(binomial(k + a, i), (a * binomial(k + a, a)) ** 2)


def sigma_branch(k, alpha, i) -> Fraction:
    """Two-branch closed form of :func:`sigma`.

    ``0 <= i <= k``: terminating 2F1-type sum with prefactor over ``(2k+2a-i)!``;
    ``k+1 <= i <= k+a``: ``{a C(k+a, a)}^(-2) C(k+a, i)``.
    """
    k, a = _check_sigma_args(k, alpha, i)
    if i <= k:
        return _sigma_low_branch(k, a, i, 2 * k + 2 * a - i)
    return _sigma_high_branch(k, a, i)


def sigma_branch_as_printed(k, alpha, i) -> Fraction:
    """Low branch with ``(2k+2a-1)!`` in the denominator, as it appears in print.

    Differs from :func:`sigma` by the factor ``(2k+2a-i)! / (2k+2a-1)!`` and
    is kept so that the discrepancy stays visible to regression tests.
    """
    k, a = _check_sigma_args(k, alpha, i)
    if i <= k:
        return _sigma_low_branch(k, a, i, 2 * k + 2 * a - 1)
    return _sigma_high_branch(k, a, i)


def rel_nonsep_prob(alpha, k=0) -> Fraction:
    """``Pr{det xi^PT <= det xi}`` for integer ``alpha >= 1`` and integer ``k >= 0``.

    ``2 c_{a,k} sum_i sigma(k, a, i) i! / (1/2)_{i+1} I(2k+2a-i, i)``
    """
    if isinstance(alpha, MeasureSpec):
        alpha, k = alpha.alpha, alpha.k
    a = require_positive_integer(alpha, "alpha")
    kk = require_nonnegative_integer(k, "k")
    total = Fraction(0)
    for i in range(kk + a + 1):
        total += (
            sigma(kk, a, i) * _fact(i) / pochhammer(HALF, i + 1)
            * _integral_mn(2 * kk + 2 * a - i, i)
        )
    return 2 * norm_const_induced(a, kk).to_fraction() * total


def rel_nonsep_prob_alpha1(k) -> Fraction:
    """``alpha = 1`` case as a binomial sum over ``I(2k+2-j, j)``."""
    k = require_nonnegative_integer(k, "k")
    total = Fraction(0)
    for j in range(k + 2):
        total += (
            binomial(k + 1, j) * _fact(j)
            / ((k + 1) * (2 * k + 2 - j) * pochhammer(HALF, j + 1))
            * _integral_mn(2 * k + 2 - j, j)
        )
    return 2 * norm_const_induced(1, k).to_fraction() * total


def rel_nonsep_prob_alpha1_3f2(k) -> Fraction:
    """``alpha = 1`` case as a prefactor times a truncated 3F2 sum."""
    k = require_nonnegative_integer(k, "k")
    prefactor = (
        Fraction(2) ** (2 * k - 1)
        * pochhammer(Fraction(3, 2), k) ** 2
        * pochhammer(Fraction(5, 2), k)
        / (_fact(k + 1) * pochhammer(Fraction(5, 2), 2 * k + 1))
    )
    series = Fraction(0)
    for j in range(k + 2):
        series += (
            pochhammer(-k - 1, j) * pochhammer(-4 * k - 6, j)
            / (pochhammer(-2 * k - 2, j) * pochhammer(-2 * k - 1, j))
        )
    return prefactor * series
