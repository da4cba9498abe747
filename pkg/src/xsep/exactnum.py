"""Exact arithmetic on numbers of the form ``q * pi**(h/2)`` with rational ``q``.

Every closed-form probability handled by this package is a rational multiple of
an integer or half-integer power of pi.  Gamma values at positive
half-integers land in that set as well, so products and quotients of them can
be kept exact without a computer algebra system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "ExactReal",
    "as_half_integer",
    "binomial",
    "gamma_half",
    "log_gamma",
    "pochhammer",
]

RationalLike = Union[int, Fraction]


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # floats are binary rationals; keep them exact
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_half_integer(x) -> Fraction | None:
    """Return ``x`` as a Fraction if ``2*x`` is an integer, else None.

    Floats are accepted when they represent a half-integer exactly (``0.5``,
    ``2.0``), which is what lets the CLI hand decimals to exact paths.
    """
    try:
        q = _to_fraction(x)
    except TypeError:
        return None
    if (2 * q).denominator != 1:
        return None
    return q


@dataclass(frozen=True)
class ExactReal:
    """The number ``coeff * pi**(pi_half_exponent / 2)``.

    Canonical form: a zero coefficient forces a zero exponent, so structural
    equality is numeric equality.
    """

    coeff: Fraction
    pi_half_exponent: int = 0

    def __post_init__(self):
        coeff = _to_fraction(self.coeff)
        exponent = int(self.pi_half_exponent)
        if coeff == 0:
            exponent = 0
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "pi_half_exponent", exponent)

    @classmethod
    def coerce(cls, value) -> "ExactReal":
        if isinstance(value, ExactReal):
            return value
        return cls(_to_fraction(value), 0)

    @classmethod
    def pi_power(cls, half_exponent: int) -> "ExactReal":
        return cls(Fraction(1), half_exponent)

    @property
    def is_rational(self) -> bool:
        return self.pi_half_exponent == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} carries a factor of pi and is not rational")
        return self.coeff

    def __float__(self) -> float:
        if self.pi_half_exponent == 0:
            return float(self.coeff)
        # log-space keeps huge numerators/denominators from overflowing
        sign = -1.0 if self.coeff < 0 else 1.0
        a = abs(self.coeff)
        log_value = (
            math.log(a.numerator)
            - math.log(a.denominator)
            + 0.5 * self.pi_half_exponent * math.log(math.pi)
        )
        return sign * math.exp(log_value)

    def __mul__(self, other):
        try:
            other = ExactReal.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactReal(
            self.coeff * other.coeff, self.pi_half_exponent + other.pi_half_exponent
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = ExactReal.coerce(other)
        except TypeError:
            return NotImplemented
        if other.coeff == 0:
            raise ZeroDivisionError("division by an exact zero")
        return ExactReal(
            self.coeff / other.coeff, self.pi_half_exponent - other.pi_half_exponent
        )

    def __rtruediv__(self, other):
        try:
            other = ExactReal.coerce(other)
        except TypeError:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "ExactReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ExactReal(1) / (self ** (-n))
        return ExactReal(self.coeff**n, self.pi_half_exponent * n)

    def __neg__(self) -> "ExactReal":
        return ExactReal(-self.coeff, self.pi_half_exponent)

    def _aligned(self, other) -> "ExactReal":
        other = ExactReal.coerce(other)
        if self.coeff != 0 and other.coeff != 0 and (
            self.pi_half_exponent != other.pi_half_exponent
        ):
            raise ValueError(
                "sum of terms with different powers of pi is not representable"
            )
        return other

    def __add__(self, other):
        try:
            other = self._aligned(other)
        except TypeError:
            return NotImplemented
        exponent = self.pi_half_exponent if self.coeff != 0 else other.pi_half_exponent
        return ExactReal(self.coeff + other.coeff, exponent)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._aligned(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if isinstance(other, ExactReal):
            return (self.coeff, self.pi_half_exponent) == (
                other.coeff,
                other.pi_half_exponent,
            )
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeff == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeff)
        return hash((self.coeff, self.pi_half_exponent))

    def __str__(self) -> str:
        text = str(self.coeff)
        if self.pi_half_exponent:
            text += f" * pi^{Fraction(self.pi_half_exponent, 2)}"
        return text

    def __repr__(self) -> str:
        return f"ExactReal({self})"

    @classmethod
    def parse(cls, text: str) -> "ExactReal":
        """Inverse of ``str``: ``"16/3 * pi^-2"`` -> ExactReal(16/3, -4)."""
        head, sep, tail = text.partition("*")
        coeff = Fraction(head.strip())
        if not sep:
            return cls(coeff)
        tail = tail.strip()
        if not tail.startswith("pi^"):
            raise ValueError(f"malformed exact value: {text!r}")
        exponent = Fraction(tail[3:])
        if (2 * exponent).denominator != 1:
            raise ValueError(f"pi exponent must be a half-integer: {text!r}")
        return cls(coeff, int(2 * exponent))


def gamma_half(x) -> ExactReal:
    """Gamma at a positive integer or half-integer, exactly.

    >>> gamma_half(3)
    ExactReal(2)
    >>> gamma_half(Fraction(7, 2))
    ExactReal(15/8 * pi^1/2)
    """
    q = as_half_integer(x)
    if q is None:
        raise ValueError(f"gamma_half needs a half-integer argument, got {x!r}")
    if q <= 0:
        raise ValueError(f"gamma_half is defined here only for x > 0, got {x!r}")
    if q.denominator == 1:
        return ExactReal(math.factorial(q.numerator - 1))
    # Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
    n = (q.numerator - 1) // 2
    return ExactReal(
        Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), 1
    )


def pochhammer(t: RationalLike, n: int) -> Fraction:
    """Rising factorial ``t (t+1) ... (t+n-1)``; empty product for ``n = 0``."""
    if n < 0:
        raise ValueError("pochhammer length must be nonnegative")
    t = _to_fraction(t)
    result = Fraction(1)
    for i in range(n):
        result *= t + i
        if result == 0:
            break
    return result


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_gamma(x: float) -> float:
    """Natural log of Gamma for real ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)
