"""Argument checks shared by the public entry points."""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np


class UnsupportedParameterError(ValueError):
    """Raised when a closed form exists only for a narrower parameter range."""


def check_alpha(alpha, name: str = "alpha") -> float:
    value = float(alpha)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {alpha!r}")
    return value


def check_k(k, name: str = "k") -> float:
    value = float(k)
    if not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be a nonnegative finite number, got {k!r}")
    return value


def as_exact_integer(x) -> int | None:
    """``int(x)`` if ``x`` is integral (including floats like ``2.0``), else None."""
    if isinstance(x, bool):
        return None
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else None
    if isinstance(x, (float, np.floating)) and float(x).is_integer():
        return int(x)
    return None


def require_positive_integer(x, name: str) -> int:
    n = as_exact_integer(x)
    if n is None or n < 1:
        raise UnsupportedParameterError(
            f"{name} must be a positive integer for this closed form, got {x!r}"
        )
    return n


def require_nonnegative_integer(x, name: str) -> int:
    n = as_exact_integer(x)
    if n is None or n < 0:
        raise UnsupportedParameterError(
            f"{name} must be a nonnegative integer for this closed form, got {x!r}"
        )
    return n
