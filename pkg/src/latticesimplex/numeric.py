"""Conversions between the exact and multiprecision number kinds."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath

from .surd import Surd

__all__ = ["DEFAULT_PREC", "to_mpf", "is_exact_rational", "to_fraction"]

DEFAULT_PREC = 128


def is_exact_rational(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool) or (
        isinstance(x, Surd) and x.is_rational()
    )


def to_fraction(x) -> Fraction:
    if isinstance(x, Surd):
        return x.to_fraction()
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"{type(x).__name__} is not rational")


def to_mpf(x, prec: int = DEFAULT_PREC):
    """Round any supported scalar to an ``mpf`` with ``prec`` bits."""
    if isinstance(x, Surd):
        return x.to_mpf(prec)
    with mpmath.workprec(prec):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, str):
            return mpmath.mpf(x)
        return +mpmath.mpf(x)
