"""Weight vectors, shift vectors and named presets."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Tuple, Union

import mpmath
import numpy as np

from .numeric import DEFAULT_PREC, to_mpf
from .surd import Surd, parse_surd

__all__ = ["Weights", "ShiftVector", "PRESETS", "nearest_int_dist_exact"]

PRESETS = {
    "sqrt2": "1,sqrt2",
    "golden": "1,phi",
    "d3": "1,sqrt2,sqrt3",
    "sqrt235": "sqrt2,sqrt3,sqrt5",
    "d4": "1,sqrt2,sqrt3,sqrt5",
    "rational": "1,3/2",
}


def _coerce_weight(x):
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Surd(x)
    if isinstance(x, str):
        return parse_surd(x)
    return x  # numeric: float or mpf


@dataclass(frozen=True)
class Weights:
    """Positive weights ``w_1..w_d``.

    Exact weights are :class:`Surd` values (rationals included), for which
    every boundary question is decided exactly.  Anything else is carried as
    an ``mpf`` at ``precision_bits`` and treated as an approximation.
    """

    values: Tuple
    precision_bits: int = DEFAULT_PREC
    _floats: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = tuple(_coerce_weight(v) for v in self.values)
        if not vals:
            raise ValueError("need at least one weight")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if not all(isinstance(v, Surd) for v in vals):
            vals = tuple(to_mpf(v, self.precision_bits) for v in vals)
        for v in vals:
            if (v.sign() if isinstance(v, Surd) else mpmath.sign(v)) <= 0:
                raise ValueError(f"weights must be positive, got {v}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_floats", np.array([float(v) for v in vals], dtype=float))

    @classmethod
    def parse(cls, text: str, precision_bits: int = DEFAULT_PREC) -> "Weights":
        """``"1,sqrt2,sqrt3"`` or a preset name such as ``"golden"``."""
        text = PRESETS.get(text.strip(), text)
        return cls(tuple(parse_surd(p) for p in text.split(",") if p.strip()), precision_bits)

    @classmethod
    def preset(cls, name: str, precision_bits: int = DEFAULT_PREC) -> "Weights":
        if name not in PRESETS:
            raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return cls.parse(PRESETS[name], precision_bits)

    @property
    def d(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return isinstance(self.values[0], Surd)

    @property
    def floats(self) -> np.ndarray:
        return self._floats

    def mpf_values(self, prec: int = None):
        return tuple(to_mpf(v, prec or self.precision_bits) for v in self.values)

    def normalized(self):
        """Unit vector ``w / |w|_2`` as ``mpf``."""
        with mpmath.workprec(self.precision_bits):
            v = self.mpf_values()
            norm = mpmath.sqrt(mpmath.fsum(x * x for x in v))
            return tuple(x / norm for x in v)

    def product(self):
        with mpmath.workprec(self.precision_bits):
            out = mpmath.mpf(1)
            for x in self.mpf_values():
                out *= x
            return out

    def dot(self, x: Sequence):
        """``w . x`` exactly (Surd) or as ``mpf``."""
        if self.exact:
            acc = Surd(0)
            for wj, xj in zip(self.values, x):
                acc = acc + wj * Fraction(xj)
            return acc
        with mpmath.workprec(self.precision_bits):
            return mpmath.fsum(wj * to_mpf(xj, self.precision_bits) for wj, xj in zip(self.values, x))

    def coerce_threshold(self, t):
        """Bring a threshold into this vector's number kind."""
        if self.exact:
            if isinstance(t, Surd):
                return t
            if isinstance(t, (int, Rational)) and not isinstance(t, bool):
                return Surd(t)
            if isinstance(t, float):
                return Surd(Fraction(t))
            if isinstance(t, str):
                return parse_surd(t)
            raise TypeError(f"exact weights need an exact threshold, got {type(t).__name__}")
        if isinstance(t, str):
            t = parse_surd(t)
        return to_mpf(t, self.precision_bits)

    def scaled(self, c) -> "Weights":
        return Weights(tuple(v * c for v in self.values), self.precision_bits)

    def __len__(self):
        return self.d

    def __str__(self):
        return ",".join(str(v) for v in self.values)


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def nearest_int_dist_exact(x: Fraction) -> Fraction:
    f = _frac(x)
    return min(f, 1 - f)


@dataclass(frozen=True)
class ShiftVector:
    """Shift ``u`` with margin ``delta``; ``in_U`` tells whether every
    coordinate sits at distance ``>= delta`` from the integers."""

    u: Tuple[Fraction, ...]
    delta: Fraction = Fraction(1, 10)

    def __post_init__(self):
        u = tuple(Fraction(x) if not isinstance(x, str) else Fraction(x) for x in self.u)
        delta = Fraction(self.delta)
        if not 0 < delta < Fraction(1, 2):
            raise ValueError("delta must lie in (0, 1/2)")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "delta", delta)

    @property
    def in_U(self) -> bool:
        return all(nearest_int_dist_exact(x) >= self.delta for x in self.u)

    @property
    def frac(self) -> Tuple[Fraction, ...]:
        return tuple(_frac(x) for x in self.u)

    def __len__(self):
        return len(self.u)


def as_weights(w: Union[Weights, str, Sequence], precision_bits: int = DEFAULT_PREC) -> Weights:
    if isinstance(w, Weights):
        return w
    if isinstance(w, str):
        return Weights.parse(w, precision_bits)
    return Weights(tuple(w), precision_bits)
