"""Argument checks shared by the estimators and the command line."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import List, Sequence

import numpy as np

from .surd import Surd, parse_surd
from .weights import PRESETS, ShiftVector, Weights

__all__ = [
    "ConfigError",
    "check_weights",
    "check_thresholds",
    "check_positive_int",
    "check_delta",
    "check_shift",
]


class ConfigError(ValueError):
    """Invalid user-supplied configuration."""


def check_weights(w, precision_bits: int = 128) -> Weights:
    if isinstance(w, Weights):
        return w
    try:
        if isinstance(w, str):
            return Weights.parse(w, precision_bits)
        return Weights(tuple(w), precision_bits)
    except (ValueError, SyntaxError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad weights {w!r}: {exc}; presets are {sorted(PRESETS)}") from exc


def _threshold(x):
    if isinstance(x, (Surd, Rational)) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        try:
            return parse_surd(x)
        except (ValueError, SyntaxError) as exc:
            raise ConfigError(f"bad threshold {x!r}: {exc}") from exc
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ConfigError(f"threshold must be finite, got {x}")
        return Fraction(float(x))
    if isinstance(x, np.integer):
        return int(x)
    raise ConfigError(f"unsupported threshold type {type(x).__name__}")


def check_thresholds(X, allow_zero: bool = False) -> List:
    """Flatten ``X`` (scalar, sequence or ``(n, 1)`` array) to a list of exact thresholds."""
    if isinstance(X, np.ndarray):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        elif X.ndim > 1:
            raise ConfigError(f"expected a column of thresholds, got shape {X.shape}")
        items = list(X.tolist()) if X.dtype != object else list(X)
    elif isinstance(X, (str, Surd, Rational, float)):
        items = [X]
    else:
        items = [x[0] if isinstance(x, (list, tuple)) and len(x) == 1 else x for x in X]
    out = [_threshold(x) for x in items]
    for t in out:
        s = t.sign() if isinstance(t, Surd) else (t > 0) - (t < 0)
        if s < 0 or (s == 0 and not allow_zero):
            raise ConfigError(f"thresholds must be positive, got {t}")
    return out


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    try:
        v = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc
    if v != value and not isinstance(value, str):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if v < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {v}")
    return v


def check_delta(delta) -> Fraction:
    d = Fraction(delta) if not isinstance(delta, str) else Fraction(delta)
    if not 0 < d < Fraction(1, 2):
        raise ConfigError(f"delta must lie in (0, 1/2), got {delta}")
    return d


def check_shift(u: Sequence, d: int, delta=Fraction(1, 10)) -> ShiftVector:
    if len(u) != d:
        raise ConfigError(f"shift has {len(u)} coordinates, weights have {d}")
    return ShiftVector(tuple(u), check_delta(delta))
