"""Continued fractions and multiplicative approximability of incline rows.

Distances ``<theta m>`` for long scans are computed in 104-bit fixed point:
``{theta}`` is stored as four 26-bit digits and multiplied by ``m`` with
exact int64 carries, so the fractional part is good to ``m * 2^-104`` for
every ``m < 2^36``.  Plain float64 would lose ``log2 m`` bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterator, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .numeric import DEFAULT_PREC
from .surd import Surd, parse_surd
from .weights import Weights, as_weights

__all__ = [
    "PrecisionExhaustedError",
    "InsufficientDataError",
    "ContinuedFraction",
    "continued_fraction",
    "nearest_int_dist",
    "FracKernel",
    "ApproxMin",
    "mult_approx_min",
    "incline_matrix",
    "incline_rows",
    "ApproximabilityProfile",
    "InclineProfile",
    "approximability_profile",
    "incline_profile",
    "estimate_kappa",
    "hl_partial_quotient_bound",
]

_BITS = 104
_DIGIT = 26
_MASK = (1 << _DIGIT) - 1
_M_LIMIT = 1 << 36
_CHUNK = 1 << 18


class PrecisionExhaustedError(ArithmeticError):
    """The input does not carry enough precision for the requested output."""


class InsufficientDataError(ValueError):
    pass


# continued fractions --------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients ``a_0; a_1, a_2, ...`` and their convergents."""

    a: Tuple[int, ...]
    exact: bool = False

    def __post_init__(self):
        if not self.a:
            raise ValueError("empty expansion")
        if any(x < 1 for x in self.a[1:]):
            raise ValueError("partial quotients beyond a_0 must be >= 1")

    def __len__(self):
        return len(self.a)

    def __getitem__(self, j):
        return self.a[j]

    def convergents(self) -> List[Tuple[int, int]]:
        """``[(p_0, q_0), (p_1, q_1), ...]``."""
        out = []
        p0, q0, p1, q1 = 1, 0, self.a[0], 1
        out.append((p1, q1))
        for aj in self.a[1:]:
            p0, q0, p1, q1 = p1, q1, aj * p1 + p0, aj * q1 + q0
            out.append((p1, q1))
        return out

    def value(self) -> Fraction:
        p, q = self.convergents()[-1]
        return Fraction(p, q)

    def __str__(self):
        head, tail = self.a[0], self.a[1:]
        return f"[{head}; {', '.join(map(str, tail))}]" if tail else f"[{head}]"


def _cf_exact(x, n_terms: int) -> Tuple[int, ...]:
    out = []
    for _ in range(n_terms):
        a = x.floor() if isinstance(x, Surd) else math.floor(x)
        out.append(int(a))
        x = x - a
        if not x:
            break
        x = 1 / x
    return tuple(out)


def _cf_interval(lo: Fraction, hi: Fraction, n_terms: int) -> Tuple[Tuple[int, ...], bool]:
    """Common partial quotients of every number in ``[lo, hi]``."""
    out = []
    for _ in range(n_terms):
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            return tuple(out), False
        out.append(a_lo)
        lo, hi = lo - a_lo, hi - a_lo
        if lo == 0:
            return tuple(out), hi == 0
        lo, hi = 1 / hi, 1 / lo
    return tuple(out), True


def continued_fraction(x, n_terms: int = 20, precision_bits: Optional[int] = None) -> ContinuedFraction:
    """Expansion of ``x`` to ``n_terms`` partial quotients (fewer if ``x`` is rational).

    Surds and rationals are expanded exactly.  An ``mpf`` (or float) is read as
    an interval one unit in the last place wide, and only quotients shared by
    the whole interval are returned; if that gives fewer than ``n_terms``
    :class:`PrecisionExhaustedError` is raised.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if isinstance(x, str):
        x = parse_surd(x)
    if isinstance(x, Surd):
        if x.is_rational():
            x = x.to_fraction()
        else:
            return ContinuedFraction(_cf_exact(x, n_terms), exact=True)
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return ContinuedFraction(_cf_exact(Fraction(x), n_terms), exact=True)

    prec = precision_bits or (53 if isinstance(x, float) else mpmath.mp.prec)
    with mpmath.workprec(prec):
        v = mpmath.mpf(x)
    man, exp = v.man_exp if v else (0, 0)
    centre = Fraction(int(man)) * Fraction(2) ** int(exp)
    ulp = Fraction(2) ** (int(exp) + max(0, int(man).bit_length() - prec)) if v else Fraction(1, 1 << prec)
    a, complete = _cf_interval(centre - ulp, centre + ulp, n_terms)
    if len(a) < n_terms and not complete:
        raise PrecisionExhaustedError(
            f"only {len(a)} of {n_terms} partial quotients are determined at {prec} bits"
        )
    return ContinuedFraction(a, exact=False)


# distances to the integers -----------------------------------------------

def nearest_int_dist(x):
    """``<x> = min({x}, 1 - {x})`` in the number kind of ``x``."""
    if isinstance(x, str):
        x = parse_surd(x)
    if isinstance(x, Surd):
        f = x - x.floor()
        return min(f, 1 - f)
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        x = Fraction(x)
        f = x - (x.numerator // x.denominator)
        return min(f, 1 - f)
    if isinstance(x, mpmath.mpf):
        f = x - mpmath.floor(x)
        return min(f, 1 - f)
    f = x - math.floor(x)
    return min(f, 1.0 - f)


def _fixed_frac(theta, prec: int) -> Tuple[int, Optional[int]]:
    """``floor({theta} 2^104)`` and, for rational theta, its denominator."""
    if isinstance(theta, str):
        theta = parse_surd(theta)
    if isinstance(theta, Surd) and theta.is_rational():
        theta = theta.to_fraction()
    if isinstance(theta, (int, Rational, float)) and not isinstance(theta, bool):
        q = Fraction(theta)
        scaled = (q.numerator << _BITS) // q.denominator
        return scaled & ((1 << _BITS) - 1), q.denominator
    if isinstance(theta, Surd):
        lo, _ = theta.interval(_BITS)
        return lo & ((1 << _BITS) - 1), None
    with mpmath.workprec(max(prec, _BITS + 40)):
        v = mpmath.mpf(theta)
        f = v - mpmath.floor(v)
        return int(mpmath.floor(mpmath.ldexp(f, _BITS))), None


class FracKernel:
    """Vectorised ``{theta m}`` and ``<theta m>`` for integer arrays ``m``.

    Rational ``theta = p/q`` is flagged: ``<theta m>`` is set to exactly 0
    where ``q | m``.
    """

    def __init__(self, theta, precision_bits: int = DEFAULT_PREC):
        self.theta = theta
        fixed, self.denominator = _fixed_frac(theta, precision_bits)
        self._digits = np.array(
            [(fixed >> (_DIGIT * (3 - i))) & _MASK for i in range(4)], dtype=np.int64
        )

    @property
    def rational(self) -> bool:
        return self.denominator is not None

    def _product_digits(self, m: np.ndarray) -> List[np.ndarray]:
        if m.size and (m.min() < 0 or m.max() >= _M_LIMIT):
            raise ValueError("m must lie in [0, 2^36)")
        out = [None] * 4
        carry = np.zeros_like(m)
        for i in range(3, -1, -1):
            p = self._digits[i] * m + carry
            out[i] = p & _MASK
            carry = p >> _DIGIT
        return out

    @staticmethod
    def _to_float(dig: List[np.ndarray]) -> np.ndarray:
        acc = np.zeros(dig[0].shape)
        for i in range(3, -1, -1):
            acc += np.ldexp(dig[i].astype(float), -_DIGIT * (i + 1))
        return acc

    def frac(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        return self._to_float(self._product_digits(m))

    def dist(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        dig = self._product_digits(m)
        upper = dig[0] >= (1 << (_DIGIT - 1))
        # complement 2^104 - X, digit by digit
        comp = [_MASK - d for d in dig]
        carry = np.ones_like(m)
        for i in range(3, -1, -1):
            s = comp[i] + carry
            comp[i] = s & _MASK
            carry = s >> _DIGIT
        zero = (dig[0] == 0) & (dig[1] == 0) & (dig[2] == 0) & (dig[3] == 0)
        out = np.where(upper, self._to_float(comp), self._to_float(dig))
        out[zero] = 0.0
        if self.rational and self.denominator < _M_LIMIT:
            out[m % self.denominator == 0] = 0.0
        return out

    def zero_mask(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        return self.dist(m) == 0.0


def _chunks(m_lo: int, m_hi: int) -> Iterator[np.ndarray]:
    for start in range(m_lo, m_hi + 1, _CHUNK):
        yield np.arange(start, min(m_hi, start + _CHUNK - 1) + 1, dtype=np.int64)


def _kernels(theta: Sequence, prec: int) -> List[FracKernel]:
    if not len(theta):
        raise ValueError("need at least one incline")
    return [t if isinstance(t, FracKernel) else FracKernel(t, prec) for t in theta]


def _dist_product(kernels: Sequence[FracKernel], m: np.ndarray) -> np.ndarray:
    out = np.ones(m.shape)
    for k in kernels:
        out *= k.dist(m)
    return out


# multiplicative approximability -----------------------------------------

@dataclass(frozen=True)
class ApproxMin:
    value: float
    argmin: int
    degenerate: bool = False


def mult_approx_min(theta: Sequence, M: int, kappa: float = 0.0,
                    precision_bits: int = DEFAULT_PREC) -> ApproxMin:
    """Minimum of ``m^{1+kappa} prod_l <theta_l m>`` over ``1 <= m <= M``.

    A rational incline makes the product vanish; that is reported through
    ``degenerate`` with the first such ``m`` rather than raised.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    kernels = _kernels(theta, precision_bits)
    best, arg = math.inf, 0
    for m in _chunks(1, M):
        v = _dist_product(kernels, m)
        if not v.all():
            return ApproxMin(0.0, int(m[np.flatnonzero(v == 0)[0]]), True)
        v *= m.astype(float) ** (1.0 + kappa)
        i = int(np.argmin(v))
        if v[i] < best:
            best, arg = float(v[i]), int(m[i])
    return ApproxMin(best, arg, False)


def incline_matrix(w) -> List[list]:
    """``theta[j][l] = w_l / w_j``; exact for surd weights, ``mpf`` otherwise."""
    w = as_weights(w)
    vals = w.values
    if w.exact:
        inv = [1 / v for v in vals]
        return [[Surd(1) if j == l else vals[l] * inv[j] for l in range(w.d)] for j in range(w.d)]
    with mpmath.workprec(w.precision_bits):
        return [[mpmath.mpf(1) if j == l else vals[l] / vals[j] for l in range(w.d)] for j in range(w.d)]


def incline_rows(w) -> List[tuple]:
    """Off-diagonal part of each row of the incline matrix."""
    th = incline_matrix(w)
    return [tuple(x for l, x in enumerate(row) if l != j) for j, row in enumerate(th)]


@dataclass
class ApproximabilityProfile:
    """Scan of ``v(m) = m prod_l <theta_l m>`` for ``m = 1..M``."""

    theta: tuple
    M: int
    values: np.ndarray = field(repr=False)
    running_min: np.ndarray = field(repr=False)
    degenerate: bool = False
    kappa_hat: Optional[float] = None

    @property
    def records(self) -> np.ndarray:
        """The ``m`` at which the running minimum strictly drops (``m = 1`` included)."""
        rm = self.running_min
        drops = np.empty(rm.shape, dtype=bool)
        drops[0] = True
        drops[1:] = rm[1:] < rm[:-1]
        return np.flatnonzero(drops) + 1

    def min_with_kappa(self, kappa: float) -> float:
        m = np.arange(1, self.M + 1, dtype=float)
        return float(np.min(self.values * m ** kappa))

    def rows(self) -> Iterator[Tuple[int, float, bool]]:
        rec = np.zeros(self.M, dtype=bool)
        rec[self.records - 1] = True
        for i in range(self.M):
            yield i + 1, float(self.values[i]), bool(rec[i])

    CSV_COLUMNS = ("m", "v_m", "is_record")


def approximability_profile(theta: Sequence, M: int = 10 ** 5,
                            precision_bits: int = DEFAULT_PREC, fit: bool = True) -> ApproximabilityProfile:
    if M < 1:
        raise ValueError("M must be >= 1")
    kernels = _kernels(theta, precision_bits)
    m = np.arange(1, M + 1, dtype=np.int64)
    values = np.concatenate([_dist_product(kernels, c) for c in _chunks(1, M)]) * m
    prof = ApproximabilityProfile(tuple(theta), M, values, np.minimum.accumulate(values),
                                  degenerate=not values.all())
    if fit and M >= 100:
        try:
            prof.kappa_hat = _fit_kappa(prof)
        except InsufficientDataError:
            prof.kappa_hat = None
    return prof


@dataclass
class InclineProfile:
    """One profile per incline row, plus ``c_kappa = min_j min_m m^{1+kappa} prod <.>``."""

    weights: Weights
    kappa: float
    rows: List[ApproximabilityProfile]
    minima: List[ApproxMin]

    @property
    def c_kappa(self) -> float:
        return min(r.value for r in self.minima)

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.minima)


def incline_profile(w, M: int = 10 ** 5, kappa: float = 0.0, fit: bool = False) -> InclineProfile:
    w = as_weights(w)
    rows, mins = [], []
    for row in incline_rows(w):
        kernels = _kernels(row, w.precision_bits)
        prof = approximability_profile(kernels, M, w.precision_bits, fit=fit)
        prof.theta = row
        rows.append(prof)
        if prof.degenerate:
            first = int(np.flatnonzero(prof.values == 0)[0]) + 1
            mins.append(ApproxMin(0.0, first, True))
        else:
            mk = prof.values * np.arange(1, M + 1, dtype=float) ** kappa
            i = int(np.argmin(mk))
            mins.append(ApproxMin(float(mk[i]), i + 1, False))
    return InclineProfile(w, kappa, rows, mins)


def _fit_points(prof: ApproximabilityProfile) -> np.ndarray:
    dyadic = 2 ** np.arange(0, int(math.log2(prof.M)) + 1)
    return np.union1d(prof.records, dyadic)


def _fit_kappa(prof: ApproximabilityProfile) -> float:
    if prof.degenerate:
        return math.inf
    pts = _fit_points(prof)
    if pts.size < 5:
        raise InsufficientDataError(f"only {pts.size} envelope points up to M={prof.M}")
    x = np.log(pts.astype(float))
    y = -np.log(prof.running_min[pts - 1])
    slope = np.polyfit(x, y, 1)[0]
    return max(0.0, float(slope))


def estimate_kappa(theta: Sequence, M: int = 10 ** 5, precision_bits: int = DEFAULT_PREC) -> float:
    """Growth exponent of ``1 / min_{m' <= m} v(m')`` in ``m``; ``inf`` if degenerate.

    The envelope is sampled at its record-setting ``m`` and at every power of
    two, then fitted in log-log by least squares.
    """
    if M < 100:
        raise InsufficientDataError("M must be >= 100")
    prof = approximability_profile(theta, M, precision_bits, fit=False)
    return _fit_kappa(prof)


def hl_partial_quotient_bound(theta, t, c: float = 1.0) -> int:
    """Sum of the first ``ceil(c log t)`` partial quotients of ``theta``, ``a_0`` included."""
    if c <= 0:
        raise ValueError("c must be positive")
    if t <= 1:
        raise ValueError("t must exceed 1")
    n = max(1, math.ceil(c * math.log(float(t))))
    cf = continued_fraction(theta, n)
    if len(cf) < n:
        raise ValueError("theta is rational; its expansion terminates early")
    return sum(cf.a[:n])
