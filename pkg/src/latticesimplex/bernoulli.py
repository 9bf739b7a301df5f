"""Bernoulli numbers and polynomials, single and multiple.

Classical values are exact :class:`~fractions.Fraction` objects generated from
``s/(e^s - 1)`` (so ``B_1 = -1/2``).  The multiple Bernoulli polynomials are the
Taylor coefficients of

    prod_j  w_j s e^{w_j u_j s} / (e^{w_j s} - 1)  *  e^{s t}

evaluated exactly when every argument is rational and with ``mpmath`` at the
engine precision otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from numbers import Rational
from typing import List, Optional, Sequence

import mpmath

from .combinatorics import compositions, multinomial
from .numeric import DEFAULT_PREC, to_mpf

__all__ = [
    "CapacityError",
    "BernoulliEngine",
    "default_engine",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_half",
    "multi_bernoulli_number",
    "multi_bernoulli_poly",
    "multi_bernoulli_star_number",
    "multi_bernoulli_star_poly",
    "periodized_bernoulli",
    "barnes_zeta_nonpos",
    "sawtooth",
    "MultiBernoulliQuery",
]


class CapacityError(ValueError):
    """Requested degree exceeds the engine's ``k_max``."""


def _akiyama_tanigawa(n: int) -> List[Fraction]:
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]  # the algorithm yields B_1 = +1/2
    return out


def _exact(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def sawtooth(u):
    """``((u)) = {u} - 1/2``; exact for rationals."""
    if _exact(u):
        u = Fraction(u)
        return u - (u.numerator // u.denominator) - Fraction(1, 2)
    u = mpmath.mpf(u)
    return u - mpmath.floor(u) - mpmath.mpf(0.5)


class BernoulliEngine:
    """Table-backed evaluator; the table is filled eagerly up to ``k_max``.

    Instances are read-only after construction, so sharing one between
    threads is fine.
    """

    def __init__(self, k_max: int = 64, precision_bits: int = DEFAULT_PREC):
        if precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        self.k_max = int(k_max)
        self.precision_bits = int(precision_bits)
        self._table = tuple(_akiyama_tanigawa(self.k_max))

    def _check(self, k: int) -> None:
        if k < 0:
            raise ValueError(f"degree must be non-negative, got {k}")
        if k > self.k_max:
            raise CapacityError(f"degree {k} exceeds k_max={self.k_max}")

    def _all_exact(self, *groups) -> bool:
        for g in groups:
            if g is None:
                continue
            items = g if isinstance(g, (list, tuple)) else [g]
            if not all(_exact(x) for x in items):
                return False
        return True

    def _num(self, x):
        return to_mpf(x, self.precision_bits)

    # classical ----------------------------------------------------------
    @property
    def table(self):
        return self._table

    def number(self, k: int) -> Fraction:
        self._check(k)
        return self._table[k]

    def poly(self, k: int, u):
        self._check(k)
        if _exact(u):
            u = Fraction(u)
            return sum((comb(k, n) * self._table[n] * u ** (k - n) for n in range(k + 1)), Fraction(0))
        with mpmath.workprec(self.precision_bits):
            u = self._num(u)
            acc = mpmath.mpf(0)
            for n in range(k + 1):
                b = self._table[n]
                if b:
                    acc += comb(k, n) * (mpmath.mpf(b.numerator) / b.denominator) * u ** (k - n)
            return acc

    def poly_half(self, k: int) -> Fraction:
        """``B_k(1/2) = -(1 - 2^{1-k}) B_k``."""
        self._check(k)
        return -(1 - Fraction(2) ** (1 - k)) * self._table[k]

    # multiple ----------------------------------------------------------
    def multi_number(self, n: int, w: Sequence, u: Optional[Sequence] = None):
        """Composition sum of ``n!/prod n_j! * prod B_{n_j}(u_j) w_j^{n_j}``."""
        self._check(n)
        d = len(w)
        if d < 1:
            raise ValueError("need at least one weight")
        if u is None:
            u = [0] * d
        if len(u) != d:
            raise ValueError("w and u must have the same length")
        exact = self._all_exact(list(w), list(u))
        ctx = _NullCtx() if exact else mpmath.workprec(self.precision_bits)
        with ctx:
            if not exact:
                w = [self._num(x) for x in w]
                u = [self._num(x) for x in u]
            factors = [[self.poly(k, uj) * wj ** k for k in range(n + 1)] for wj, uj in zip(w, u)]
            acc = Fraction(0) if exact else mpmath.mpf(0)
            for c in compositions(n, d):
                term = multinomial(c)
                for j, cj in enumerate(c):
                    term = term * factors[j][cj]
                acc += term
            return acc

    def multi_poly(self, k: int, t, w: Sequence, u: Optional[Sequence] = None):
        """``sum_n C(k,n) B_n(w,u) t^{k-n}``."""
        self._check(k)
        exact = self._all_exact(t, list(w), None if u is None else list(u))
        ctx = _NullCtx() if exact else mpmath.workprec(self.precision_bits)
        with ctx:
            tt = Fraction(t) if exact else self._num(t)
            acc = Fraction(0) if exact else mpmath.mpf(0)
            for n in range(k + 1):
                acc += comb(k, n) * self.multi_number(n, w, u) * tt ** (k - n)
            return acc

    def star_number(self, n: int, w: Sequence):
        """Multiple Bernoulli number at ``u = (1/2, ..., 1/2)``; zero for odd ``n``."""
        self._check(n)
        if n % 2:
            return Fraction(0) if self._all_exact(list(w)) else mpmath.mpf(0)
        half = n // 2
        d = len(w)
        exact = self._all_exact(list(w))
        ctx = _NullCtx() if exact else mpmath.workprec(self.precision_bits)
        with ctx:
            if not exact:
                w = [self._num(x) for x in w]
            w2 = [x * x for x in w]
            bh = [self.poly_half(2 * i) for i in range(half + 1)]
            if not exact:
                bh = [mpmath.mpf(b.numerator) / b.denominator for b in bh]
            acc = Fraction(0) if exact else mpmath.mpf(0)
            for c in compositions(half, d):
                term = multinomial(tuple(2 * ci for ci in c))
                for j, cj in enumerate(c):
                    if cj:
                        term = term * bh[cj] * w2[j] ** cj
                acc += term
            return acc

    def star_poly(self, k: int, t, w: Sequence):
        """Even-index form ``sum_n C(k,2n) B*_{2n}(w) t^{k-2n}``."""
        self._check(k)
        exact = self._all_exact(t, list(w))
        ctx = _NullCtx() if exact else mpmath.workprec(self.precision_bits)
        with ctx:
            tt = Fraction(t) if exact else self._num(t)
            acc = Fraction(0) if exact else mpmath.mpf(0)
            for n in range(k // 2 + 1):
                acc += comb(k, 2 * n) * self.star_number(2 * n, w) * tt ** (k - 2 * n)
            return acc

    def periodized(self, k: int, t, w: Sequence, u: Sequence):
        """``B*_k(t + w . ((u)); w)``, periodic of period 1 in each ``u_j``."""
        if len(u) != len(w):
            raise ValueError("w and u must have the same length")
        exact = self._all_exact(t, list(w), list(u))
        if exact:
            shift = sum((Fraction(wj) * sawtooth(uj) for wj, uj in zip(w, u)), Fraction(0))
            return self.star_poly(k, Fraction(t) + shift, w)
        with mpmath.workprec(self.precision_bits):
            shift = mpmath.fsum(self._num(wj) * sawtooth(self._num(uj)) for wj, uj in zip(w, u))
            return self.star_poly(k, self._num(t) + shift, w)

    def barnes_zeta_nonpos(self, k: int, t, w: Sequence):
        """Barnes zeta at ``s = -k``: ``(-1)^d k! / (prod w (k+d)!) * B_{k+d}(t; w)``."""
        d = len(w)
        self._check(k + d)
        exact = self._all_exact(t, list(w))
        ctx = _NullCtx() if exact else mpmath.workprec(self.precision_bits)
        with ctx:
            prod_w = Fraction(1) if exact else mpmath.mpf(1)
            for x in w:
                prod_w *= Fraction(x) if exact else self._num(x)
            scale = (-1) ** d * Fraction(factorial(k), factorial(k + d))
            if not exact:
                scale = mpmath.mpf(scale.numerator) / scale.denominator
            return scale / prod_w * self.multi_poly(k + d, t, w)


class _NullCtx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


default_engine = BernoulliEngine()


def bernoulli_number(k: int) -> Fraction:
    return default_engine.number(k)


def bernoulli_poly(k: int, u):
    return default_engine.poly(k, u)


def bernoulli_poly_half(k: int) -> Fraction:
    return default_engine.poly_half(k)


def multi_bernoulli_number(n: int, w, u=None):
    return default_engine.multi_number(n, w, u)


def multi_bernoulli_poly(k: int, t, w, u=None):
    return default_engine.multi_poly(k, t, w, u)


def multi_bernoulli_star_number(n: int, w):
    return default_engine.star_number(n, w)


def multi_bernoulli_star_poly(k: int, t, w):
    return default_engine.star_poly(k, t, w)


def periodized_bernoulli(k: int, t, w, u):
    return default_engine.periodized(k, t, w, u)


def barnes_zeta_nonpos(k: int, t, w):
    return default_engine.barnes_zeta_nonpos(k, t, w)


class MultiBernoulliQuery:
    """Bundle of ``(k, t, w, u)`` for one multiple Bernoulli evaluation."""

    __slots__ = ("k", "t", "w", "u")

    def __init__(self, k: int, t, w: Sequence, u: Optional[Sequence] = None):
        if len(w) < 1:
            raise ValueError("need d >= 1 weights")
        if any(float(x) <= 0 for x in w):
            raise ValueError("weights must be positive")
        if u is not None and len(u) != len(w):
            raise ValueError("w and u must have the same length")
        self.k, self.t, self.w, self.u = k, t, tuple(w), None if u is None else tuple(u)

    def evaluate(self, engine: Optional[BernoulliEngine] = None):
        return (engine or default_engine).multi_poly(self.k, self.t, self.w, self.u)
