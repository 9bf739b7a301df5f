"""Fourier transform of the standard simplex and the coefficients built from it.

``X(y) = int_Delta exp(2 pi i y.x) dx`` over ``Delta = {x > 0, sum x < 1}``.
Closed forms are evaluated in ``mpmath`` at ``prec`` bits; the quadrature
oracle is a plain float64 Gauss-Legendre rule on the Duffy-collapsed cube and
shares no algebra with them.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import mpmath
import numpy as np

from .combinatorics import compositions
from .numeric import DEFAULT_PREC, to_mpf
from .weights import as_weights

__all__ = [
    "NearDiagonalWarning",
    "DiagonalPointError",
    "QuadratureNonconvergenceError",
    "SupportPattern",
    "NondiagonalPoint",
    "IdentityCheck",
    "simplex_ft_quadrature",
    "simplex_ft_closed",
    "simplex_ft_decomposed",
    "symmetrization_sides",
    "symmetrization_identity",
    "partial_fraction_check",
    "partial_fraction_node_check",
    "fourier_coefficient_N",
    "q_coefficient_terms",
    "fourier_coefficient_decomposed",
    "bernoulli_fourier_terms",
    "bernoulli_fourier_coeff",
    "fourier_partial_sum",
]

NEAR_DIAGONAL = 1e-6


class NearDiagonalWarning(RuntimeWarning):
    pass


class DiagonalPointError(ValueError):
    """Two nonzero coordinates coincide exactly."""


class QuadratureNonconvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SupportPattern:
    """Subset ``J`` of ``{0, .., d-1}`` stored as a bitmask."""

    d: int
    mask: int

    @classmethod
    def of(cls, y: Sequence) -> "SupportPattern":
        mask = 0
        for j, v in enumerate(y):
            if v != 0:
                mask |= 1 << j
        return cls(len(y), mask)

    @property
    def J(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.d) if self.mask >> j & 1)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.d) if not self.mask >> j & 1)

    def __len__(self):
        return len(self.J)


@dataclass(frozen=True)
class NondiagonalPoint:
    """A point whose nonzero coordinates are pairwise distinct."""

    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(self.y))
        _check_nondiagonal([v for v in self.y if v != 0], warn=False)

    @property
    def pattern(self) -> SupportPattern:
        return SupportPattern.of(self.y)


@dataclass(frozen=True)
class IdentityCheck:
    point: tuple
    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    ok: bool

    def __bool__(self):
        return self.ok

    CSV_COLUMNS = ("point", "lhs", "rhs", "abs_err", "rel_err")

    def to_row(self) -> tuple:
        return (" ".join(str(v) for v in self.point), str(self.lhs), str(self.rhs),
                self.abs_err, self.rel_err)


def _check_nondiagonal(vals: Sequence, warn: bool = True) -> None:
    if not vals:
        return
    scale = max(abs(v) for v in vals)
    gap = math.inf
    for a, b in itertools.combinations(vals, 2):
        if a == b:
            raise DiagonalPointError(f"coordinates coincide at {a}")
        gap = min(gap, abs(a - b))
    if warn and gap < NEAR_DIAGONAL * scale:
        warnings.warn(f"near-diagonal point: min gap {float(gap):.3g} vs scale {float(scale):.3g}",
                      NearDiagonalWarning, stacklevel=3)


def _twopii(prec: int):
    return mpmath.mpc(0, 2) * mpmath.pi


# quadrature oracle -----------------------------------------------------------

def _phi1(z: np.ndarray) -> np.ndarray:
    """``(e^z - 1)/z`` with the removable singularity filled in."""
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    series = 1 + z / 2 + z * z / 6 + z ** 3 / 24
    return np.where(small, series, (np.exp(safe) - 1) / safe)


def _gl_estimate(y: np.ndarray, n: int) -> complex:
    d = y.size
    nodes, weights = np.polynomial.legendre.leggauss(n)
    s = (nodes + 1) / 2
    ws = weights / 2
    k = d - 1
    grids = np.meshgrid(*([s] * k), indexing="ij")
    wgrid = np.ones([n] * k)
    for g in np.meshgrid(*([ws] * k), indexing="ij"):
        wgrid = wgrid * g
    rem = np.ones([n] * k)
    phase = np.zeros([n] * k)
    jac = np.ones([n] * k)
    for i in range(k):
        x = rem * grids[i]
        phase = phase + y[i] * x
        jac = jac * rem
        rem = rem - x
    inner = rem * _phi1(2j * np.pi * y[-1] * rem)
    return complex(np.sum(wgrid * jac * np.exp(2j * np.pi * phase) * inner))


def simplex_ft_quadrature(y: Sequence[float], tol: float = 1e-9, max_points: int = 1 << 22) -> complex:
    """Numerical ``X(y)``.

    The coordinate with the largest ``|y_j|`` is integrated in closed form
    (an elementary 1-D exponential integral); the remaining ``d-1`` run over the
    collapsed cube ``x_1 = s_1, x_2 = (1-s_1) s_2, ...`` with a tensor
    Gauss-Legendre rule whose order doubles until two successive estimates
    agree to ``tol``.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size < 1:
        raise ValueError("y must be a non-empty vector")
    order = np.argsort(np.abs(y), kind="stable")
    y = y[order]
    if y.size == 1:
        return complex(_phi1(np.array([2j * np.pi * y[0]]))[0])
    n = 16
    prev = _gl_estimate(y, n)
    while True:
        n *= 2
        if n ** (y.size - 1) > max_points:
            raise QuadratureNonconvergenceError(
                f"no agreement to {tol:g} within {max_points} nodes at y={y.tolist()}"
            )
        cur = _gl_estimate(y, n)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur


# closed forms -----------------------------------------------------------------

def _as_mp(y: Sequence, prec: int) -> List:
    return [to_mpf(v, prec) if not isinstance(v, (mpmath.mpf, mpmath.mpc)) else v for v in y]


def simplex_ft_closed(y: Sequence, prec: int = DEFAULT_PREC):
    """``X(y)`` in closed form.

    With every coordinate nonzero this is the classical divided-difference
    formula ``(2 pi i)^-d sum_j (e^{2 pi i y_j} - 1) / (y_j prod_{l != j}(y_j - y_l))``.
    Zero coordinates are integrated out first, which raises the power of
    ``y_j`` in the denominators and brings in a polynomial part.
    """
    d = len(y)
    pat = SupportPattern.of(y)
    J = pat.J
    if not J:
        return mpmath.mpc(1) / math.factorial(d)
    _check_nondiagonal([y[j] for j in J])
    with mpmath.workprec(prec):
        yv = _as_mp(y, prec)
        c = 1 / _twopii(prec)
        k = len(J)
        den = {}
        for j in J:
            p = mpmath.mpf(1)
            for l in J:
                if l != j:
                    p *= yv[j] - yv[l]
            den[j] = p
        if k == d:
            acc = mpmath.fsum((mpmath.expjpi(2 * yv[j]) - 1) / (yv[j] * den[j]) for j in J)
            return +(c ** d * acc)
        x2 = mpmath.fsum(mpmath.expjpi(2 * yv[j]) / (yv[j] ** (d - k + 1) * den[j]) for j in J)
        x1 = mpmath.mpc(0)
        for n in range(k, d + 1):
            inner = mpmath.fsum(1 / (yv[j] ** (n - k + 1) * den[j]) for j in J)
            x1 -= c ** n * inner / math.factorial(d - n)
        return +(x1 + c ** d * x2)


def simplex_ft_decomposed(y: Sequence, prec: int = DEFAULT_PREC):
    """``(X1, X2)`` with ``X1 + X2 = X(y)``.

    ``X1`` is the symmetrised polynomial part (a sum over compositions),
    ``X2`` the oscillating part with the full product over all ``l != j``.
    """
    d = len(y)
    J = SupportPattern.of(y).J
    if not J:
        raise ValueError("y must have a nonzero coordinate")
    _check_nondiagonal([y[j] for j in J])
    k = len(J)
    with mpmath.workprec(prec):
        yv = _as_mp(y, prec)
        c = 1 / _twopii(prec)
        inv = [1 / yv[j] for j in J]
        x1 = mpmath.mpc(0)
        for n in range(k, d + 1):
            s = mpmath.mpf(0)
            for comp in compositions(n, k, positive=True):
                term = mpmath.mpf(1)
                for iv, nj in zip(inv, comp):
                    term *= iv ** nj
                s += term
            x1 += c ** n * s / math.factorial(d - n)
        x1 *= (-1) ** k
        x2 = mpmath.mpc(0)
        for j in J:
            p = yv[j]
            for l in range(d):
                if l != j:
                    p *= yv[j] - yv[l]
            x2 += mpmath.expjpi(2 * yv[j]) / p
        return +x1, +(c ** d * x2)


# exact rational identities --------------------------------------------------

def _check(point, lhs, rhs) -> IdentityCheck:
    err = abs(lhs - rhs)
    rel = err / abs(rhs) if rhs else (0 if not err else math.inf)
    return IdentityCheck(tuple(point), lhs, rhs, float(err), float(rel), lhs == rhs)


def symmetrization_sides(y: Sequence, n: int) -> Tuple[Fraction, Fraction]:
    """Both sides of the symmetrisation identity, in exact arithmetic.

    ``sum_j 1/(y_j^{n-|J|+1} prod_{k != j}(y_j - y_k))`` and
    ``(-1)^{|J|-1} sum_{n_j >= 1, |n| = n} prod_j y_j^{-n_j}``.
    """
    y = [Fraction(v) for v in y]
    k = len(y)
    if k < 1 or any(v == 0 for v in y):
        raise ValueError("y must be a nonzero vector")
    if n < k:
        raise ValueError("need n >= |J|")
    _check_nondiagonal(y, warn=False)
    lhs = Fraction(0)
    for j, yj in enumerate(y):
        p = yj ** (n - k + 1)
        for l, yl in enumerate(y):
            if l != j:
                p *= yj - yl
        lhs += 1 / p
    rhs = Fraction(0)
    for comp in compositions(n, k, positive=True):
        term = Fraction(1)
        for yj, nj in zip(y, comp):
            term /= yj ** nj
        rhs += term
    return lhs, (-1) ** (k - 1) * rhs


def symmetrization_identity(y: Sequence, n: int) -> IdentityCheck:
    lhs, rhs = symmetrization_sides(y, n)
    return _check(tuple(y) + (n,), lhs, rhs)


def partial_fraction_check(z, y: Sequence) -> IdentityCheck:
    """``1/prod_k (z - y_k) = sum_j 1/(z - y_j) * 1/prod_{k != j}(y_j - y_k)``."""
    z = Fraction(z)
    y = [Fraction(v) for v in y]
    if z in y:
        raise ValueError("z must differ from every y_k")
    _check_nondiagonal(y, warn=False)
    lhs = Fraction(1)
    for yk in y:
        lhs /= z - yk
    rhs = Fraction(0)
    for j, yj in enumerate(y):
        p = z - yj
        for k, yk in enumerate(y):
            if k != j:
                p *= yj - yk
        rhs += 1 / p
    return _check((z,) + tuple(y), lhs, rhs)


def partial_fraction_node_check(y: Sequence) -> IdentityCheck:
    """The same decomposition with ``z`` set to the last node ``y_n``.

    ``1/prod_{k<n}(y_n - y_k) = -sum_{j<n} 1/prod_{k != j}(y_j - y_k)``.
    """
    y = [Fraction(v) for v in y]
    if len(y) < 2:
        raise ValueError("need at least two nodes")
    _check_nondiagonal(y, warn=False)
    yn = y[-1]
    lhs = Fraction(1)
    for yk in y[:-1]:
        lhs /= yn - yk
    rhs = Fraction(0)
    for j, yj in enumerate(y[:-1]):
        p = Fraction(1)
        for k, yk in enumerate(y):
            if k != j:
                p *= yj - yk
        rhs -= 1 / p
    return _check(tuple(y), lhs, rhs)


# Fourier coefficients of the counting function --------------------------------

def _weights_mp(w, prec: int):
    w = as_weights(w)
    return w, [to_mpf(v, prec) for v in w.values]


def fourier_coefficient_N(m: Sequence[int], t, w, prec: int = DEFAULT_PREC):
    """``N_m(t; w) = t^d / prod w * X(m_1 t / w_1, ..., m_d t / w_d)``."""
    w, wv = _weights_mp(w, prec)
    if len(m) != w.d:
        raise ValueError("m has wrong dimension")
    with mpmath.workprec(prec):
        tt = to_mpf(t, prec)
        scale = tt ** w.d / mpmath.fprod(wv)
        if not any(m):
            return mpmath.mpc(scale / math.factorial(w.d))
        y = [mj * tt / wj if mj else 0 for mj, wj in zip(m, wv)]
        return +(scale * simplex_ft_closed(y, prec))


def q_coefficient_terms(m: Sequence[int], t, w, prec: int = DEFAULT_PREC) -> List:
    """Terms of ``Q_m(t; w)`` indexed by ``n = |J| .. d``, ``J = supp(m)``.

    Built from the symmetrised polynomial part of ``X(mt/w)``, so that
    ``Q_m / (d! prod w) = t^d / prod w * X1(mt/w)``.  For ``m = 0`` the single
    term is ``t^d``.
    """
    w, wv = _weights_mp(w, prec)
    d = w.d
    with mpmath.workprec(prec):
        tt = to_mpf(t, prec)
        J = [j for j in range(d) if m[j]]
        if not J:
            return [tt ** d]
        c = 1 / _twopii(prec)
        inv = [wv[j] / (m[j] * tt) for j in J]
        out = []
        for n in range(len(J), d + 1):
            s = mpmath.mpf(0)
            for comp in compositions(n, len(J), positive=True):
                term = mpmath.mpf(1)
                for iv, nj in zip(inv, comp):
                    term *= iv ** nj
                s += term
            out.append((-1) ** len(J) * math.factorial(d) * tt ** d * c ** n * s / math.factorial(d - n))
        return out


def fourier_coefficient_decomposed(m: Sequence[int], t, w, prec: int = DEFAULT_PREC):
    """``(Q_m / (d! prod w), R_m)``; their sum is ``N_m(t; w)``.

    ``R_m = (2 pi i)^-d sum_{j: m_j != 0} e^{2 pi i m_j t / w_j} /
    (m_j prod_{l != j}(theta_{j,l} m_j - m_l))`` with ``theta_{j,l} = w_l / w_j``.
    """
    w, wv = _weights_mp(w, prec)
    d = w.d
    if len(m) != d:
        raise ValueError("m has wrong dimension")
    with mpmath.workprec(prec):
        tt = to_mpf(t, prec)
        q = mpmath.fsum(q_coefficient_terms(m, t, w, prec))
        q_part = q / (math.factorial(d) * mpmath.fprod(wv))
        r = mpmath.mpc(0)
        for j in range(d):
            if not m[j]:
                continue
            den = mpmath.mpf(m[j])
            for l in range(d):
                if l != j:
                    den *= (wv[l] / wv[j]) * m[j] - m[l]
            if den == 0:
                raise DiagonalPointError(f"theta_{j},l m_j = m_l for m={list(m)}")
            r += mpmath.expjpi(2 * m[j] * tt / wv[j]) / den
        r *= (1 / _twopii(prec)) ** d
        return +q_part, +r


def bernoulli_fourier_terms(k: int, m: Sequence[int], t, w, prec: int = DEFAULT_PREC) -> List:
    """Terms ``b_{n,m}(w, J) C(k, n) t^{k-n}``, ``n = |J| .. k``, of ``b_{k,m}(t; w)``.

    ``b_{n,m}(w, J) = (-1)^{|J|} n! (2 pi i)^-n sum_{|n|=n, n_j>=1} prod (w_j/m_j)^{n_j}``.
    Empty when ``|supp m| > k``; ``[t^k]`` when ``m = 0``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    w, wv = _weights_mp(w, prec)
    with mpmath.workprec(prec):
        tt = to_mpf(t, prec)
        J = [j for j in range(w.d) if m[j]]
        if not J:
            return [tt ** k]
        c = 1 / _twopii(prec)
        ratio = [wv[j] / m[j] for j in J]
        out = []
        for n in range(len(J), k + 1):
            s = mpmath.mpf(0)
            for comp in compositions(n, len(J), positive=True):
                term = mpmath.mpf(1)
                for r, nj in zip(ratio, comp):
                    term *= r ** nj
                s += term
            b = (-1) ** len(J) * math.factorial(n) * c ** n * s
            out.append(b * math.comb(k, n) * tt ** (k - n))
        return out


def bernoulli_fourier_coeff(k: int, m: Sequence[int], t, w, prec: int = DEFAULT_PREC):
    """Fourier coefficient of ``u -> B_k(t; w, {u})`` at frequency ``m``."""
    with mpmath.workprec(prec):
        return mpmath.mpc(mpmath.fsum(bernoulli_fourier_terms(k, m, t, w, prec)))


def fourier_partial_sum(t, w, u: Sequence, M: int, kernel: str = "fejer", prec: int = 53) -> float:
    """``sum_{|m|_inf <= M} c_m N_m(t; w) e^{2 pi i m.u}``.

    ``kernel="fejer"`` uses the Cesaro weights ``prod (1 - |m_j|/(M+1))``,
    ``"dirichlet"`` the plain square partial sum.
    """
    if kernel not in ("fejer", "dirichlet"):
        raise ValueError("kernel must be 'fejer' or 'dirichlet'")
    w = as_weights(w)
    uv = [to_mpf(x, prec) for x in u]
    acc = mpmath.mpc(0)
    with mpmath.workprec(prec):
        for m in itertools.product(range(-M, M + 1), repeat=w.d):
            c = 1.0
            if kernel == "fejer":
                for mj in m:
                    c *= 1 - abs(mj) / (M + 1)
            phase = mpmath.expjpi(2 * mpmath.fsum(mj * x for mj, x in zip(m, uv)))
            acc += c * fourier_coefficient_N(m, t, w, prec) * phase
    return float(acc.real)
