"""Smoothing kernel, sine-product lattice sums and the balanced error bound.

The kernel is the normalised bump ``omega(x) = c exp(-1/(1 - 4x^2))`` on
``(-1/2, 1/2)``.  Its transform is real and even and decays like
``exp(-C sqrt|y|)``; it is tabulated once up to ``Y_CUT`` on a uniform grid
(it oscillates with period about 2 at every scale) and read back through a
cubic spline.  Beyond ``Y_CUT`` it is below ``1e-13`` and is treated as zero,
the neglected part being covered by the reported tail bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .diophantine import FracKernel, incline_profile, incline_rows, _chunks
from .weights import as_weights

__all__ = [
    "ZeroSineError",
    "SmoothingKernel",
    "default_kernel",
    "bump",
    "bump_ft",
    "s2_row",
    "s2_tail_bound",
    "LatticeSumReport",
    "s2_total",
    "spencer_sum",
    "spencer_sums",
    "s_surrogate",
    "ErrorBound",
    "balanced_T",
    "error_bound",
    "calibrate_constant",
]

Y_CUT = 128.0
_STEP = 1.0 / 256
_GL_NODES = 400
_CERT_A = (4, 8, 12, 16)


class ZeroSineError(ArithmeticError):
    """``sin(pi theta m) = 0`` for some scanned ``m``; the incline is rational."""


def _raw_bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    inside = np.abs(x) < 0.5
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - 4.0 * xi * xi))
    return out


class SmoothingKernel:
    """Bump ``omega``, its transform and a decay certificate.

    ``certificate[A]`` is ``max_y |omega~(y)| (1 + |y|)^A`` over the table.
    """

    def __init__(self, y_cut: float = Y_CUT, step: float = _STEP):
        z, _ = quad(lambda x: float(_raw_bump(x)), -0.5, 0.5, epsabs=1e-14, epsrel=1e-13, limit=200)
        self.c = 1.0 / z
        self.y_cut = float(y_cut)
        self.step = float(step)
        self._grid = np.arange(0.0, self.y_cut + self.step / 2, self.step)
        self._table = self._tabulate(self._grid)
        self._spline = CubicSpline(self._grid, self._table, bc_type=((1, 0.0), "not-a-knot"))
        absval = np.abs(self._table)
        self.certificate: Dict[int, float] = {
            A: float(np.max(absval * (1 + self._grid) ** A)) for A in _CERT_A
        }

    def _tabulate(self, ys: np.ndarray) -> np.ndarray:
        x, wt = np.polynomial.legendre.leggauss(_GL_NODES)
        x = (x + 1) / 4
        wt = wt / 4
        fw = _raw_bump(x) * wt * 2 * self.c
        out = np.empty(ys.shape)
        for start in range(0, ys.size, 2048):
            blk = ys[start:start + 2048]
            out[start:start + 2048] = np.cos(2 * np.pi * np.outer(blk, x)) @ fw
        return out

    def bump(self, x):
        return self.c * _raw_bump(x)

    def ft_direct(self, y: float) -> float:
        """``omega~(y)`` by adaptive oscillatory quadrature, no table."""
        y = abs(float(y))
        if y == 0:
            return 1.0
        v, _ = quad(lambda x: float(_raw_bump(x)), 0.0, 0.5, weight="cos", wvar=2 * math.pi * y,
                    epsabs=1e-15, epsrel=1e-12, limit=500)
        return 2 * self.c * v

    def ft(self, y):
        """Tabulated ``omega~(y)``; zero for ``|y| > y_cut``.

        Exact at the knots to about 1e-15; spline error between knots is
        below 5e-12.
        """
        y = np.abs(np.asarray(y, dtype=float))
        out = np.zeros(y.shape)
        inside = y <= self.y_cut
        out[inside] = self._spline(y[inside])
        return out if out.ndim else float(out)

    def decay_bound(self, y, A: int) -> float:
        return self.certificate[A] * (1 + abs(y)) ** (-A)


@lru_cache(maxsize=1)
def default_kernel() -> SmoothingKernel:
    return SmoothingKernel()


def bump(x):
    return default_kernel().bump(x)


def bump_ft(y):
    return default_kernel().ft(y)


# sums ----------------------------------------------------------------------

def _row_kernels(theta_row: Sequence) -> List[FracKernel]:
    return [t if isinstance(t, FracKernel) else FracKernel(t) for t in theta_row]


def _inv_sine_product(kernels: Sequence[FracKernel], m: np.ndarray) -> np.ndarray:
    """``1 / (m prod_l |sin(pi theta_l m)|)``, using ``|sin(pi x)| = sin(pi <x>)``."""
    prod = m.astype(float)
    for k in kernels:
        dist = k.dist(m)
        if not dist.all():
            bad = int(m[np.flatnonzero(dist == 0)[0]])
            raise ZeroSineError(f"sin(pi * {k.theta} * {bad}) = 0")
        prod *= np.sin(np.pi * dist)
    return 1.0 / prod


def _default_M(T: float) -> int:
    return int(math.floor(T)) ** 3


def s2_row(theta_row: Sequence, T: float, M: Optional[int] = None,
           kernel: Optional[SmoothingKernel] = None) -> float:
    """``(2^{d-1} pi)^-1 sum_{m<=M} |omega~(m/T)| / (m prod_l |sin(pi theta_l m)|)``.

    ``M`` defaults to ``floor(T)^3``; terms with ``m/T`` past the kernel table
    vanish and are not visited.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    kernel = kernel or default_kernel()
    M = _default_M(T) if M is None else int(M)
    kernels = _row_kernels(theta_row)
    top = min(M, int(math.floor(kernel.y_cut * T)))
    acc = 0.0
    for m in _chunks(1, top):
        acc += float(np.sum(np.abs(kernel.ft(m / T)) * _inv_sine_product(kernels, m)))
    return acc / (2 ** len(kernels) * math.pi)


def s2_tail_bound(T: float, M: int, d: int, kappa: float, c_kappa: float,
                  kernel: Optional[SmoothingKernel] = None) -> float:
    """Bound on the part of one row of S2 beyond ``M``.

    Uses ``|omega~(y)| <= C_A (1+y)^-A`` from the certificate and
    ``1/(m prod |sin|) <= m^kappa / (2^{d-1} c_kappa)``, which holds whenever
    ``m^{1+kappa} prod <theta m> >= c_kappa``.  The best ``A`` is taken.
    """
    if c_kappa <= 0:
        return math.inf
    kernel = kernel or default_kernel()
    best = math.inf
    for A, C in kernel.certificate.items():
        p = A - kappa
        if p <= 1:
            continue
        # sum_{m>M} (1 + m/T)^-A m^kappa <= T^A sum_{m>M} m^{kappa-A}
        tail = C * T ** A * M ** (1 - p) / (p - 1)
        best = min(best, tail)
    return best / (2 ** (d - 1) * c_kappa) / (2 ** (d - 1) * math.pi)


@dataclass
class LatticeSumReport:
    T: float
    M: int
    rows: List[float]
    tail: float
    spencer: Dict[int, List[float]] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(sum(self.rows))

    CSV_COLUMNS = ("T", "M", "rows", "total", "tail")

    def to_row(self) -> tuple:
        return (self.T, self.M, " ".join(f"{r:.17g}" for r in self.rows), self.total, self.tail)


def s2_total(w, T: float, M: Optional[int] = None, kappa: float = 0.0,
             c_kappa: Optional[float] = None, spencer_K: Sequence[int] = (),
             kernel: Optional[SmoothingKernel] = None) -> LatticeSumReport:
    """Row sums of S2 over the incline matrix of ``w``, with a tail bound.

    ``c_kappa`` defaults to an incline-profile scan up to ``10^4``.
    """
    w = as_weights(w)
    kernel = kernel or default_kernel()
    M = _default_M(T) if M is None else int(M)
    rows = incline_rows(w)
    values = [s2_row(r, T, M, kernel) for r in rows]
    if c_kappa is None:
        c_kappa = incline_profile(w, 10 ** 4, kappa).c_kappa
    # terms past the table are dropped inside s2_row; count them in the tail
    start = min(M, int(math.floor(kernel.y_cut * T)))
    tail = w.d * s2_tail_bound(T, max(start, 1), w.d, kappa, c_kappa, kernel)
    spencer = {int(K): [spencer_sum(r, K) for r in rows] for K in spencer_K}
    return LatticeSumReport(float(T), M, values, tail, spencer)


def spencer_sums(theta_row: Sequence, Ks: Sequence[int]) -> List[float]:
    """``sum_{m<=K} 1/(m prod_l |sin(pi theta_l m)|)`` for each ``K`` in one pass."""
    Ks = sorted(int(k) for k in Ks)
    if not Ks:
        return []
    if Ks[0] < 0:
        raise ValueError("K must be >= 0")
    kernels = _row_kernels(theta_row)
    out, acc, k_i = [], 0.0, 0
    for m in _chunks(1, Ks[-1]):
        terms = np.cumsum(_inv_sine_product(kernels, m)) + acc
        while k_i < len(Ks) and Ks[k_i] <= m[-1]:
            out.append(float(terms[Ks[k_i] - m[0]]) if Ks[k_i] >= m[0] else acc)
            k_i += 1
        acc = float(terms[-1])
    out.extend([acc] * (len(Ks) - len(out)))
    return out


def spencer_sum(theta_row: Sequence, K: int) -> float:
    return spencer_sums(theta_row, [K])[0] if K > 0 else 0.0


def s_surrogate(u: Sequence[float], w, j: int, T: float, M: int,
                kernel: Optional[SmoothingKernel] = None) -> complex:
    """Truncated ``S(u, theta_j, T)``: all frequencies restricted to ``|m| <= M``."""
    w = as_weights(w)
    kernel = kernel or default_kernel()
    wf = w.floats
    d = w.d
    mj = np.concatenate([np.arange(-M, 0), np.arange(1, M + 1)]).astype(float)
    ml = np.arange(-M, M + 1, dtype=float)
    outer = np.exp(2j * np.pi * mj * u[j]) * kernel.ft(mj / T) / mj
    for l in range(d):
        if l == j:
            continue
        theta = wf[l] / wf[j]
        coeff = np.exp(2j * np.pi * ml * u[l]) * kernel.ft(ml / T)
        outer = outer * ((1.0 / (theta * mj[:, None] - ml[None, :])) @ coeff)
    return complex(np.sum(outer) / (2j * np.pi) ** d)


# balanced bound -----------------------------------------------------------

@dataclass(frozen=True)
class ErrorBound:
    t: float
    T: float
    M: int
    s2: float
    tail: float
    smoothing: float
    C: float

    @property
    def total(self) -> float:
        return self.s2 + self.tail + self.C * self.smoothing

    CSV_COLUMNS = ("t", "T", "M", "s2", "tail", "smoothing", "C", "balanced_bound")

    def to_row(self) -> tuple:
        return (self.t, self.T, self.M, self.s2, self.tail, self.smoothing, self.C, self.total)


def balanced_T(t: float, d: int, kappa: float) -> float:
    """``T = t^{(d-1)/(1+kappa)}``."""
    return float(t) ** ((d - 1) / (1 + kappa))


def error_bound(t, w, kappa: float, c_kappa: Optional[float] = None, C: float = 1.0,
                M: Optional[int] = None, kernel: Optional[SmoothingKernel] = None) -> ErrorBound:
    """S2 at the balanced scale plus ``C t^{d-1} / T``.

    The constant ``C`` is not known; the default 1 is a placeholder and
    :func:`calibrate_constant` fits it from measured errors.  The result is a
    heuristic envelope, not a certified bound.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    w = as_weights(w)
    t = float(t)
    if c_kappa is None:
        c_kappa = incline_profile(w, 10 ** 4, kappa).c_kappa
    T = balanced_T(t, w.d, kappa)
    rep = s2_total(w, T, M, kappa, c_kappa, kernel=kernel)
    return ErrorBound(t, T, rep.M, rep.total, rep.tail, t ** (w.d - 1) / T, C)


def calibrate_constant(bounds: Sequence[ErrorBound], measured: Sequence[float]) -> float:
    """Smallest ``C >= 0`` with ``s2 + tail + C * smoothing >= measured`` on every point."""
    need = 0.0
    for b, r in zip(bounds, measured):
        gap = float(r) - b.s2 - b.tail
        if gap > 0:
            need = max(need, gap / b.smoothing)
    return need
