"""Exact lattice-point counts in right-angled simplices and their error terms.

Every count reduces to the kernel

    #{y in Z^d_{>=0} : w . y < s}   and   #{y in Z^d_{>=0} : w . y <= s},

evaluated in one pass.  The outer coordinates are enumerated (largest weight
outermost), the last-but-one coordinate is vectorised with numpy and the last
coordinate is a floor.  Floors are taken in float64 and re-decided exactly
whenever the quotient lies within a rigorous error margin of an integer, so
strict and non-strict inequalities are never confused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .bernoulli import BernoulliEngine, default_engine, sawtooth
from .surd import Surd
from .weights import ShiftVector, Weights, as_weights

__all__ = [
    "BoundaryAmbiguityError",
    "UnsupportedRepresentationError",
    "BoundarySign",
    "CountReport",
    "InvarianceReport",
    "count_pair",
    "count_open",
    "count_closed",
    "count_shifted",
    "tau",
    "leading_open",
    "leading_closed",
    "leading_shifted",
    "error_report",
    "error_report_shifted",
    "invariance_check",
    "boundary_sign",
]


class BoundaryAmbiguityError(ArithmeticError):
    """A point's side of the hyperplane is undecidable at the working precision."""


class UnsupportedRepresentationError(TypeError):
    """The operation needs exact (surd or rational) weights."""


class BoundarySign:
    BELOW, ON, ABOVE = -1, 0, 1


def _residual_sign(w: Weights, s, coeffs: Sequence[int]) -> int:
    """Sign of ``s - w . coeffs``; exact for surd weights."""
    if w.exact:
        acc = s
        for wj, c in zip(w.values, coeffs):
            if c:
                acc = acc - wj * c
        return acc.sign()
    prec = w.precision_bits
    with mpmath.workprec(prec):
        terms = [s] + [-wj * c for wj, c in zip(w.values, coeffs) if c]
        val = mpmath.fsum(terms)
        # s may already be a difference t - w.lower, so the weights set the scale too
        scale = max(max(abs(x) for x in terms), mpmath.fsum(w.values))
        if abs(val) <= scale * mpmath.ldexp(1, 8 - prec):
            raise BoundaryAmbiguityError(
                f"point {list(coeffs)} is within 2^-{prec - 8} of the hyperplane w.x = {mpmath.nstr(s, 20)}"
            )
        return 1 if val > 0 else -1


def boundary_sign(w, x: Sequence[int], t) -> int:
    """Sign of ``w . x - t`` as a :class:`BoundarySign` value.

    ``ON`` is returned only when equality is exact.
    """
    w = as_weights(w)
    return -_residual_sign(w, w.coerce_threshold(t), list(x))


def _last_floor(w: Weights, s, head, q: np.ndarray, tol: float):
    """Exact ``floor(q)`` and integrality for the last-coordinate quotients.

    ``head(i)`` gives the other coordinates of entry ``i``.
    """
    fl = np.floor(q)
    near = np.abs(q - np.rint(q)) <= tol
    is_int = np.zeros(q.shape, dtype=bool)
    if near.any():
        for i in np.flatnonzero(near):
            k = int(np.rint(q[i]))
            sg = _residual_sign(w, s, head(i) + [k])
            if sg > 0:
                fl[i] = k
            elif sg == 0:
                fl[i] = k
                is_int[i] = True
            else:
                fl[i] = k - 1
    return fl, is_int


def _kernel(w: Weights, s) -> Tuple[int, int]:
    """``(#{y>=0: w.y < s}, #{y>=0: w.y <= s})`` with ``w`` already ordered."""
    d = w.d
    wf = w.floats
    sf = float(s)
    if sf < -1e-9 * max(1.0, abs(sf)) and (s.sign() if isinstance(s, Surd) else s) < 0:
        return 0, 0
    scale = abs(sf) / wf.min() + 1.0
    tol = 2.0 ** -40 * scale * (d + 2)

    if d == 1:
        q = np.array([sf / wf[0]])
        fl, is_int = _last_floor(w, s, lambda i: [], q, tol)
        f = int(fl[0])
        return max(0, f + (0 if is_int[0] else 1)), max(0, f + 1)

    strict = 0
    nonstrict = 0
    wv, wl = wf[-2], wf[-1]

    def inner(prefix: List[int], r: float):
        nonlocal strict, nonstrict
        top = int(math.floor(r / wv + tol)) + 1
        if top < 0:
            return
        ys = np.arange(0, top + 1, dtype=np.int64)
        q = (r - ys * wv) / wl
        fl, is_int = _last_floor(w, s, lambda i: prefix + [int(ys[i])], q, tol)
        strict += int(np.maximum(0, fl + (~is_int)).sum())
        nonstrict += int(np.maximum(0, fl + 1).sum())

    def outer(level: int, prefix: List[int], r: float):
        if level == d - 2:
            inner(prefix, r)
            return
        top = int(math.floor(r / wf[level] + tol)) + 1
        for y in range(0, max(top, -1) + 1):
            outer(level + 1, prefix + [y], r - y * wf[level])

    outer(0, [], sf)
    return strict, nonstrict


def count_pair(t, w, lower: Optional[Sequence[int]] = None) -> Tuple[int, int]:
    """Counts of ``x in Z^d``, ``x_j >= lower_j``, with ``w.x < t`` and ``w.x <= t``."""
    w = as_weights(w)
    t = w.coerce_threshold(t)
    lower = [0] * w.d if lower is None else [int(v) for v in lower]
    if len(lower) != w.d:
        raise ValueError("lower bound has wrong dimension")
    with mpmath.workprec(w.precision_bits):
        s = t - w.dot(lower) if any(lower) else t
    order = sorted(range(w.d), key=lambda j: -w.floats[j])
    wo = Weights(tuple(w.values[j] for j in order), w.precision_bits)
    return _kernel(wo, s)


def count_open(t, w) -> int:
    """``N^-(t; w) = #{x : x_j >= 1, w.x < t}``."""
    w = as_weights(w)
    return count_pair(t, w, [1] * w.d)[0]


def count_closed(t, w) -> int:
    """``N^+(t; w) = #{x : x_j >= 0, w.x <= t}``."""
    w = as_weights(w)
    return count_pair(t, w, [0] * w.d)[1]


def _as_shift(u, d: int) -> ShiftVector:
    if isinstance(u, ShiftVector):
        sv = u
    else:
        sv = ShiftVector(tuple(u))
    if len(sv) != d:
        raise ValueError("shift has wrong dimension")
    return sv


def _shifted_pair(t, w: Weights, u: ShiftVector) -> Tuple[int, int]:
    lower = [x.numerator // x.denominator + 1 for x in u.u]
    with mpmath.workprec(w.precision_bits):
        t = w.coerce_threshold(t) + w.dot(u.u)
    return count_pair(t, w, lower)


def count_shifted(t, w, u) -> int:
    """``N(t; w, u) = #{x : x_j > u_j, w.x < t + w.u}``."""
    w = as_weights(w)
    return _shifted_pair(t, w, _as_shift(u, w.d))[0]


def tau(t, w) -> int:
    """Number of positive integer points on the hyperplane ``w.x = t``."""
    w = as_weights(w)
    if not w.exact:
        raise UnsupportedRepresentationError("tau needs surd or rational weights")
    strict, nonstrict = count_pair(t, w, [1] * w.d)
    return nonstrict - strict


# leading terms -------------------------------------------------------------

def _leading(arg, w: Weights, engine: BernoulliEngine):
    prec = engine.precision_bits
    with mpmath.workprec(prec):
        wv = w.mpf_values(prec)
        val = engine.star_poly(w.d, arg, wv)
        return val / (math.factorial(w.d) * w.product())


def _half_sum(w: Weights, prec: int):
    with mpmath.workprec(prec):
        return mpmath.fsum(w.mpf_values(prec)) / 2


def leading_open(t, w, engine: BernoulliEngine = None):
    """``B*_d(t - w.e_{1/2}; w) / (d! prod w)``."""
    w = as_weights(w)
    engine = engine or default_engine
    prec = engine.precision_bits
    with mpmath.workprec(prec):
        tt = _to_mpf_threshold(t, w, prec)
        return _leading(tt - _half_sum(w, prec), w, engine)


def leading_closed(t, w, engine: BernoulliEngine = None):
    """``B*_d(t + w.e_{1/2}; w) / (d! prod w)``."""
    w = as_weights(w)
    engine = engine or default_engine
    prec = engine.precision_bits
    with mpmath.workprec(prec):
        tt = _to_mpf_threshold(t, w, prec)
        return _leading(tt + _half_sum(w, prec), w, engine)


def leading_shifted(t, w, u, engine: BernoulliEngine = None):
    """``B*_d(t + w.((u)); w) / (d! prod w)``."""
    w = as_weights(w)
    sv = _as_shift(u, w.d)
    engine = engine or default_engine
    prec = engine.precision_bits
    with mpmath.workprec(prec):
        tt = _to_mpf_threshold(t, w, prec)
        shift = mpmath.fsum(
            wj * (mpmath.mpf(st.numerator) / st.denominator)
            for wj, st in zip(w.mpf_values(prec), (sawtooth(x) for x in sv.u))
        )
        return _leading(tt + shift, w, engine)


def _to_mpf_threshold(t, w: Weights, prec: int):
    if isinstance(t, (int, Fraction, Surd, str)):
        return w.coerce_threshold(t).to_mpf(prec) if w.exact else w.coerce_threshold(t)
    return mpmath.mpf(t)


# error reports -------------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    """Exact count, leading term and one-sided errors at one threshold."""

    t: object
    kind: str
    exact_count: int
    count_left: int
    count_right: int
    leading: object
    error_left: object
    error_right: object
    rrr: object
    tau: Optional[int]

    CSV_COLUMNS = ("t", "exact", "leading", "err_left", "err_right", "rrr", "tau")

    def to_row(self) -> dict:
        return {
            "t": self.t,
            "exact": self.exact_count,
            "leading": self.leading,
            "err_left": self.error_left,
            "err_right": self.error_right,
            "rrr": self.rrr,
            "tau": self.tau,
        }


def _report(t, kind, left, right, exact, lead, tau_val, prec) -> CountReport:
    with mpmath.workprec(prec):
        el = left - lead
        er = right - lead
        return CountReport(t, kind, exact, left, right, lead, el, er, max(abs(el), abs(er)), tau_val)


def error_report(t, w, kind: str = "open", engine: BernoulliEngine = None) -> CountReport:
    """One-sided limits of ``N^{-/+}`` at ``t`` and the errors against the leading term.

    Limits come from toggling strict/non-strict inequalities, never from
    perturbing ``t``.
    """
    w = as_weights(w)
    engine = engine or default_engine
    if kind == "open":
        left, right = count_pair(t, w, [1] * w.d)
        lead = leading_open(t, w, engine)
        tau_val = right - left if w.exact else None
        return _report(t, kind, left, right, left, lead, tau_val, engine.precision_bits)
    if kind == "closed":
        left, right = count_pair(t, w, [0] * w.d)
        lead = leading_closed(t, w, engine)
        tau_val = None
        if w.exact:
            a, b = count_pair(t, w, [1] * w.d)
            tau_val = b - a
        return _report(t, kind, left, right, right, lead, tau_val, engine.precision_bits)
    raise ValueError(f"kind must be 'open' or 'closed', got {kind!r}")


def error_report_shifted(t, w, u, engine: BernoulliEngine = None) -> CountReport:
    """Same as :func:`error_report` for the shifted count ``N(t; w, u)``."""
    w = as_weights(w)
    sv = _as_shift(u, w.d)
    engine = engine or default_engine
    left, right = _shifted_pair(t, w, sv)
    lead = leading_shifted(t, w, sv, engine)
    return _report(t, "shifted", left, right, left, lead, right - left if w.exact else None, engine.precision_bits)


@dataclass
class InvarianceReport:
    ok: bool
    checked: int
    violations: List[dict]

    def __bool__(self):
        return self.ok


def invariance_check(t, w, shifts: Iterable, delta=Fraction(1, 10), engine: BernoulliEngine = None,
                     rel_tol=None) -> InvarianceReport:
    """Check ``N^-(t) = N(t - w.{u}; w, {u}) = N^+(t - w.e_1) - tau(t)`` for each shift,
    plus the matching identity between the three ``RRR`` values."""
    w = as_weights(w)
    if not w.exact:
        raise UnsupportedRepresentationError("invariance_check needs exact weights")
    engine = engine or default_engine
    t = w.coerce_threshold(t)
    if t <= w.dot([1] * w.d):
        raise ValueError("need t > w.e_1")
    if rel_tol is None:
        rel_tol = mpmath.ldexp(1, -(engine.precision_bits // 2))
    rep_open = error_report(t, w, "open", engine)
    t_closed = t - w.dot([1] * w.d)
    rep_closed = error_report(t_closed, w, "closed", engine)
    tau_t = rep_open.tau
    violations = []
    checked = 0
    for u in shifts:
        sv = u if isinstance(u, ShiftVector) else ShiftVector(tuple(u), delta)
        if not sv.in_U:
            raise ValueError(f"shift {sv.u} is not in U({sv.delta})")
        fu = ShiftVector(sv.frac, sv.delta)
        t_shift = t - w.dot(fu.u)
        rep_shift = error_report_shifted(t_shift, w, fu, engine)
        a, b, c = rep_open.exact_count, rep_shift.exact_count, rep_closed.exact_count - tau_t
        if not (a == b == c):
            violations.append({"u": sv.u, "identity": "count", "values": (a, b, c)})
        r1, r2, r3 = rep_open.rrr, rep_shift.rrr, rep_closed.rrr
        scale = max(1, abs(r1))
        if abs(r1 - r2) > rel_tol * scale or abs(r1 - r3) > rel_tol * scale:
            violations.append({"u": sv.u, "identity": "rrr", "values": (r1, r2, r3)})
        e1, e2 = rep_open.error_left, rep_shift.error_left
        if abs(e1 - e2) > rel_tol * max(1, abs(e1)):
            violations.append({"u": sv.u, "identity": "error", "values": (e1, e2)})
        checked += 1
    return InvarianceReport(not violations, checked, violations)
