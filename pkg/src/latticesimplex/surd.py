"""Exact arithmetic in multi-quadratic fields.

A :class:`Surd` is a finite sum ``sum_i c_i * sqrt(n_i)`` with rational
coefficients ``c_i`` and distinct squarefree radicands ``n_i`` (``n = 1``
carries the rational part).  Square roots of distinct squarefree integers are
linearly independent over Q, so a Surd is zero exactly when every coefficient
is zero.  The sign of a nonzero Surd is found by integer interval refinement,
which always terminates.
"""
from __future__ import annotations

import ast
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Dict, Iterable, Tuple, Union

import mpmath

__all__ = ["Surd", "parse_surd", "squarefree_split", "as_surd", "SurdLike"]

SurdLike = Union["Surd", int, Fraction]


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> Tuple[int, int]:
    """Return ``(a, s)`` with ``n == a*a*s`` and ``s`` squarefree."""
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    a, s, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        a *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return a, s * n


def _prime_factors(n: int) -> Tuple[int, ...]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


class Surd:
    """Immutable element of Q(sqrt n_1, ..., sqrt n_k)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, value: SurdLike = 0):
        if isinstance(value, Surd):
            self._terms = value._terms
        elif isinstance(value, (int, Rational)):
            q = Fraction(value)
            self._terms = ((1, q),) if q else ()
        else:
            raise TypeError(f"cannot build Surd from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _from_dict(cls, d: Dict[int, Fraction]) -> "Surd":
        obj = cls.__new__(cls)
        obj._terms = tuple(sorted((n, c) for n, c in d.items() if c))
        obj._hash = None
        return obj

    @classmethod
    def sqrt(cls, n: int, coeff: SurdLike = 1) -> "Surd":
        """``coeff * sqrt(n)`` for a positive integer ``n``."""
        a, s = squarefree_split(int(n))
        return cls._from_dict({s: Fraction(a)}) * coeff

    @property
    def terms(self) -> Tuple[Tuple[int, Fraction], ...]:
        return self._terms

    def is_rational(self) -> bool:
        return all(n == 1 for n, _ in self._terms)

    def rational_part(self) -> Fraction:
        for n, c in self._terms:
            if n == 1:
                return c
        return Fraction(0)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.rational_part()

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        d = dict(self._terms)
        for n, c in other._terms:
            d[n] = d.get(n, 0) + c
        return Surd._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Surd._from_dict({n: -c for n, c in self._terms})

    def __sub__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Surd):
            q = Fraction(other)
            return Surd._from_dict({n: c * q for n, c in self._terms})
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        d: Dict[int, Fraction] = {}
        for n1, c1 in self._terms:
            for n2, c2 in other._terms:
                g = math.gcd(n1, n2)
                s = (n1 // g) * (n2 // g)
                d[s] = d.get(s, 0) + c1 * c2 * g
        return Surd._from_dict(d)

    __rmul__ = __mul__

    def conjugate(self, p: int) -> "Surd":
        """Flip the sign of every term whose radicand is divisible by ``p``."""
        return Surd._from_dict({n: (-c if n % p == 0 else c) for n, c in self._terms})

    def inverse(self) -> "Surd":
        if not self._terms:
            raise ZeroDivisionError("Surd division by zero")
        num, y = Surd(1), self
        primes = sorted({p for n, _ in self._terms for p in _prime_factors(n)})
        for p in primes:
            c = y.conjugate(p)
            num = num * c
            y = y * c
        return num * (1 / y.to_fraction())

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Surd):
            return self * (1 / Fraction(other))
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out, base = Surd(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def _cmp(self, other) -> int:
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    # evaluation --------------------------------------------------------
    def interval(self, bits: int) -> Tuple[int, int]:
        """Integers ``lo <= self * 2**bits <= hi``."""
        lo = hi = 0
        for n, c in self._terms:
            a, b = c.numerator, c.denominator
            if n == 1:
                lo += (a << bits) // b
                hi += -((-a << bits) // b)
                continue
            s = math.isqrt(n << (2 * bits))  # s <= sqrt(n)*2^bits < s+1
            if a > 0:
                lo += (a * s) // b
                hi += -((-a * (s + 1)) // b)
            else:
                lo += (a * (s + 1)) // b
                hi += -((-a * s) // b)
        return lo, hi

    def sign(self) -> int:
        if not self._terms:
            return 0
        bits = 64
        while True:
            lo, hi = self.interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.rational_part())
        bits = 64
        while True:
            lo, hi = self.interval(bits)
            if lo >> bits == hi >> bits:
                return lo >> bits
            bits *= 2

    __floor__ = floor

    def __float__(self) -> float:
        lo, hi = self.interval(80)
        return (lo + hi) / (1 << 81)

    def to_mpf(self, prec: int = 128):
        with mpmath.workprec(prec + 16):
            acc = mpmath.mpf(0)
            for n, c in self._terms:
                term = mpmath.mpf(c.numerator) / c.denominator
                if n != 1:
                    term *= mpmath.sqrt(n)
                acc += term
        with mpmath.workprec(prec):
            return +acc

    def __repr__(self):
        return f"Surd({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for n, c in self._terms:
            if n == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({n})")
            else:
                parts.append(f"{c}*sqrt({n})")
        return " + ".join(parts).replace("+ -", "- ")


def as_surd(x, strict: bool = True):
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Rational)):
        return Surd(x)
    if isinstance(x, float) and strict:
        return Surd(Fraction(x))
    if strict:
        raise TypeError(f"cannot convert {type(x).__name__} to Surd")
    return NotImplemented


_PHI = Surd(Fraction(1, 2)) + Surd.sqrt(5, Fraction(1, 2))


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        v = node.value
        return Surd(Fraction(str(v)) if isinstance(v, float) else v)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow) and b.is_rational() and b.to_fraction().denominator == 1:
            return a ** int(b.to_fraction())
    if isinstance(node, ast.Name):
        name = node.id
        if name == "phi":
            return _PHI
        if name.startswith("sqrt") and name[4:].isdigit():
            return Surd.sqrt(int(name[4:]))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) == 1:
            arg = _eval_node(node.args[0])
            if arg.is_rational():
                q = arg.to_fraction()
                if q > 0:
                    # sqrt(a/b) = sqrt(a*b)/b
                    return Surd.sqrt(q.numerator * q.denominator) / q.denominator
    raise ValueError(f"unsupported surd expression: {ast.dump(node)}")


def parse_surd(text: str) -> Surd:
    """Parse expressions such as ``"sqrt2"``, ``"(1+sqrt(5))/2"``, ``"phi"``, ``"3/7"``."""
    src = text.strip().replace("√", "sqrt").replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc
    return _eval_node(tree)


def surd_sum(values: Iterable[SurdLike]) -> Surd:
    d: Dict[int, Fraction] = {}
    for v in values:
        for n, c in as_surd(v)._terms:
            d[n] = d.get(n, 0) + c
    return Surd._from_dict(d)
