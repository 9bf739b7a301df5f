"""Composition enumeration shared by the Bernoulli and Fourier code."""
from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Iterator, Tuple

__all__ = ["compositions", "multinomial", "count_compositions"]


def compositions(n: int, parts: int, positive: bool = False) -> Iterator[Tuple[int, ...]]:
    """Yield all tuples of ``parts`` integers summing to ``n``.

    Entries are >= 0, or >= 1 when ``positive`` is set.  Order is
    lexicographic in the first coordinate, descending.
    """
    if parts < 0 or n < 0:
        return
    if positive:
        for c in compositions(n - parts, parts):
            yield tuple(x + 1 for x in c)
        return
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def multinomial(parts: Tuple[int, ...]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def count_compositions(n: int, parts: int, positive: bool = False) -> int:
    from math import comb

    if positive:
        n -= parts
    if n < 0 or parts < 0:
        return 0
    if parts == 0:
        return int(n == 0)
    return comb(n + parts - 1, parts - 1)
