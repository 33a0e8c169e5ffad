"""gcd of lag sets, Frobenius numbers and residue-class helpers."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import reduce

from .errors import NotCoprime


def gcd_set(s) -> int:
    """gcd of a set of positive integers; 0 for the empty set."""
    return reduce(math.gcd, s, 0)


def representable(n: int, s) -> bool:
    """True iff ``n`` is a nonnegative integer combination of the elements of ``s``."""
    if n < 0:
        return False
    gens = sorted(set(s))
    reach = [False] * (n + 1)
    reach[0] = True
    for i in range(1, n + 1):
        reach[i] = any(g <= i and reach[i - g] for g in gens)
    return reach[n]


def frobenius_number(s) -> int:
    """Largest integer not representable by ``s``; -1 when every nonnegative integer is.

    Shortest paths over residues modulo the smallest generator: ``dist[r]`` is
    the least representable integer congruent to ``r``, and the Frobenius
    number is ``max(dist) - min(s)``.
    """
    gens = sorted(set(s))
    if not gens or gcd_set(gens) != 1:
        raise NotCoprime(f"generators {gens} are not coprime")
    m = gens[0]
    if m == 1:
        return -1
    dist = [math.inf] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d > dist[r]:
            continue
        for g in gens[1:]:
            nd, nr = d + g, (r + g) % m
            if nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return max(dist) - m


@dataclass(frozen=True)
class NumericalSemigroupInfo:
    generators: frozenset
    gcd: int
    frobenius: int | None

    @classmethod
    def of(cls, s) -> "NumericalSemigroupInfo":
        gens = frozenset(s)
        g = gcd_set(gens)
        return cls(gens, g, frobenius_number(gens) if g == 1 else None)


def reduced_generators(lags) -> tuple[int, set]:
    """Divide a lag set by its gcd; returns ``(g, {i // g})``."""
    g = gcd_set(lags)
    if g == 0:
        return 0, set()
    return g, {i // g for i in lags}


def residue_pattern(k: int, modulus: int, on_class: dict, default):
    """Initial conditions x_{-1} ... x_{-k} with value ``on_class[(-m) % modulus]`` or ``default``."""
    return tuple(on_class.get((-m) % modulus, default) for m in range(1, k + 1))
