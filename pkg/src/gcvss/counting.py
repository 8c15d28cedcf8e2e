"""Exact counting of labeled graphs by vertex count and color partition.

Every count here is a power of two, so counts are carried as their base-2
exponent (:class:`CountExponent`) and compared or divided by integer
arithmetic on exponents. The ``oracle_*`` functions enumerate graphs by brute
force and exist to cross-check the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .coloring import chromatic_number
from .errors import TooLargeForOracle
from .graph import Graph, from_structure_bits, triangular

ORACLE_MAX_V = 6


class CountExponent(int):
    """An exponent ``e`` standing for the count ``2**e``."""

    def __new__(cls, e: int):
        if e < 0:
            raise ValueError(f"count exponent must be >= 0, got {e}")
        return super().__new__(cls, e)

    @property
    def e(self) -> int:
        return int(self)

    @property
    def count(self) -> int:
        return 1 << int(self)

    def __repr__(self) -> str:
        return f"CountExponent({int(self)})"


@dataclass(frozen=True)
class ColorPartition:
    """Sizes of the color classes, one positive entry per class."""

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(x) for x in parts)
        if not parts or any(x < 1 for x in parts):
            raise ValueError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def V(self) -> int:
        return sum(self.parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    def classes(self) -> list[list[int]]:
        """Contiguous vertex blocks: the first ``x_1`` vertices get color 0 and so on."""
        out, start = [], 1
        for x in self.parts:
            out.append(list(range(start, start + x)))
            start += x
        return out


def gamma_exponent(V: int) -> CountExponent:
    """All labeled graphs on V vertices: one free bit per vertex pair."""
    if V < 1:
        raise ValueError("V must be >= 1")
    return CountExponent(triangular(V))


def partition_exponent(P: ColorPartition) -> CountExponent:
    # every cross-class pair is a free edge; sum_{i<j} x_i x_j = (V^2 - sum x^2) / 2
    return CountExponent((P.V * P.V - sum(x * x for x in P.parts)) // 2)


def enumerate_color_partitions(V: int, n: int) -> Iterator[ColorPartition]:
    """Partitions of V into exactly n positive parts, non-increasing, reverse-lex order."""
    if not 1 <= n <= V:
        raise ValueError(f"need 1 <= n <= V, got V={V}, n={n}")

    def rec(remaining: int, slots: int, cap: int) -> Iterator[tuple[int, ...]]:
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        hi = min(cap, remaining - (slots - 1))
        lo = -(-remaining // slots)
        for first in range(hi, lo - 1, -1):
            for rest in rec(remaining - first, slots - 1, first):
                yield (first,) + rest

    for parts in rec(V, n, V):
        yield ColorPartition(parts)


def balanced_partition(V: int, n: int) -> ColorPartition:
    if not 1 <= n <= V:
        raise ValueError(f"need 1 <= n <= V, got V={V}, n={n}")
    q, r = divmod(V, n)
    return ColorPartition([q + 1] * r + [q] * (n - r))


def gamma_n_exponent(V: int, n: int) -> CountExponent:
    """Largest partition exponent with n classes.

    Moving a vertex from a class of size a to one of size b <= a - 2 changes
    the exponent by a - b - 1 > 0, so the most balanced split is the maximum.
    """
    return partition_exponent(balanced_partition(V, n))


def check_theorem1(V: int, n: int) -> bool:
    """Exponent form of ``Gamma(V) >= 2**(V-n) * Gamma(V, n)``."""
    return gamma_exponent(V) >= (V - n) + gamma_n_exponent(V, n)


def undetected_probability_bound(V: int, n: int) -> int:
    """Return ``y = V - n``; a random replacement slips through with probability <= 2**-y."""
    if not 1 <= n <= V:
        raise ValueError(f"need 1 <= n <= V, got V={V}, n={n}")
    return V - n


def exact_ratio_exponent(V: int, n: int) -> int:
    """``log2(Gamma(V, n) / Gamma(V))``, always <= ``-(V - n)``."""
    return gamma_n_exponent(V, n) - gamma_exponent(V)


def _oracle_guard(V: int) -> None:
    if V > ORACLE_MAX_V:
        raise TooLargeForOracle(f"enumeration is limited to V <= {ORACLE_MAX_V}, got {V}")
    if V < 1:
        raise ValueError("V must be >= 1")


def all_graphs(V: int) -> Iterator[Graph]:
    """Every labeled graph on V vertices, in structure-bit counting order."""
    _oracle_guard(V)
    t = triangular(V)
    for code in range(1 << t):
        yield from_structure_bits([code >> p & 1 for p in range(t)])


def oracle_count_graphs(V: int) -> int:
    return len({g.edges for g in all_graphs(V)})


def oracle_count_partition_proper(V: int, P: ColorPartition | Sequence[int]) -> int:
    """Graphs on V vertices for which coloring the blocks of P by class is proper."""
    if not isinstance(P, ColorPartition):
        P = ColorPartition(P)
    if P.V != V:
        raise ValueError(f"partition {P.parts} does not sum to V={V}")
    color = {}
    for c, block in enumerate(P.classes()):
        for v in block:
            color[v] = c
    count = 0
    for g in all_graphs(V):
        if all(color[i] != color[j] for i, j in g.edges):
            count += 1
    return count


@lru_cache(maxsize=None)
def _chromatic_histogram(V: int) -> tuple[int, ...]:
    hist = [0] * (V + 1)
    for g in all_graphs(V):
        hist[chromatic_number(g)] += 1
    return tuple(hist)


def oracle_count_n_colorable(V: int, n: int) -> int:
    _oracle_guard(V)
    if not 1 <= n <= V:
        raise ValueError(f"need 1 <= n <= V, got V={V}, n={n}")
    return sum(_chromatic_histogram(V)[: n + 1])
