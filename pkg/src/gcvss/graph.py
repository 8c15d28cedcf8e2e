"""Labeled graphs and the codec between graphs, digit sequences and numbers.

Vertices are numbered ``1..m``. An edge ``{i, j}`` is stored once as the pair
``(i, j)`` with ``i > j``, i.e. by the coordinates of its below-diagonal entry
``a_ij`` in the adjacency matrix.

The below-diagonal entries are flattened row by row::

    a21, a31, a32, a41, a42, a43, ..., a_m(m-1)

so entry ``a_ij`` lands at position ``(i-1)(i-2)/2 + (j-1)``. A colored graph
appends its vertex colors (the matrix diagonal ``a11 ... amm``) after that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    ColorOutOfRange,
    DuplicateEdge,
    LengthMismatch,
    NonBinaryStructureDigit,
    NonTriangularLength,
    PaddingMismatch,
    SelfLoop,
    VertexOutOfRange,
)


def triangular(m: int) -> int:
    """Number of below-diagonal entries of an ``m x m`` matrix."""
    return m * (m - 1) // 2


def bit_position(i: int, j: int) -> int:
    """Flattened index of entry ``a_ij`` (``i > j``, 1-based)."""
    return (i - 1) * (i - 2) // 2 + (j - 1)


def vertices_for_length(length: int) -> int:
    """Smallest ``m >= 1`` with ``m(m-1)/2 >= length``."""
    if length < 0:
        raise ValueError("length must be non-negative")
    m = max(1, (1 + math.isqrt(1 + 8 * length)) // 2)
    while triangular(m) < length:
        m += 1
    while m > 1 and triangular(m - 1) >= length:
        m -= 1
    return m


@dataclass(frozen=True)
class Graph:
    m: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.m < 1:
            raise VertexOutOfRange(f"vertex count must be >= 1, got {self.m}")
        for i, j in self.edges:
            if i == j:
                raise SelfLoop(f"self-loop at vertex {i}")
            if not (1 <= j < i <= self.m):
                raise VertexOutOfRange(f"edge ({i}, {j}) outside 1..{self.m} or not stored as i > j")

    def __repr__(self) -> str:
        return f"Graph(m={self.m}, edges={sorted(self.edges)})"

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbour sets as bitmasks, 0-based: bit ``b`` of ``masks[a]`` is edge {a+1, b+1}."""
        out = [0] * self.m
        for i, j in self.edges:
            out[i - 1] |= 1 << (j - 1)
            out[j - 1] |= 1 << (i - 1)
        return tuple(out)

    def has_edge(self, i: int, j: int) -> bool:
        return (max(i, j), min(i, j)) in self.edges

    def degree(self, v: int) -> int:
        return self.masks[v - 1].bit_count()

    def neighbors(self, v: int) -> list[int]:
        mask = self.masks[v - 1]
        return [b + 1 for b in range(self.m) if mask >> b & 1]

    def is_complete(self) -> bool:
        return len(self.edges) == triangular(self.m)


def build_graph(m: int, edges: Iterable[Sequence[int]] = ()) -> Graph:
    """Build a graph from unordered vertex pairs, 1-based, in any orientation."""
    if m < 1:
        raise VertexOutOfRange(f"vertex count must be >= 1, got {m}")
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        a, b = pair
        if a == b:
            raise SelfLoop(f"self-loop at vertex {a}")
        for v in (a, b):
            if not 1 <= v <= m:
                raise VertexOutOfRange(f"vertex {v} outside 1..{m}")
        key = (max(a, b), min(a, b))
        if key in seen:
            raise DuplicateEdge(f"edge {{{a}, {b}}} given twice")
        seen.add(key)
    return Graph(m, frozenset(seen))


def complete_graph(m: int) -> Graph:
    return Graph(m, frozenset((i, j) for i in range(2, m + 1) for j in range(1, i)))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return build_graph(m, [(v, v % m + 1) for v in range(1, m + 1)])


def path_graph(m: int) -> Graph:
    return build_graph(m, [(v, v + 1) for v in range(1, m)])


def to_structure_bits(g: Graph) -> list[int]:
    bits = [0] * triangular(g.m)
    for i, j in g.edges:
        bits[bit_position(i, j)] = 1
    return bits


def from_structure_bits(bits: Sequence[int]) -> Graph:
    m = vertices_for_length(len(bits))
    if triangular(m) != len(bits):
        raise NonTriangularLength(f"{len(bits)} is not m(m-1)/2 for any m")
    edges = set()
    p = 0
    for i in range(2, m + 1):
        for j in range(1, i):
            b = bits[p]
            if b not in (0, 1):
                raise NonBinaryStructureDigit(f"structure digit {b!r} at position {p}")
            if b:
                edges.add((i, j))
            p += 1
    return Graph(m, frozenset(edges))


@dataclass(frozen=True)
class PaddingInfo:
    """How a bit string of length ``l`` was laid out over ``m`` vertices."""

    l: int
    m: int

    @property
    def pad_count(self) -> int:
        return triangular(self.m) - self.l


def graph_from_number(d: str) -> tuple[Graph, PaddingInfo]:
    """Encode a bit string as a graph; missing entries are zero-filled."""
    if any(ch not in "01" for ch in d):
        raise ValueError(f"payload must be a bit string, got {d!r}")
    l = len(d)
    m = vertices_for_length(l)
    bits = [int(ch) for ch in d] + [0] * (triangular(m) - l)
    return from_structure_bits(bits), PaddingInfo(l, m)


def number_from_graph(g: Graph, p: PaddingInfo) -> str:
    if p.m != g.m:
        raise PaddingMismatch(f"padding describes {p.m} vertices, graph has {g.m}")
    bits = to_structure_bits(g)
    if any(bits[p.l:]):
        raise PaddingMismatch("padding entries are nonzero")
    return "".join(map(str, bits[: p.l]))


@dataclass(frozen=True, init=False)
class Coloring:
    """Vertex colors ``digits[v-1]`` in ``Z_k``."""

    digits: tuple[int, ...]
    k: int

    def __init__(self, digits: Iterable[int], k: int | None = None):
        digits = tuple(int(x) for x in digits)
        if k is None:
            k = max(digits, default=0) + 1
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "k", k)
        if k < 1:
            raise ColorOutOfRange(f"modulus must be >= 1, got {k}")
        for v, d in enumerate(digits, 1):
            if not 0 <= d < k:
                raise ColorOutOfRange(f"color {d} of vertex {v} outside Z_{k}")

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, v: int) -> int:
        return self.digits[v]

    def __iter__(self):
        return iter(self.digits)

    @property
    def distinct(self) -> int:
        return len(set(self.digits))


def flatten_colored(g: Graph, c: Coloring) -> list[int]:
    if len(c) != g.m:
        raise LengthMismatch(f"coloring has {len(c)} digits for {g.m} vertices")
    return to_structure_bits(g) + list(c.digits)


def unflatten_colored(seq: Sequence[int], m: int, k: int) -> tuple[Graph, Coloring]:
    t = triangular(m)
    if len(seq) != t + m:
        raise LengthMismatch(f"expected {t + m} digits for m={m}, got {len(seq)}")
    for p, b in enumerate(seq[:t]):
        if b not in (0, 1):
            raise NonBinaryStructureDigit(f"structure digit {b!r} at position {p}")
    return from_structure_bits(seq[:t]), Coloring(seq[t:], k)
