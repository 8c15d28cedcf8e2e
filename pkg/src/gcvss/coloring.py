"""Vertex coloring: validity checks, exact solver, DSATUR and chromatic bounds.

The exact solver is deliberately deterministic. It colors vertices in index
order, trying colors in ascending order, so the first coloring it finds is the
lexicographically smallest proper one. Encoder and verifier both rely on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GraphTooLarge, LengthMismatch
from .graph import Coloring, Graph

SIZE_GUARD = 24


@dataclass(frozen=True)
class ColoringVerdict:
    valid: bool
    first_violation: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.valid


def is_valid_coloring(g: Graph, c: Coloring) -> ColoringVerdict:
    """Check every edge once; the first clash in row-major edge order is reported."""
    if len(c) != g.m:
        raise LengthMismatch(f"coloring has {len(c)} digits for {g.m} vertices")
    digits = c.digits
    for i, j in sorted(g.edges):
        if digits[i - 1] == digits[j - 1]:
            return ColoringVerdict(False, (i, j))
    return ColoringVerdict(True)


def _guard(g: Graph, size_guard: int) -> None:
    if g.m > size_guard:
        raise GraphTooLarge(
            f"{g.m} vertices exceeds the exact-solver guard of {size_guard}; use dsatur_coloring"
        )


def _lex_first_coloring(masks: tuple[int, ...], n: int) -> Optional[list[int]]:
    m = len(masks)
    colors = [-1] * m
    classes = [0] * n

    # A new color may only be opened as the next unused one. The lexicographically
    # smallest coloring always has that shape, so the pruning does not change the answer.
    def place(v: int, used: int) -> bool:
        if v == m:
            return True
        nb = masks[v]
        for c in range(min(n, used + 1)):
            if classes[c] & nb:
                continue
            colors[v] = c
            classes[c] |= 1 << v
            opened = max(used, c + 1)
            if opened < n or _still_colorable(v, opened):
                if place(v + 1, opened):
                    return True
            classes[c] &= ~(1 << v)
        colors[v] = -1
        return False

    def _still_colorable(v: int, opened: int) -> bool:
        # all n colors are open: every later neighbour of v still needs a free color
        later = masks[v] >> (v + 1)
        w = v + 1
        while later:
            if later & 1:
                nbw = masks[w]
                if all(classes[c] & nbw for c in range(opened)):
                    return False
            later >>= 1
            w += 1
        return True

    return colors if place(0, 0) else None


def find_coloring(g: Graph, n: int, size_guard: int = SIZE_GUARD) -> Optional[Coloring]:
    """Lexicographically smallest proper coloring with digits in ``0..n-1``, or None."""
    if n < 1:
        raise ValueError(f"palette size must be >= 1, got {n}")
    _guard(g, size_guard)
    found = _lex_first_coloring(g.masks, n)
    return None if found is None else Coloring(found, n)


def is_n_colorable(g: Graph, n: int, size_guard: int = SIZE_GUARD) -> bool:
    return find_coloring(g, n, size_guard) is not None


def chromatic_number(g: Graph, size_guard: int = SIZE_GUARD) -> int:
    _guard(g, size_guard)
    lo = clique_lower_bound(g, size_guard)
    hi = len(set(dsatur_coloring(g).digits))
    for n in range(lo, hi):
        if _lex_first_coloring(g.masks, n) is not None:
            return n
    return hi


def dsatur_coloring(g: Graph) -> Coloring:
    """Greedy saturation-degree coloring.

    Picks the uncolored vertex seeing the most distinct neighbour colors, ties
    broken by higher degree and then lower index, and gives it the smallest
    color not used by its neighbours.
    """
    m = g.m
    masks = g.masks
    degree = [mask.bit_count() for mask in masks]
    colors = [-1] * m
    seen: list[set[int]] = [set() for _ in range(m)]
    uncolored = set(range(m))
    while uncolored:
        v = min(uncolored, key=lambda u: (-len(seen[u]), -degree[u], u))
        c = 0
        while c in seen[v]:
            c += 1
        colors[v] = c
        uncolored.discard(v)
        nb = masks[v]
        for w in uncolored:
            if nb >> w & 1:
                seen[w].add(c)
    return Coloring(colors, max(colors) + 1)


def _components(masks: tuple[int, ...]) -> list[int]:
    remaining = (1 << len(masks)) - 1
    comps = []
    while remaining:
        frontier = remaining & -remaining
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= masks[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
        comps.append(comp)
        remaining &= ~comp
    return comps


def brooks_upper_bound(g: Graph) -> int:
    """Upper bound on the chromatic number from Brooks' theorem, per component.

    A complete component on ``s`` vertices needs ``s`` colors and an odd cycle
    needs 3; any other connected component is colorable with its maximum
    degree. The graph's bound is the largest component bound.
    """
    masks = g.masks
    bound = 1
    for comp in _components(masks):
        members = [v for v in range(g.m) if comp >> v & 1]
        size = len(members)
        degrees = [masks[v].bit_count() for v in members]
        if all(d == size - 1 for d in degrees):
            b = size
        elif size >= 3 and size % 2 == 1 and all(d == 2 for d in degrees):
            b = 3
        else:
            b = max(max(degrees), 1)
        bound = max(bound, b)
    return bound


def clique_lower_bound(g: Graph, size_guard: int = SIZE_GUARD) -> int:
    """Size of a maximum clique, by branch and bound over bitmask candidate sets."""
    _guard(g, size_guard)
    masks = g.masks
    best = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            expand(size + 1, cand & masks[v])
            cand &= ~(1 << v)

    expand(0, (1 << g.m) - 1)
    return best
