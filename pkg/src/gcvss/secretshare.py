"""Additive (t, t) secret sharing over Z_k, plus sharing of colored graphs.

KGH: the secret is a digit vector over Z_k. The first t-1 shares are uniform
random vectors and the last one makes the component-wise sum come out to the
secret. For k = 2 this is XOR with a one-time pad. KGHe is the same scheme
with a set of vectors that are never valid secrets.

A colored graph is shared as two independent KGH dealings: the structure
bits over Z_2 (or over Z_k in uniform-modulus mode) and the vertex colors
over Z_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import rng as rngmod
from .errors import (
    ColorOutOfRange,
    ExcludedSecret,
    LengthMismatch,
    Malformed,
    ModulusMismatch,
    NonBinaryStructureDigit,
    ShapeMismatch,
)
from .graph import Coloring, Graph, from_structure_bits, to_structure_bits, triangular
from .wire import format_digits, parse_digits, parse_fields, parse_text_field, split_lines


@dataclass(frozen=True)
class SecretVector:
    digits: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(x) for x in self.digits))
        if self.k < 2:
            raise ValueError(f"modulus must be >= 2, got {self.k}")
        if any(not 0 <= x < self.k for x in self.digits):
            raise ColorOutOfRange(f"secret digit outside Z_{self.k}")


@dataclass(frozen=True)
class KghShare:
    index: int
    t: int
    k: int
    digits: tuple[int, ...]


def kgh_split(s: SecretVector, t: int, rng=None) -> list[KghShare]:
    if t < 2:
        raise ValueError(f"need at least 2 shares, got t={t}")
    rng = rngmod.as_generator(rng)
    eta = len(s.digits)
    pads = np.asarray(rng.integers(0, s.k, size=(t - 1, eta)), dtype=np.int64).reshape(t - 1, eta)
    last = (np.asarray(s.digits, dtype=np.int64) - pads.sum(axis=0)) % s.k
    rows = [*pads, last]
    return [KghShare(j, t, s.k, tuple(int(x) for x in row)) for j, row in enumerate(rows, 1)]


def kgh_combine(shares: Sequence[KghShare | Sequence[int]], k: int) -> SecretVector:
    """Component-wise sum mod k. Accepts share objects or bare digit sequences."""
    if not shares:
        raise LengthMismatch("nothing to combine")
    vectors = []
    for sh in shares:
        if isinstance(sh, KghShare):
            if sh.k != k:
                raise ModulusMismatch(f"share {sh.index} is over Z_{sh.k}, expected Z_{k}")
            vectors.append(sh.digits)
        else:
            vectors.append(tuple(sh))
    eta = len(vectors[0])
    if any(len(v) != eta for v in vectors):
        raise LengthMismatch("shares have different lengths")
    if any(not 0 <= x < k for v in vectors for x in v):
        raise ModulusMismatch(f"share digit outside Z_{k}")
    total = [sum(col) % k for col in zip(*vectors)] if eta else []
    return SecretVector(tuple(total), k)


class ExclusionSet:
    """Vectors that are never valid secrets, given explicitly or as a predicate."""

    def __init__(self, members: Iterable[Sequence[int]] = (), predicate: Callable[[tuple], bool] | None = None):
        self.members = frozenset(tuple(m) for m in members)
        self.predicate = predicate

    def __contains__(self, digits) -> bool:
        digits = tuple(digits)
        return digits in self.members or (self.predicate is not None and bool(self.predicate(digits)))


def kghe_split(s: SecretVector, t: int, excl: ExclusionSet, rng=None) -> list[KghShare]:
    if s.digits in excl:
        raise ExcludedSecret(f"{s.digits} is an excluded vector")
    return kgh_split(s, t, rng)


def kghe_combine(shares, k: int, excl: ExclusionSet) -> SecretVector:
    s = kgh_combine(shares, k)
    if s.digits in excl:
        raise ExcludedSecret(f"shares combine to excluded vector {s.digits}")
    return s


# ---------------------------------------------------------------------------
# colored graphs

@dataclass(frozen=True)
class GraphShare:
    """One participant's share of a colored graph.

    ``structure`` holds m(m-1)/2 digits over Z_ks, ``colors`` m digits over Z_k.
    """

    index: int
    t: int
    m: int
    ext: int
    n: int
    k: int
    ks: int
    structure: tuple[int, ...]
    colors: tuple[int, ...]

    def shape(self) -> tuple:
        return (self.t, self.m, self.ext, self.n, self.k, self.ks)


def split_colored_graph(
    g: Graph,
    c: Coloring,
    t: int,
    k: int,
    rng=None,
    uniform_modulus: bool = False,
    ext: int = 0,
) -> list[GraphShare]:
    if len(c) != g.m:
        raise LengthMismatch(f"coloring has {len(c)} digits for {g.m} vertices")
    if k < 2:
        raise ValueError(f"modulus must be >= 2, got {k}")
    if any(x >= k for x in c.digits):
        raise ColorOutOfRange(f"coloring does not fit in Z_{k}")
    rng = rngmod.as_generator(rng)
    ks = k if uniform_modulus else 2
    structure = kgh_split(SecretVector(tuple(to_structure_bits(g)), ks), t, rng)
    colors = kgh_split(SecretVector(c.digits, k), t, rng)
    n = c.distinct
    return [
        GraphShare(j, t, g.m, ext, n, k, ks, s.digits, col.digits)
        for j, (s, col) in enumerate(zip(structure, colors), 1)
    ]


def check_shapes(shares: Sequence[GraphShare], k: int | None = None) -> GraphShare:
    if not shares:
        raise ShapeMismatch("no shares given")
    first = shares[0]
    for sh in shares:
        if sh.shape() != first.shape():
            raise ShapeMismatch(f"share {sh.index} has shape {sh.shape()}, share {first.index} has {first.shape()}")
        if len(sh.structure) != triangular(sh.m) or len(sh.colors) != sh.m:
            raise ShapeMismatch(f"share {sh.index} digit counts do not match m={sh.m}")
    if k is not None and first.k != k:
        raise ShapeMismatch(f"shares are over Z_{first.k}, expected Z_{k}")
    if len({sh.index for sh in shares}) != len(shares):
        raise ShapeMismatch("duplicate share indices")
    return first


def combine_colored_graph(shares: Sequence[GraphShare], k: int | None = None) -> tuple[Graph, Coloring]:
    """Sum structure parts mod ks and color parts mod k, separately.

    With ks = 2 any subset combines to some colored graph. In uniform-modulus
    mode a subset can sum to a structure digit other than 0/1, which raises
    :class:`NonBinaryStructureDigit`.
    """
    first = check_shapes(shares, k)
    structure = kgh_combine([sh.structure for sh in shares], first.ks).digits
    colors = kgh_combine([sh.colors for sh in shares], first.k).digits
    bad = [p for p, b in enumerate(structure) if b > 1]
    if bad:
        raise NonBinaryStructureDigit(f"combined structure digit {structure[bad[0]]} at position {bad[0]}")
    return from_structure_bits(structure), Coloring(colors, first.k)


# ---------------------------------------------------------------------------
# share file format

SHARE_MAGIC = "GCVS1"


def serialize_share(sh: GraphShare) -> str:
    return (
        f"{SHARE_MAGIC}\n"
        f"index={sh.index}  t={sh.t}\n"
        f"m={sh.m}  ext={sh.ext}  n={sh.n}  k={sh.k}  ks={sh.ks}\n"
        f"S={format_digits(sh.structure, sh.ks)}\n"
        f"C={format_digits(sh.colors, sh.k)}\n"
    )


def parse_share(text: str) -> GraphShare:
    lines = split_lines(text, 5)
    if lines[0] != SHARE_MAGIC:
        raise Malformed(f"bad magic {lines[0]!r}", 1)
    head = parse_fields(lines[1], ["index", "t"], 2)
    geo = parse_fields(lines[2], ["m", "ext", "n", "k", "ks"], 3)
    if not 1 <= head["index"] <= head["t"] or head["t"] < 2:
        raise Malformed("need t >= 2 and 1 <= index <= t", 2, "index")
    if geo["m"] < 1:
        raise Malformed("m must be >= 1", 3, "m")
    if geo["k"] < 2:
        raise Malformed("k must be >= 2", 3, "k")
    if geo["ks"] not in (2, geo["k"]):
        raise Malformed("ks must be 2 or equal to k", 3, "ks")
    s = parse_digits(parse_text_field(lines[3], "S", 4), geo["ks"], triangular(geo["m"]), 4, "S")
    c = parse_digits(parse_text_field(lines[4], "C", 5), geo["k"], geo["m"], 5, "C")
    return GraphShare(head["index"], head["t"], geo["m"], geo["ext"], geo["n"], geo["k"], geo["ks"], s, c)
