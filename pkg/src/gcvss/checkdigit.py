"""Graph-coloring check digits for bit strings.

A payload ``D`` is laid out as the below-diagonal part of an adjacency matrix
(:func:`gcvss.graph.graph_from_number`), optionally grown by ``ext`` extra
vertices, and the minimal coloring of the resulting graph is attached as the
check digits. The verifier rebuilds the graph from the received payload and
accepts only if the check digits are a proper coloring that cannot be
squeezed into one color less.

Encoding::

    >>> e = encode("011101")
    >>> e.check_digits, e.n
    ((0, 0, 1, 2), 3)
    >>> verify(e)
    <VerifyOutcome.POSITIVE: 'Positive'>
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from . import rng as rngmod
from .coloring import SIZE_GUARD, chromatic_number, find_coloring, is_n_colorable, is_valid_coloring
from .errors import (
    ColorOutOfRange,
    ExtensionPatternMismatch,
    Malformed,
    PayloadTooShort,
    SamplingExhausted,
)
from .graph import Coloring, Graph, graph_from_number, triangular, vertices_for_length
from .wire import format_digits, parse_digits, parse_fields, parse_text_field, split_lines


# ---------------------------------------------------------------------------
# matrix extension

def extend_graph(g: Graph, ext: int) -> Graph:
    """Append ``ext`` vertices, each joined to vertex 1 only.

    The star on vertex 1 keeps the chromatic number at ``max(chi(g), 2)`` and
    the receiver can regenerate it from ``ext`` alone.
    """
    if ext < 0:
        raise ValueError(f"extension count must be >= 0, got {ext}")
    if ext == 0:
        return g
    extra = {(g.m + i, 1) for i in range(1, ext + 1)}
    return Graph(g.m + ext, g.edges | extra)


def strip_extension(ge: Graph, ext: int) -> Graph:
    if ext < 0 or ext > ge.m - 1:
        raise ValueError(f"cannot strip {ext} vertices from a {ge.m}-vertex graph")
    if ext == 0:
        return ge
    m = ge.m - ext
    for v in range(m + 1, ge.m + 1):
        if ge.masks[v - 1] != 1:
            raise ExtensionPatternMismatch(
                f"extension vertex {v} has neighbours {ge.neighbors(v)}, expected [1]"
            )
    return Graph(m, frozenset((i, j) for i, j in ge.edges if i <= m))


# ---------------------------------------------------------------------------
# envelope

class VerifyOutcome(enum.Enum):
    POSITIVE = "Positive"
    COLORING_INVALID = "ColoringInvalid"
    CHROMATIC_TOO_LOW = "ChromaticTooLow"
    MALFORMED = "Malformed"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Envelope:
    d: str
    l: int
    m: int
    ext: int
    n: int
    k: int
    check_digits: tuple[int, ...]


def check_envelope(e: Envelope) -> None:
    """Raise :class:`Malformed` if the envelope's fields are mutually inconsistent.

    The header ``n`` is not consulted here; verification infers the palette
    size from the check digits themselves.
    """
    if any(ch not in "01" for ch in e.d):
        raise Malformed("payload is not a bit string", field="D")
    if e.l != len(e.d):
        raise Malformed(f"l={e.l} but payload has {len(e.d)} bits", field="l")
    if e.ext < 0:
        raise Malformed("negative extension count", field="ext")
    if e.m - e.ext != vertices_for_length(e.l):
        raise Malformed(f"m - ext = {e.m - e.ext} does not cover l={e.l} minimally", field="m")
    if e.k < 1:
        raise Malformed("modulus must be >= 1", field="k")
    if len(e.check_digits) != e.m:
        raise Malformed(f"{len(e.check_digits)} check digits for m={e.m}", field="C")
    if any(not 0 <= x < e.k for x in e.check_digits):
        raise Malformed(f"check digit outside Z_{e.k}", field="C")


def payload_graph(d: str, ext: int) -> Graph:
    g, _ = graph_from_number(d)
    return extend_graph(g, ext)


def decode_tests(g: Graph, digits: Sequence[int], size_guard: int = SIZE_GUARD) -> VerifyOutcome:
    """The two decoding checks: proper coloring, then no coloring with one color fewer."""
    c = Coloring(digits, max(digits, default=0) + 1)
    if not is_valid_coloring(g, c):
        return VerifyOutcome.COLORING_INVALID
    n = c.distinct
    if n > 1 and is_n_colorable(g, n - 1, size_guard):
        return VerifyOutcome.CHROMATIC_TOO_LOW
    return VerifyOutcome.POSITIVE


def encode(d: str, ext: int = 0, k: int | None = None, size_guard: int = SIZE_GUARD) -> Envelope:
    g = payload_graph(d, ext)
    n = chromatic_number(g, size_guard)
    col = find_coloring(g, n, size_guard)
    if k is None:
        k = n
    elif k < n:
        raise ColorOutOfRange(f"modulus {k} is smaller than the {n} colors needed")
    return Envelope(d, len(d), g.m, ext, n, k, col.digits)


def verify(e: Envelope, size_guard: int = SIZE_GUARD) -> VerifyOutcome:
    try:
        check_envelope(e)
    except Malformed:
        return VerifyOutcome.MALFORMED
    return decode_tests(payload_graph(e.d, e.ext), e.check_digits, size_guard)


# ---------------------------------------------------------------------------
# wire format

MAGIC = "GCCD1"


def serialize_envelope(e: Envelope) -> str:
    return (
        f"{MAGIC}\n"
        f"l={e.l}\n"
        f"m={e.m}  ext={e.ext}\n"
        f"n={e.n}  k={e.k}\n"
        f"D={e.d}\n"
        f"C={format_digits(e.check_digits, e.k)}\n"
    )


def parse_envelope(text: str) -> Envelope:
    lines = split_lines(text, 6)
    if lines[0] != MAGIC:
        raise Malformed(f"bad magic {lines[0]!r}", 1)
    l = parse_fields(lines[1], ["l"], 2)["l"]
    geo = parse_fields(lines[2], ["m", "ext"], 3)
    pal = parse_fields(lines[3], ["n", "k"], 4)
    d = parse_text_field(lines[4], "D", 5)
    if len(d) != l or any(ch not in "01" for ch in d):
        raise Malformed(f"payload must be {l} bits", 5, "D")
    if pal["k"] < 1:
        raise Malformed("modulus must be >= 1", 4, "k")
    c = parse_digits(parse_text_field(lines[5], "C", 6), pal["k"], geo["m"], 6, "C")
    e = Envelope(d, l, geo["m"], geo["ext"], pal["n"], pal["k"], c)
    check_envelope(e)
    if len(set(c)) != e.n:
        raise Malformed(f"n={e.n} but check digits use {len(set(c))} colors", 4, "n")
    return e


# ---------------------------------------------------------------------------
# tampering

@dataclass(frozen=True)
class TamperModel:
    """How a transmission error is simulated.

    ``kind`` is ``flip_one_bit``, ``flip_j_bits`` (flip ``j`` distinct
    positions) or ``replace_uniform`` (any other value, uniformly). With
    ``target="checkdigits"`` the check digits are hit instead of the payload;
    that case lies outside the usual analysis, which assumes the check digits
    travel over a reliable channel.
    """

    kind: str = "replace_uniform"
    j: int = 1
    target: str = "payload"

    KINDS = ("flip_one_bit", "flip_j_bits", "replace_uniform")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown tamper model {self.kind!r}")
        if self.target not in ("payload", "checkdigits"):
            raise ValueError(f"unknown tamper target {self.target!r}")
        if self.kind == "flip_one_bit" and self.j != 1:
            raise ValueError("flip_one_bit flips exactly one position")

    @classmethod
    def parse(cls, spec: str, target: str = "payload") -> "TamperModel":
        """``flip_one_bit``, ``flip_j_bits:3`` or ``replace_uniform``."""
        name, _, arg = spec.partition(":")
        if name == "flip_j_bits":
            if not arg.isdigit():
                raise ValueError("flip_j_bits needs a count, e.g. flip_j_bits:2")
            return cls(name, int(arg), target)
        if arg:
            raise ValueError(f"{name} takes no argument")
        return cls(name, 1, target)

    def __str__(self) -> str:
        return f"flip_j_bits:{self.j}" if self.kind == "flip_j_bits" else self.kind


def _alter_digits(values: list[int], base: int, model: TamperModel, rng) -> list[int]:
    size = len(values)
    if model.kind == "replace_uniform":
        if size == 0 or base < 2:
            raise PayloadTooShort("nothing to replace: only one possible value")
        while True:
            out = [int(x) for x in rng.integers(0, base, size=size)]
            if out != values:
                return out
    j = model.j
    if base < 2 or j < 1 or j > size:
        raise PayloadTooShort(f"cannot change {j} of {size} positions")
    if j == 1:
        positions = [int(rng.integers(0, size))]
    else:
        positions = [int(p) for p in rng.choice(size, size=j, replace=False)]
    out = list(values)
    for p in positions:
        # binary: flip; larger alphabets: move to a different digit
        out[p] = (out[p] + int(rng.integers(1, base))) % base if base > 2 else 1 - out[p]
    return out


def tamper(e: Envelope, model: TamperModel, rng) -> Envelope:
    """Return a copy of ``e`` whose payload (or check digits) differs from the original."""
    rng = rngmod.as_generator(rng)
    if model.target == "payload":
        bits = _alter_digits([int(ch) for ch in e.d], 2, model, rng)
        return replace(e, d="".join(map(str, bits)))
    digits = tuple(_alter_digits(list(e.check_digits), e.k, model, rng))
    return replace(e, check_digits=digits, n=len(set(digits)))


# ---------------------------------------------------------------------------
# Monte-Carlo estimate of the undetected-error rate

@dataclass(frozen=True)
class SweepRecord:
    V: int
    n: int
    y: int
    trials: int
    undetected_count: int
    empirical_rate: float
    bound_2_pow_neg_y: float

    FIELDS = ("V", "n", "y", "trials", "undetected_count", "empirical_rate", "bound_2_pow_neg_y")

    @property
    def sigma(self) -> float:
        p = self.bound_2_pow_neg_y
        return math.sqrt(p * (1 - p) / self.trials)

    def within_bound(self, sigmas: float = 3.0) -> bool:
        return self.empirical_rate <= self.bound_2_pow_neg_y + sigmas * self.sigma

    def csv_row(self) -> str:
        return ",".join(str(getattr(self, f)) for f in self.FIELDS)


def sample_payload(V: int, n_target: int, rng, max_samples: int = 100_000) -> str:
    """Uniform V(V-1)/2-bit payload whose graph has chromatic number ``n_target``."""
    l = triangular(V)
    for _ in range(max_samples):
        d = "".join(str(int(b)) for b in rng.integers(0, 2, size=l))
        if chromatic_number(graph_from_number(d)[0]) == n_target:
            return d
    raise SamplingExhausted(f"no {V}-vertex graph with chromatic number {n_target} in {max_samples} draws")


def _run_trials(V, n_target, model, seed, lo, hi, max_samples) -> int:
    undetected = 0
    for i in range(lo, hi):
        rng = rngmod.stream(seed, "tamper-sweep", V, n_target, str(model), model.target, i)
        e = encode(sample_payload(V, n_target, rng, max_samples))
        if verify(tamper(e, model, rng)) is VerifyOutcome.POSITIVE:
            undetected += 1
    return undetected


def estimate_undetected_rate(
    V: int,
    n_target: int,
    trials: int,
    model: TamperModel,
    seed: int,
    jobs: int = 1,
    max_samples: int = 100_000,
) -> SweepRecord:
    """Encode random payloads on V vertices with chromatic number ``n_target``,
    corrupt each once with ``model``, and count how many still verify.

    Trial ``i`` draws from its own stream keyed by ``seed`` and ``i``, so the
    result does not depend on ``jobs``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= n_target <= V:
        raise SamplingExhausted(f"no graph on {V} vertices has chromatic number {n_target}")
    if V > SIZE_GUARD:
        raise ValueError(f"V={V} exceeds the exact-solver guard {SIZE_GUARD}")
    if jobs <= 1:
        undetected = _run_trials(V, n_target, model, seed, 0, trials, max_samples)
    else:
        bounds = [trials * w // jobs for w in range(jobs + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_run_trials, V, n_target, model, seed, bounds[w], bounds[w + 1], max_samples)
                for w in range(jobs)
            ]
            undetected = sum(f.result() for f in futures)
    y = V - n_target
    return SweepRecord(V, n_target, y, trials, undetected, undetected / trials, 2.0 ** -y)
