"""Verifiable secret sharing of colored graphs.

A verification set of shares (VSoS) is a group of share indices whose
combination must itself be a correctly, minimally colored graph. The dealer
has to find KGH shares such that every VSoS in the verification structure
passes while the full set still adds up to the secret.

The dealer works by rejection sampling over the t-1 free shares. A VSoS can
be decided as soon as either all of its members are drawn, or all shares
outside it are (its sum is then the secret minus theirs). In the default
``sequential`` strategy each share is redrawn until the VSoS that just became
decidable pass, which keeps desk-scale dealings (6 vertices, 4 shares, all
pairs) within reach. ``joint`` redraws all free shares together, which
samples uniformly from the accepted set but only works for tiny secrets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import rng as rngmod
from .checkdigit import VerifyOutcome, decode_tests, encode, payload_graph, strip_extension
from .coloring import SIZE_GUARD, is_n_colorable, is_valid_coloring
from .errors import (
    DealerExhausted,
    InvalidRecovery,
    InvalidSecret,
    NonBinaryStructureDigit,
    ShapeMismatch,
)
from .graph import Coloring, Graph, PaddingInfo, from_structure_bits, number_from_graph, to_structure_bits, triangular
from .secretshare import GraphShare, check_shapes, combine_colored_graph


@dataclass(frozen=True)
class VerificationStructure:
    t: int
    members: tuple[frozenset[int], ...]

    def __init__(self, t: int, members: Iterable[Iterable[int]]):
        if t < 2:
            raise ValueError(f"need t >= 2, got {t}")
        seen = []
        for vsos in members:
            vsos = frozenset(int(i) for i in vsos)
            if len(vsos) < 2:
                raise ValueError(f"a VSoS needs at least 2 shares, got {sorted(vsos)}")
            if any(not 1 <= i <= t for i in vsos):
                raise ValueError(f"VSoS {sorted(vsos)} has indices outside 1..{t}")
            if vsos not in seen:
                seen.append(vsos)
        if not seen:
            raise ValueError("verification structure is empty")
        seen.sort(key=lambda s: (len(s), sorted(s)))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "members", tuple(seen))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def parse(cls, t: int, text: str) -> "VerificationStructure":
        """One VSoS per line, indices separated by commas or whitespace; '#' starts a comment."""
        members = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if line:
                members.append(int(tok) for tok in line.split())
        return cls(t, members)


def pairwise_structure(t: int) -> VerificationStructure:
    return VerificationStructure(t, itertools.combinations(range(1, t + 1), 2))


def full_structure(t: int) -> VerificationStructure:
    return VerificationStructure(t, [range(1, t + 1)])


def vsos_label(vsos: Iterable[int]) -> str:
    return "-".join(str(i) for i in sorted(vsos))


# ---------------------------------------------------------------------------
# one round

def verify_round(shares: Sequence[GraphShare], k: int | None = None, size_guard: int = SIZE_GUARD) -> VerifyOutcome:
    """Combine a subset of shares and run the check-digit decoding tests on the result."""
    check_shapes(shares, k)
    try:
        g, c = combine_colored_graph(shares, k)
    except NonBinaryStructureDigit:
        return VerifyOutcome.MALFORMED
    return decode_tests(g, c.digits, size_guard)


@dataclass(frozen=True)
class RoundReport:
    """Outcomes of every VSoS check, ``(round, vsos, outcome)`` per entry.

    ``deterministic`` is set when the same shares were checked in every
    round, in which case extra rounds add no confidence.
    """

    rounds: int
    results: tuple[tuple[int, frozenset[int], VerifyOutcome], ...]
    deterministic: bool = True

    @property
    def positive(self) -> bool:
        return all(o is VerifyOutcome.POSITIVE for _, _, o in self.results)

    @property
    def verdict(self) -> VerifyOutcome:
        for _, _, o in self.results:
            if o is not VerifyOutcome.POSITIVE:
                return o
        return VerifyOutcome.POSITIVE

    @property
    def failing(self) -> list[frozenset[int]]:
        out = []
        for _, vsos, o in self.results:
            if o is not VerifyOutcome.POSITIVE and vsos not in out:
                out.append(vsos)
        return out

    def csv(self) -> str:
        if self.rounds == 1:
            rows = ["vsos,outcome"] + [f"{vsos_label(v)},{o}" for _, v, o in self.results]
        else:
            rows = ["round,vsos,outcome"] + [f"{r},{vsos_label(v)},{o}" for r, v, o in self.results]
        return "\n".join(rows) + "\n"

    def summary(self) -> str:
        checks = len(self.results)
        if self.positive:
            line = f"verdict: Positive ({checks} checks"
        else:
            bad = ", ".join(vsos_label(v) for v in self.failing)
            line = f"verdict: {self.verdict} (failing VSoS: {bad}; {checks} checks"
        if self.rounds > 1 and self.deterministic:
            line += f"; {self.rounds} rounds over fixed shares are identical"
        return line + ")"


ShareTamperFn = Callable[[list[GraphShare], np.random.Generator], list[GraphShare]]


def verify_structure(
    shares: Sequence[GraphShare],
    vs: VerificationStructure,
    rounds: int = 1,
    tamper: Optional[ShareTamperFn] = None,
    rng=None,
    size_guard: int = SIZE_GUARD,
) -> RoundReport:
    """Check every VSoS of ``vs``, ``rounds`` times.

    Without ``tamper`` the rounds repeat the same deterministic checks. With
    it, each round first passes a copy of the shares through ``tamper``.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    by_index = {sh.index: sh for sh in shares}
    if tamper is not None:
        rng = rngmod.as_generator(rng)
    results = []
    for r in range(1, rounds + 1):
        current = by_index
        if tamper is not None:
            current = {sh.index: sh for sh in tamper(list(shares), rng)}
        for vsos in vs:
            missing = [i for i in sorted(vsos) if i not in current]
            if missing:
                raise ShapeMismatch(f"VSoS {vsos_label(vsos)} needs shares {missing}")
            outcome = verify_round([current[i] for i in sorted(vsos)], size_guard=size_guard)
            results.append((r, vsos, outcome))
    return RoundReport(rounds, tuple(results), deterministic=tamper is None)


@dataclass(frozen=True)
class ShareTamper:
    """Corrupt one share: ``part`` is ``structure`` or ``colors``; ``kind`` is
    ``flip_one`` (change one digit) or ``replace_uniform`` (redraw the whole part).

    ``index`` picks the victim; ``None`` picks one uniformly per call.
    :meth:`apply` also returns the victim's index.
    """

    part: str = "structure"
    kind: str = "flip_one"
    index: Optional[int] = None

    def __post_init__(self):
        if self.part not in ("structure", "colors"):
            raise ValueError(f"unknown share part {self.part!r}")
        if self.kind not in ("flip_one", "replace_uniform"):
            raise ValueError(f"unknown share tamper kind {self.kind!r}")

    def apply(self, shares: Sequence[GraphShare], rng) -> tuple[list[GraphShare], int]:
        rng = rngmod.as_generator(rng)
        victims = [sh.index for sh in shares]
        index = self.index if self.index is not None else victims[int(rng.integers(0, len(victims)))]
        out = []
        for sh in shares:
            if sh.index == index:
                sh = self._corrupt(sh, rng)
            out.append(sh)
        return out, index

    def __call__(self, shares, rng):
        return self.apply(shares, rng)[0]

    def _corrupt(self, sh: GraphShare, rng) -> GraphShare:
        digits = list(sh.structure if self.part == "structure" else sh.colors)
        base = sh.ks if self.part == "structure" else sh.k
        if not digits:
            raise ShapeMismatch(f"share {sh.index} has no {self.part} digits to tamper with")
        if self.kind == "flip_one":
            p = int(rng.integers(0, len(digits)))
            digits[p] = (digits[p] + int(rng.integers(1, base))) % base
        else:
            while True:
                new = [int(x) for x in rng.integers(0, base, size=len(digits))]
                if new != digits:
                    digits = new
                    break
        if self.part == "structure":
            return replace(sh, structure=tuple(digits))
        return replace(sh, colors=tuple(digits))


# ---------------------------------------------------------------------------
# dealer

class _Checker:
    """Decoding tests on raw combined digits; agrees with :func:`decode_tests`."""

    def __init__(self, m: int, size_guard: int):
        self.m = m
        self.size_guard = size_guard
        pairs = [(i, j) for i in range(2, m + 1) for j in range(1, i)]
        self.hi = np.array([i - 1 for i, _ in pairs], dtype=np.intp)
        self.lo = np.array([j - 1 for _, j in pairs], dtype=np.intp)

    def __call__(self, structure: np.ndarray, colors: np.ndarray) -> VerifyOutcome:
        if structure.size and structure.max() > 1:
            return VerifyOutcome.MALFORMED
        if np.any((structure == 1) & (colors[self.hi] == colors[self.lo])):
            return VerifyOutcome.COLORING_INVALID
        n = len(np.unique(colors))
        if n > 1 and is_n_colorable(from_structure_bits(structure.tolist()), n - 1, self.size_guard):
            return VerifyOutcome.CHROMATIC_TOO_LOW
        return VerifyOutcome.POSITIVE


class _ColorCandidates:
    def __init__(self, m: int, k: int, pool: int):
        self.m, self.k, self.pool = m, k, pool
        self.table = None
        if k ** m <= pool:
            grid = np.indices((k,) * m).reshape(m, -1).T
            self.table = np.ascontiguousarray(grid, dtype=np.int64)

    def draw(self, rng) -> np.ndarray:
        if self.table is not None:
            return self.table
        return rng.integers(0, self.k, size=(self.pool, self.m))


def _schedule(vs: VerificationStructure) -> dict[int, list[tuple[frozenset[int], tuple[int, ...], bool]]]:
    """Level at which each VSoS becomes decidable, counting free shares 1..t-1.

    Entries are ``(vsos, free indices to sum, subtract_from_secret)``.
    """
    t = vs.t
    plan: dict[int, list] = {}
    for vsos in vs:
        if t in vsos:
            rest = tuple(sorted(set(range(1, t)) - vsos))
            level = max(rest, default=0)
            plan.setdefault(level, []).append((vsos, rest, True))
        else:
            terms = tuple(sorted(vsos))
            plan.setdefault(max(terms), []).append((vsos, terms, False))
    return plan


def deal(
    secret_g: Graph,
    secret_c: Coloring,
    t: int,
    k: int,
    vs: VerificationStructure,
    rng=None,
    max_retries: int = 10**6,
    uniform_modulus: bool = False,
    ext: int = 0,
    strategy: str = "sequential",
    level_budget: int = 25,
    color_pool: int = 1 << 16,
    size_guard: int = SIZE_GUARD,
) -> list[GraphShare]:
    """Deal t shares of a colored graph such that every VSoS in ``vs`` verifies.

    ``max_retries`` bounds the number of redraws beyond the first complete
    draw; in the sequential strategy every single-share redraw counts. A level
    that fails ``level_budget`` times in a row restarts from the first share.

    In the sequential strategy a share's structure part is drawn uniformly and
    its color part is then chosen uniformly among the candidates that pass
    every VSoS decidable at that point. Candidates are all ``k**m`` color
    vectors when that is at most ``color_pool``, else ``color_pool`` random ones.
    """
    if strategy not in ("sequential", "joint"):
        raise ValueError(f"unknown dealer strategy {strategy!r}")
    if vs.t != t:
        raise ValueError(f"verification structure is for t={vs.t}, dealing t={t}")
    if len(secret_c) != secret_g.m:
        raise InvalidSecret(f"coloring has {len(secret_c)} digits for {secret_g.m} vertices")
    if k < 2 or any(x >= k for x in secret_c.digits):
        raise InvalidSecret(f"coloring does not fit in Z_{k} (k >= 2 required)")
    if not is_valid_coloring(secret_g, secret_c):
        raise InvalidSecret("secret coloring is not proper")
    if secret_g.m > size_guard:
        raise InvalidSecret(f"secret has {secret_g.m} vertices, beyond the exact-solver guard {size_guard}")
    rng = rngmod.as_generator(rng)

    m = secret_g.m
    ks = k if uniform_modulus else 2
    s_struct = np.array(to_structure_bits(secret_g), dtype=np.int64)
    s_col = np.array(secret_c.digits, dtype=np.int64)
    check = _Checker(m, size_guard)
    plan = _schedule(vs)

    for vsos, _, _ in plan.get(0, []):
        if check(s_struct, s_col) is not VerifyOutcome.POSITIVE:
            raise InvalidSecret(f"secret itself fails VSoS {vsos_label(vsos)} (coloring not minimal?)")

    free_struct = np.zeros((t - 1, triangular(m)), dtype=np.int64)
    free_col = np.zeros((t - 1, m), dtype=np.int64)
    colors = _ColorCandidates(m, k, color_pool)

    def sums(j: int, terms, from_secret: bool, exclude_own: bool = False):
        idx = [i - 1 for i in terms if not (exclude_own and i == j)]
        st = free_struct[idx].sum(axis=0) if idx else np.zeros(triangular(m), dtype=np.int64)
        co = free_col[idx].sum(axis=0) if idx else np.zeros(m, dtype=np.int64)
        if from_secret:
            return s_struct - st, s_col - co
        return st, co

    def level_passes(j: int) -> bool:
        for _, terms, from_secret in plan.get(j, []):
            st, co = sums(j, terms, from_secret)
            if check(st % ks, co % k) is not VerifyOutcome.POSITIVE:
                return False
        return True

    def draw_share(j: int) -> bool:
        """Draw share j's structure part, then a color part that passes level j if any does."""
        free_struct[j - 1] = rng.integers(0, ks, size=triangular(m))
        constraints = plan.get(j, [])
        if not constraints:
            free_col[j - 1] = rng.integers(0, k, size=m)
            return True
        cands = colors.draw(rng)
        alive = np.ones(len(cands), dtype=bool)
        for _, terms, from_secret in constraints:
            st, base = sums(j, terms, from_secret, exclude_own=True)
            st = (st + (-1 if from_secret else 1) * free_struct[j - 1]) % ks
            if st.size and st.max() > 1:
                return False
            edges = np.flatnonzero(st)
            if edges.size:
                combined = (base + (-1 if from_secret else 1) * cands) % k
                clash = (combined[:, check.hi[edges]] == combined[:, check.lo[edges]]).any(axis=1)
                alive &= ~clash
        for row in rng.permutation(np.flatnonzero(alive)):
            free_col[j - 1] = cands[row]
            if level_passes(j):
                return True
        return False

    limit = (t - 1) + max_retries
    draws = 0
    if strategy == "joint":
        while True:
            for j in range(1, t):
                free_struct[j - 1] = rng.integers(0, ks, size=triangular(m))
                free_col[j - 1] = rng.integers(0, k, size=m)
            draws += t - 1
            if all(level_passes(j) for j in range(1, t)):
                break
            if draws + t - 1 > limit:
                raise DealerExhausted(draws)
    else:
        j, streak = 1, 0
        while j < t:
            draws += 1
            if draw_share(j):
                j, streak = j + 1, 0
                continue
            if draws >= limit:
                raise DealerExhausted(draws)
            streak += 1
            if streak >= level_budget:
                j, streak = 1, 0

    last_struct = (s_struct - free_struct.sum(axis=0)) % ks
    last_col = (s_col - free_col.sum(axis=0)) % k
    rows = list(zip(free_struct, free_col)) + [(last_struct, last_col)]
    n = secret_c.distinct
    shares = [
        GraphShare(j, t, m, ext, n, k, ks, tuple(int(x) for x in st), tuple(int(x) for x in co))
        for j, (st, co) in enumerate(rows, 1)
    ]

    # independent re-check through the reference combine/decode path
    report = verify_structure(shares, vs, size_guard=size_guard)
    g, c = combine_colored_graph(shares, k)
    if not report.positive or g != secret_g or c.digits != secret_c.digits:
        raise AssertionError("dealer produced shares that fail their own verification")
    return shares


def recover_secret(all_shares: Sequence[GraphShare], k: int | None = None) -> tuple[Graph, Coloring]:
    first = check_shapes(all_shares, k)
    if len(all_shares) != first.t:
        raise ShapeMismatch(f"recovery needs all {first.t} shares, got {len(all_shares)}")
    try:
        g, c = combine_colored_graph(all_shares, k)
    except NonBinaryStructureDigit as exc:
        raise InvalidRecovery(str(exc)) from None
    verdict = is_valid_coloring(g, c)
    if not verdict:
        raise InvalidRecovery(
            f"recovered coloring clashes on edge {verdict.first_violation}; a share is missing or tampered"
        )
    return g, c


# ---------------------------------------------------------------------------
# numbers

def number_deal(
    d: str,
    t: int,
    k: int,
    vs: VerificationStructure,
    rng=None,
    ext: int = 0,
    max_retries: int = 10**6,
    **kwargs,
) -> list[GraphShare]:
    """Share a bit string: its graph (optionally extended) with the minimal coloring attached."""
    e = encode(d, ext)
    if k < e.n:
        raise InvalidSecret(f"modulus {k} cannot hold the {e.n} colors the payload needs")
    g = payload_graph(d, ext)
    return deal(g, Coloring(e.check_digits, k), t, k, vs, rng, max_retries, ext=ext, **kwargs)


def number_verify(shares: Sequence[GraphShare], vs: VerificationStructure, **kwargs) -> RoundReport:
    return verify_structure(shares, vs, **kwargs)


def number_recover(all_shares: Sequence[GraphShare], l: int, k: int | None = None) -> str:
    """Recover the shared bit string of length ``l``.

    The share format does not carry ``l``, and trailing zeros are
    indistinguishable from padding, so the caller supplies it.
    """
    g, _ = recover_secret(all_shares, k)
    base = strip_extension(g, all_shares[0].ext)
    return number_from_graph(base, PaddingInfo(l, base.m))


# ---------------------------------------------------------------------------
# tamper-detection simulation

@dataclass(frozen=True)
class DetectionRecord:
    trials: int
    detected: int

    @property
    def rate(self) -> float:
        return self.detected / self.trials


def simulate_detection(
    shares: Sequence[GraphShare],
    vs: VerificationStructure,
    tamper: ShareTamper,
    trials: int,
    seed: int,
) -> DetectionRecord:
    """Tamper with one share per trial; a trial counts as detected when some
    VSoS containing the victim reports anything but Positive."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    detected = 0
    for i in range(trials):
        rng = rngmod.stream(seed, "share-tamper", i)
        tampered, victim = tamper.apply(shares, rng)
        by_index = {sh.index: sh for sh in tampered}
        for vsos in vs:
            if victim in vsos and verify_round([by_index[j] for j in sorted(vsos)]) is not VerifyOutcome.POSITIVE:
                detected += 1
                break
    return DetectionRecord(trials, detected)
