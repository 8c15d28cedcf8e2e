import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from conftest import ScriptedRng
from gcvss.errors import (
    ColorOutOfRange,
    ExcludedSecret,
    LengthMismatch,
    Malformed,
    ModulusMismatch,
    NonBinaryStructureDigit,
    ShapeMismatch,
)
from gcvss.graph import Coloring, build_graph
from gcvss.secretshare import (
    ExclusionSet,
    GraphShare,
    KghShare,
    SecretVector,
    combine_colored_graph,
    kgh_combine,
    kgh_split,
    kghe_combine,
    kghe_split,
    parse_share,
    serialize_share,
    split_colored_graph,
)


def test_xor_one_time_pad():
    s = SecretVector((1, 0, 1, 1), 2)
    shares = kgh_split(s, 2, ScriptedRng(np.array([[0, 1, 1, 0]])))
    assert shares[0].digits == (0, 1, 1, 0)
    assert shares[1].digits == (1, 1, 0, 1)


def test_mod4_split_example():
    shares = kgh_split(SecretVector((1, 2, 0), 4), 2, ScriptedRng(np.array([[3, 3, 3]])))
    assert shares[1].digits == (2, 3, 1)


def test_zero_pads_leave_secret_in_last_share():
    s = SecretVector((2, 1, 0, 3), 4)
    shares = kgh_split(s, 4, ScriptedRng(np.zeros((3, 4), dtype=int)))
    assert shares[-1].digits == s.digits
    assert [sh.index for sh in shares] == [1, 2, 3, 4]


def test_combine_examples():
    assert kgh_combine([(1, 2, 0), (3, 3, 3)], 4).digits == (0, 1, 3)
    assert kgh_combine([(0, 0, 0)], 3).digits == (0, 0, 0)
    with pytest.raises(LengthMismatch):
        kgh_combine([(1, 2), (1,)], 4)
    with pytest.raises(ModulusMismatch):
        kgh_combine([(1, 5)], 4)
    with pytest.raises(ModulusMismatch):
        kgh_combine([KghShare(1, 2, 3, (1,))], 4)
    with pytest.raises(LengthMismatch):
        kgh_combine([], 4)


def test_secret_vector_validation():
    with pytest.raises(ValueError):
        SecretVector((0,), 1)
    with pytest.raises(ColorOutOfRange):
        SecretVector((0, 4), 4)


def test_split_needs_two_shares():
    with pytest.raises(ValueError):
        kgh_split(SecretVector((1,), 2), 1)


def test_round_trip_randomized():
    rnd = random.Random(2024)
    gen = np.random.default_rng(2024)
    for _ in range(1000):
        t, k, eta = rnd.randint(2, 6), rnd.choice((2, 3, 4)), rnd.randint(0, 12)
        s = SecretVector([rnd.randrange(k) for _ in range(eta)], k)
        assert kgh_combine(kgh_split(s, t, gen), k) == s


@settings(max_examples=100)
@given(st.integers(2, 6), st.sampled_from([2, 3, 4, 7]), st.data())
def test_round_trip_property(t, k, data):
    digits = data.draw(st.lists(st.integers(0, k - 1), max_size=12))
    s = SecretVector(digits, k)
    assert kgh_combine(kgh_split(s, t, data.draw(st.integers(0, 2**32))), k) == s


def _chi_square_uniform(samples, k, eta):
    codes = np.zeros(len(samples), dtype=np.int64)
    for p in range(eta):
        codes = codes * k + samples[:, p]
    counts = np.bincount(codes, minlength=k**eta)
    return chisquare(counts).pvalue


def test_every_t_minus_1_subset_is_uniform():
    k, eta, t, n = 2, 4, 3, 10_000
    gen = np.random.default_rng(77)
    secret = SecretVector((1, 0, 1, 1), k)
    rows = [kgh_split(secret, t, gen) for _ in range(n)]
    for subset in itertools.combinations(range(t), t - 1):
        combined = np.array([[sum(r[j].digits[p] for j in subset) % k for p in range(eta)] for r in rows])
        assert _chi_square_uniform(combined, k, eta) > 0.01
        for j in subset:
            single = np.array([r[j].digits for r in rows])
            assert _chi_square_uniform(single, k, eta) > 0.01


def test_kghe():
    excl = ExclusionSet([(0, 0)])
    s = SecretVector((1, 2), 3)
    assert kghe_combine(kghe_split(s, 3, excl, 5), 3, excl) == s
    with pytest.raises(ExcludedSecret):
        kghe_split(SecretVector((0, 0), 3), 3, excl)
    with pytest.raises(ExcludedSecret):
        kghe_combine([(1, 2), (2, 1)], 3, excl)
    by_rule = ExclusionSet(predicate=lambda d: sum(d) == 0)
    assert (0, 0) in by_rule and (1, 0) not in by_rule


def test_colored_graph_round_trip(example1):
    c = Coloring((0, 0, 2, 1), 4)
    shares = split_colored_graph(example1, c, 4, 4, np.random.default_rng(3))
    assert all(sh.ks == 2 and len(sh.structure) == 6 and len(sh.colors) == 4 for sh in shares)
    assert combine_colored_graph(shares) == (example1, c)


def test_colored_graph_single_vertex():
    shares = split_colored_graph(build_graph(1), Coloring((0,), 2), 2, 2, 0)
    assert [len(sh.structure) for sh in shares] == [0, 0]
    assert [len(sh.colors) for sh in shares] == [1, 1]
    assert combine_colored_graph(shares) == (build_graph(1), Coloring((0,), 2))


def test_colored_graph_deterministic(example1):
    c = Coloring((0, 0, 2, 1), 3)
    assert split_colored_graph(example1, c, 3, 3, 8) == split_colored_graph(example1, c, 3, 3, 8)
    assert split_colored_graph(example1, c, 3, 3, 8) != split_colored_graph(example1, c, 3, 3, 9)


def test_identical_pair_combines_to_edgeless(example1):
    sh = split_colored_graph(example1, Coloring((0, 0, 2, 1), 4), 2, 4, 1)[0]
    twin = GraphShare(2, *[getattr(sh, f) for f in ("t", "m", "ext", "n", "k", "ks", "structure", "colors")])
    g, _ = combine_colored_graph([sh, twin])
    assert g.edges == frozenset()


def test_subsets_always_combine(example1):
    shares = split_colored_graph(example1, Coloring((0, 0, 2, 1), 4), 4, 4, 5)
    for r in range(1, 5):
        for subset in itertools.combinations(shares, r):
            g, c = combine_colored_graph(list(subset))
            assert g.m == 4 and len(c) == 4


def test_uniform_modulus_mode(example1):
    shares = split_colored_graph(example1, Coloring((0, 0, 2, 1), 4), 3, 4, 6, uniform_modulus=True)
    assert all(sh.ks == 4 for sh in shares)
    assert combine_colored_graph(shares) == (example1, Coloring((0, 0, 2, 1), 4))
    raised = 0
    for pair in itertools.combinations(shares, 2):
        try:
            combine_colored_graph(list(pair))
        except NonBinaryStructureDigit:
            raised += 1
    # pair sums over Z_4 leave {0, 1} somewhere for this seed
    assert raised > 0


def test_shape_mismatch(example1):
    a = split_colored_graph(example1, Coloring((0, 0, 2, 1), 4), 2, 4, 1)
    b = split_colored_graph(example1, Coloring((0, 0, 2, 1), 5), 2, 5, 1)
    with pytest.raises(ShapeMismatch):
        combine_colored_graph([a[0], b[1]])
    with pytest.raises(ShapeMismatch):
        combine_colored_graph([a[0], a[0]])
    with pytest.raises(ShapeMismatch):
        combine_colored_graph(a, k=5)


SHARE_TEXT = "GCVS1\nindex=1  t=2\nm=3  ext=0  n=2  k=4  ks=2\nS=101\nC=032\n"


def test_share_wire_round_trip(example1):
    sh = parse_share(SHARE_TEXT)
    assert sh == GraphShare(1, 2, 3, 0, 2, 4, 2, (1, 0, 1), (0, 3, 2))
    assert serialize_share(sh) == SHARE_TEXT
    for sh in split_colored_graph(example1, Coloring((0, 0, 2, 1), 12), 3, 12, 4):
        assert parse_share(serialize_share(sh)) == sh


@pytest.mark.parametrize(
    "text",
    [
        SHARE_TEXT.replace("GCVS1", "GCCD1"),
        SHARE_TEXT.replace("index=1", "index=3"),
        SHARE_TEXT.replace("S=101", "S=121"),
        SHARE_TEXT.replace("S=101", "S=10"),
        SHARE_TEXT.replace("C=032", "C=042"),
        SHARE_TEXT.replace("ks=2", "ks=3"),
        SHARE_TEXT.replace("k=4", "k=1"),
        SHARE_TEXT[:-1],
    ],
)
def test_share_wire_rejects(text):
    with pytest.raises(Malformed):
        parse_share(text)
