import numpy as np
import pytest
from scipy.stats import chisquare

from gcvss import rng as rngmod
from gcvss.checkdigit import VerifyOutcome, extend_graph
from gcvss.errors import DealerExhausted, InvalidRecovery, InvalidSecret, ShapeMismatch
from gcvss.graph import Coloring, build_graph, complete_graph
from gcvss.secretshare import GraphShare
from gcvss.vss import (
    ShareTamper,
    VerificationStructure,
    deal,
    full_structure,
    number_deal,
    number_recover,
    number_verify,
    pairwise_structure,
    recover_secret,
    simulate_detection,
    verify_round,
    verify_structure,
    vsos_label,
)

K3 = complete_graph(3)
K3_COLORS = Coloring((0, 1, 2), 4)


def test_pairwise_structure_sizes():
    assert [len(pairwise_structure(t)) for t in (2, 3, 4, 6)] == [1, 3, 6, 15]
    assert [vsos_label(v) for v in pairwise_structure(3)] == ["1-2", "1-3", "2-3"]
    assert list(full_structure(3)) == [frozenset({1, 2, 3})]


def test_structure_validation_and_parse():
    vs = VerificationStructure.parse(4, "# pairs and a triple\n1,2\n3 4\n1 2 3\n2,1\n")
    assert [vsos_label(v) for v in vs] == ["1-2", "3-4", "1-2-3"]
    for bad in ([[1]], [[1, 5]], []):
        with pytest.raises(ValueError):
            VerificationStructure(4, bad)


@pytest.mark.parametrize("seed", range(5))
def test_deal_k3_pairwise(seed):
    vs = pairwise_structure(4)
    shares = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(seed, "deal"))
    report = verify_structure(shares, vs)
    assert report.positive and len(report.results) == 6
    assert recover_secret(shares) == (K3, K3_COLORS)


def test_deal_is_reproducible():
    vs = pairwise_structure(4)
    a = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(3, "deal"))
    b = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(3, "deal"))
    assert a == b


def test_deal_full_structure_first_draw():
    # the only VSoS is the whole set, which is the secret itself
    shares = deal(K3, K3_COLORS, 4, 4, full_structure(4), rngmod.stream(0, "deal"), max_retries=0)
    assert verify_structure(shares, full_structure(4)).positive


def test_deal_zero_retries_exhausts():
    vs = pairwise_structure(4)
    # seed 1: some share fails its first draw
    with pytest.raises(DealerExhausted):
        deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(1, "deal"), max_retries=0)
    with pytest.raises(DealerExhausted):
        deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(1, "deal"), max_retries=0, strategy="joint")
    # seed 0: every share passes on its first draw, which the budget allows
    assert deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(0, "deal"), max_retries=0)


def test_deal_joint_strategy_small_case():
    shares = deal(K3, K3_COLORS, 3, 4, pairwise_structure(3), rngmod.stream(1, "deal"), strategy="joint")
    assert verify_structure(shares, pairwise_structure(3)).positive


def test_deal_rejects_bad_secret(example1):
    with pytest.raises(InvalidSecret):
        deal(example1, Coloring((0, 0, 1, 1), 4), 3, 4, pairwise_structure(3))
    with pytest.raises(InvalidSecret):
        deal(K3, Coloring((0, 1, 2), 3), 3, 2, pairwise_structure(3))


def test_deal_six_vertex_secret(example1):
    g = extend_graph(example1, 2)
    c = Coloring((0, 0, 1, 2, 1, 1), 4)
    vs = pairwise_structure(4)
    shares = deal(g, c, 4, 4, vs, rngmod.stream(5, "deal"))
    assert verify_structure(shares, vs).positive
    assert recover_secret(shares) == (g, c)


def _pair(structures, colors, m=3, k=4):
    return [GraphShare(j, 2, m, 0, 0, k, 2, s, c) for j, (s, c) in enumerate(zip(structures, colors), 1)]


def test_verify_round_fixtures():
    # combined: edge 2-1, colors (1,1,2) -> clash
    assert verify_round(_pair([(1, 0, 0), (0, 0, 0)], [(0, 0, 0), (1, 1, 2)])) is VerifyOutcome.COLORING_INVALID
    # combined: path 1-2 colored with 3 colors -> 2 would do
    assert verify_round(_pair([(1, 1, 0), (0, 1, 0)], [(0, 1, 2), (0, 0, 0)])) is VerifyOutcome.CHROMATIC_TOO_LOW
    assert verify_round(_pair([(1, 1, 1), (0, 0, 0)], [(3, 3, 3), (1, 2, 3)])) is VerifyOutcome.POSITIVE


def test_verify_round_shape_mismatch():
    a = _pair([(1, 0, 0), (0, 0, 0)], [(0, 0, 0), (1, 1, 2)])
    b = _pair([(1, 0, 0), (0, 0, 0)], [(0, 0, 0), (1, 1, 2)], k=5)
    with pytest.raises(ShapeMismatch):
        verify_round([a[0], b[1]])


def test_report_rendering():
    vs = pairwise_structure(3)
    shares = deal(K3, K3_COLORS, 3, 4, vs, rngmod.stream(2, "deal"))
    report = verify_structure(shares, vs)
    assert report.csv() == "vsos,outcome\n1-2,Positive\n1-3,Positive\n2-3,Positive\n"
    assert report.summary() == "verdict: Positive (3 checks)"
    again = verify_structure(shares, vs, rounds=2)
    assert again.csv().startswith("round,vsos,outcome\n1,1-2,Positive\n")
    assert "identical" in again.summary()


def test_empty_tamper_matches_plain_verification():
    vs = pairwise_structure(4)
    shares = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(4, "deal"))
    plain = verify_structure(shares, vs)
    same = verify_structure(shares, vs, tamper=lambda s, rng: s, rng=0)
    assert [o for _, _, o in plain.results] == [o for _, _, o in same.results]


def test_tampered_share_is_flagged():
    vs = pairwise_structure(4)
    shares = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(0, "deal"))
    report = verify_structure(shares, vs, rounds=5, tamper=ShareTamper("colors", "replace_uniform", index=2), rng=1)
    assert not report.positive
    assert all(2 in v for v in report.failing)
    assert "failing VSoS" in report.summary()


def test_share_tamper_changes_exactly_one_share():
    vs = pairwise_structure(4)
    shares = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(0, "deal"))
    gen = np.random.default_rng(0)
    for part in ("structure", "colors"):
        for kind in ("flip_one", "replace_uniform"):
            out, victim = ShareTamper(part, kind).apply(shares, gen)
            changed = [a.index for a, b in zip(shares, out) if a != b]
            assert changed == [victim]
    with pytest.raises(ValueError):
        ShareTamper("diagonal")


def test_recover_errors():
    vs = pairwise_structure(4)
    shares = deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(0, "deal"))
    with pytest.raises(ShapeMismatch):
        recover_secret(shares[:3])
    broken = list(shares)
    sh = broken[0]
    broken[0] = GraphShare(sh.index, sh.t, sh.m, sh.ext, sh.n, sh.k, sh.ks, sh.structure,
                           ((sh.colors[0] + 1) % 4, sh.colors[1], sh.colors[2]))
    # K3: any single color change makes two vertices collide or moves to the free color
    try:
        g, c = recover_secret(broken)
    except InvalidRecovery:
        pass
    else:
        assert c != K3_COLORS


def test_number_pipeline():
    vs = pairwise_structure(4)
    shares = number_deal("011101", 4, 4, vs, rngmod.stream(1, "deal"))
    assert number_verify(shares, vs).positive
    assert number_recover(shares, 6) == "011101"


def test_number_pipeline_with_extension_and_padding():
    vs = pairwise_structure(3)
    shares = number_deal("1011", 3, 4, vs, rngmod.stream(2, "deal"), ext=1)
    assert shares[0].m == 5 and shares[0].ext == 1
    assert number_recover(shares, 4) == "1011"


def test_number_empty_payload():
    vs = pairwise_structure(2)
    shares = number_deal("", 2, 2, vs, rngmod.stream(0, "deal"))
    assert shares[0].m == 1
    assert number_verify(shares, vs).positive
    assert number_recover(shares, 0) == ""


@pytest.fixture(scope="module")
def dealt_marginals():
    # per-share histograms over many pairwise deals of the K3 fixture
    vs = pairwise_structure(4)
    structure = np.zeros((4, 8), dtype=int)
    colors = np.zeros((4, 64), dtype=int)
    for i in range(1500):
        for j, sh in enumerate(deal(K3, K3_COLORS, 4, 4, vs, rngmod.stream(i, "marginal"))):
            structure[j, int("".join(map(str, sh.structure)), 2)] += 1
            a, b, c = sh.colors
            colors[j, a * 16 + b * 4 + c] += 1
    return structure, colors


def test_dealt_share_structure_marginal_is_uniform(dealt_marginals):
    structure, _ = dealt_marginals
    for j in range(4):
        assert chisquare(structure[j]).pvalue > 0.01


def test_dealt_share_color_marginal_is_uniform(dealt_marginals):
    # Fails: accepting only deals where every pair verifies skews each share's
    # color part, also under plain joint rejection sampling.
    _, colors = dealt_marginals
    pvalues = [chisquare(colors[j]).pvalue for j in range(4)]
    assert min(pvalues) > 0.01, pvalues


def test_uniform_replacement_rarely_slips_through(example1):
    # y = 3 for a 6-vertex, 3-chromatic secret
    g = extend_graph(example1, 2)
    vs = pairwise_structure(4)
    shares = deal(g, Coloring((0, 0, 1, 2, 1, 1), 4), 4, 4, vs, rngmod.stream(7, "deal"))
    rec = simulate_detection(shares, vs, ShareTamper("structure", "replace_uniform"), 2000, seed=1)
    p = 2.0 ** -3
    assert 1 - rec.rate <= p + 3 * (p * (1 - p) / rec.trials) ** 0.5
