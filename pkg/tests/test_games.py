import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grundygp import games
from grundygp.games import (
    BitString,
    CMPosition,
    Graph,
    Heaps,
    PositionError,
    Ruleset,
    canonical,
    cm_to_arc_kayles,
    entropy,
    heap_options,
    options,
    parse_position,
    to_heaps,
)
from grundygp.solver import grundy

words = st.text(alphabet="01", min_size=1, max_size=10)


def heapset(*hs):
    return {Heaps(h) for h in hs}


@pytest.mark.parametrize(
    "bits, expected",
    [("001000111", 3), ("0000", 0), ("0101", 3), ("1", 0)],
)
def test_entropy(bits, expected):
    assert entropy(BitString(bits)) == expected


def test_cm_entropy_sums_both_strings():
    assert entropy(CMPosition("01", "10")) == 2
    assert entropy(CMPosition("0110", "0000")) == 2


@pytest.mark.parametrize(
    "bits, drop, expected",
    [
        ("001000111", False, (3, 3, 2, 1)),
        ("001000111", True, (3, 3, 2)),
        ("1", True, ()),
    ],
)
def test_to_heaps(bits, drop, expected):
    assert to_heaps(BitString(bits), drop).heaps == expected


def test_ga1_options_of_00():
    assert options(BitString("00"), Ruleset.GA1) == {BitString("10"), BitString("01")}


def test_kayles_options_of_three():
    # remove 1 (leave 2 or split 1+1) or remove 2 (leave 1)
    assert options(Heaps((3,)), Ruleset.KAYLES) == heapset((2,), (1, 1), (1,))


def test_arc_kayles_single_edge():
    g = Graph((("u", "v", ""),))
    assert options(g, Ruleset.ARC_KAYLES) == {Graph()}


def test_ga1_heap_options_of_four():
    # split 2+2, split 1+3 (-> 3), isolate bit 2 (1,1,2 -> 2)
    assert heap_options(Heaps((4,)), Ruleset.GA1) == heapset((2, 2), (3,), (2,))


def test_ga1_heap_options_small():
    assert heap_options(Heaps((2,)), Ruleset.GA1) == heapset(())
    assert heap_options(Heaps((3,)), Ruleset.GA1) == heapset((2,), ())


def test_ga2_heap_options_of_four():
    assert heap_options(Heaps((4,)), Ruleset.GA2) == heapset((1, 3), (2, 2), (1, 1, 2))


def test_ga2_heap_options_pair_move():
    got = heap_options(Heaps((2, 2)), Ruleset.GA2)
    assert got == heapset((1, 1, 2), (1, 1, 1, 1))


def test_ga1_heap_engine_rejects_unit_heaps():
    with pytest.raises(PositionError):
        heap_options(Heaps((3, 1)), Ruleset.GA1)


def test_ruleset_mismatch():
    with pytest.raises(PositionError):
        options(BitString("0011"), Ruleset.CM)
    with pytest.raises(PositionError):
        options(CMPosition("00", "11"), Ruleset.GA1)


@pytest.mark.parametrize("bad", ["", "012", "ab"])
def test_bitstring_validation(bad):
    with pytest.raises(PositionError):
        BitString(bad)


def test_cm_length_mismatch():
    with pytest.raises(PositionError):
        CMPosition("11", "0")


def test_graph_rejects_self_loop():
    with pytest.raises(PositionError):
        Graph((("a", "a", ""),))


# ---------------------------------------------------------------------------
# Invariants


@given(words)
def test_ga_options_raise_entropy_and_differ(bits):
    p = BitString(bits)
    for r in (Ruleset.GA1, Ruleset.GA2):
        for q in options(p, r):
            assert len(q) == len(p)
            assert entropy(q) > entropy(p)
            assert q != p


@given(words, words)
def test_cm_options_raise_entropy(a, b):
    n = min(len(a), len(b))
    p = CMPosition(a[:n], b[:n])
    for q in options(p, Ruleset.CM):
        assert len(q) == n
        assert entropy(q) > entropy(p)


@given(st.text(alphabet="01", min_size=1, max_size=12))
def test_ga1_reduction_commutes_with_moves(bits):
    p = BitString(bits)
    via_bits = {to_heaps(q, True) for q in options(p, Ruleset.GA1)}
    via_heaps = heap_options(to_heaps(p, True), Ruleset.GA1)
    assert via_bits == via_heaps


@given(st.text(alphabet="01", min_size=1, max_size=12))
def test_ga2_reduction_commutes_with_moves(bits):
    p = BitString(bits)
    via_bits = {to_heaps(q) for q in options(p, Ruleset.GA2)}
    assert via_bits == heap_options(to_heaps(p), Ruleset.GA2)


@given(st.lists(st.integers(1, 8), min_size=1, max_size=4))
def test_ga2_moves_conserve_stones(hs):
    p = Heaps(tuple(hs))
    for q in heap_options(p, Ruleset.GA2):
        assert sum(q.heaps) == sum(p.heaps)
        assert len(q) > len(p)


graphs = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda t: t[0] != t[1]),
    max_size=10,
).map(lambda es: Graph(tuple((str(u), str(v), "") for u, v in es)))


@given(graphs)
def test_arc_kayles_options_shrink(g):
    for q in options(g, Ruleset.ARC_KAYLES):
        assert len(q) < len(g)


# ---------------------------------------------------------------------------
# CM -> ARC KAYLES construction


def test_cm_to_ak_two_bit_extreme():
    g = cm_to_arc_kayles(CMPosition("11", "00"))
    assert len(g) == 5
    labels = {label: (u, v) for u, v, label in g.edges}
    assert set(labels) == {"a1", "a2", "b1", "b2", "x1"}
    # the crossover edge joins the a1-a2 shared vertex to the b1-b2 shared vertex
    shared_a = set(labels["a1"]) & set(labels["a2"])
    shared_b = set(labels["b1"]) & set(labels["b2"])
    assert set(labels["x1"]) == shared_a | shared_b


def test_cm_to_ak_terminal():
    assert cm_to_arc_kayles(CMPosition("01", "10")) == Graph()


def test_cm_to_ak_three_bit_extreme_is_grid_with_corner_pendants():
    g = cm_to_arc_kayles(CMPosition("111", "000"))
    # 2x2 grid (square) with a pendant edge at each corner
    square = [("p", "q"), ("r", "s"), ("p", "r"), ("q", "s")]
    pendants = [("p", "p'"), ("q", "q'"), ("r", "r'"), ("s", "s'")]
    expected = Graph(tuple((u, v, "") for u, v in square + pendants))
    assert canonical(g, Ruleset.ARC_KAYLES) == canonical(expected, Ruleset.ARC_KAYLES)


# ---------------------------------------------------------------------------
# Canonical keys


def test_canonical_examples():
    assert canonical(BitString("0011"), Ruleset.GA1) == canonical(BitString("1100"), Ruleset.GA1)
    assert canonical(BitString("0011"), Ruleset.GA1) != canonical(BitString("1010"), Ruleset.GA1)
    assert canonical(CMPosition("10", "01"), Ruleset.CM) == canonical(CMPosition("01", "10"), Ruleset.CM)


def test_canonical_heaps_order_free():
    assert canonical(Heaps((2, 5, 3)), Ruleset.KAYLES) == canonical(Heaps((5, 3, 2)), Ruleset.KAYLES)


@given(words)
@settings(max_examples=60)
def test_bit_symmetries_preserve_value(bits):
    comp = bits.translate(str.maketrans("01", "10"))
    for r in (Ruleset.GA1, Ruleset.GA2):
        g = grundy(BitString(bits), r)
        for sym in (bits[::-1], comp, comp[::-1]):
            assert canonical(BitString(sym), r) == canonical(BitString(bits), r)
            assert grundy(BitString(sym), r) == g


@given(st.text(alphabet="01", min_size=1, max_size=5), st.text(alphabet="01", min_size=5, max_size=5))
@settings(max_examples=40)
def test_cm_symmetries_preserve_value(a, b):
    b = b[: len(a)]
    p = CMPosition(a, b)
    g = grundy(p, Ruleset.CM)
    flip = str.maketrans("01", "10")
    for q in (
        CMPosition(b, a),
        CMPosition(a[::-1], b[::-1]),
        CMPosition(a.translate(flip), b.translate(flip)),
    ):
        assert canonical(q, Ruleset.CM) == canonical(p, Ruleset.CM)
        assert grundy(q, Ruleset.CM) == g


@given(graphs, st.randoms(use_true_random=False))
def test_graph_key_invariant_under_relabeling(g, rnd):
    names = sorted(g.vertices)
    perm = names[:]
    rnd.shuffle(perm)
    ren = dict(zip(names, (f"v{p}" for p in perm)))
    h = Graph(tuple((ren[u], ren[v], "") for u, v, _ in g.edges))
    assert canonical(g, Ruleset.ARC_KAYLES) == canonical(h, Ruleset.ARC_KAYLES)


def test_graph_key_separates_non_isomorphic():
    path = Graph((("a", "b", ""), ("b", "c", ""), ("c", "d", "")))
    star = Graph((("c", "a", ""), ("c", "b", ""), ("c", "d", "")))
    tri = Graph((("a", "b", ""), ("b", "c", ""), ("a", "c", "")))
    keys = {canonical(x, Ruleset.ARC_KAYLES) for x in (path, star, tri)}
    assert len(keys) == 3


def test_graph_key_large_star_is_fast():
    star = Graph(tuple(("c", f"l{i}", "") for i in range(24)))
    assert canonical(star, Ruleset.ARC_KAYLES) is not None


def test_graph_key_beyond_cap_is_none():
    path = Graph(tuple((f"v{i}", f"v{i + 1}", "") for i in range(games.CANON_EDGE_CAP + 1)))
    assert canonical(path, Ruleset.ARC_KAYLES) is None


def test_graph_components():
    g = parse_position("a-b,b-c,x-y", Ruleset.ARC_KAYLES)
    assert sorted(len(c) for c in g.components()) == [1, 2]


# ---------------------------------------------------------------------------
# Literals


@pytest.mark.parametrize(
    "text, r, expected",
    [
        ("001011", Ruleset.GA1, BitString("001011")),
        ("3,3,2", Ruleset.GA2, Heaps((3, 3, 2))),
        ("10,", Ruleset.GA2, Heaps((10,))),
        ("7", Ruleset.GA1, Heaps((7,))),
        ("110/001", Ruleset.CM, CMPosition("110", "001")),
        ("3", Ruleset.KAYLES, Heaps((3,))),
        ("", Ruleset.KAYLES, Heaps(())),
        ("a-b, b-c", Ruleset.ARC_KAYLES, Graph((("a", "b", ""), ("b", "c", "")))),
    ],
)
def test_parse_position(text, r, expected):
    assert parse_position(text, r) == expected


@pytest.mark.parametrize(
    "text, r",
    [("110/00", Ruleset.CM), ("110", Ruleset.CM), ("3,x", Ruleset.GA2), ("a-", Ruleset.ARC_KAYLES), ("0,2", Ruleset.KAYLES)],
)
def test_parse_position_errors(text, r):
    with pytest.raises(PositionError):
        parse_position(text, r)


@pytest.mark.parametrize(
    "p, r",
    [
        (BitString("0110"), Ruleset.GA1),
        (Heaps((4, 2, 2)), Ruleset.GA2),
        (CMPosition("011", "100"), Ruleset.CM),
        (Graph((("a", "b", ""), ("b", "c", ""))), Ruleset.ARC_KAYLES),
    ],
)
def test_literal_round_trip(p, r):
    assert parse_position(str(p), r) == p


def test_options_set_is_duplicate_free():
    p = BitString("0000")
    got = options(p, Ruleset.GA1)
    raw = [c for c in games.ga1_word_moves("0000")]
    assert len(got) == len(set(raw))
    assert all(isinstance(q, BitString) for q in got)


def test_every_ga1_word_move_is_a_single_flip_or_prefix_flip():
    for bits in ("000000", "001100", "010010"):
        for q in games.ga1_word_moves(bits):
            diff = [i for i, (x, y) in enumerate(zip(bits, q)) if x != y]
            assert len(diff) == 1 or diff == list(range(len(diff)))


def test_ga2_never_flips_last_bit():
    for bits in ("0000", "00110", "111000"):
        for q in games.ga2_word_moves(bits):
            assert q[-1] == bits[-1]


@pytest.mark.parametrize("n", range(1, 6))
def test_ga2_word_moves_count_matches_gap_pairs(n):
    # every move toggles one or two equal gaps: choose 1 or 2 of the n-1 gaps
    bits = "0" * n
    gaps = n - 1
    assert len(games.ga2_word_moves(bits)) == gaps + len(list(itertools.combinations(range(gaps), 2)))
