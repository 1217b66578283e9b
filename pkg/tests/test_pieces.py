import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle
from indeque.decompose import EDGE, SERIES, block_decompose, canonical_sp
from indeque.gen import gamma_fixture, gamma_ring, triangle_ring, triangle_string
from indeque.graph import Graph
from indeque.pieces import (GAMMA_TEMPLATES, BlockView, ZeroParallelPiece, ZeroSeriesPiece,
                            classify_gamma, classify_gamma_raw, find_kite, find_ring,
                            find_zero_parallel_pieces, find_zero_series_pieces,
                            iter_gamma_rings, iter_kites, match_gamma, match_triangle_string,
                            piece_report, string_of)

THETA = Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
# a triangle 0-1-2, a second triangle 2-3-4 and a path 4-5-6-0 closing the block
STRING_WITH_TAIL = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4),
                                        (4, 5), (5, 6), (6, 0)])
# block {0,1,4,5,6} whose only kites meet the string at vertex 5
LONE_JOINT = Graph.from_edges(11, [(0, 1), (0, 3), (0, 4), (0, 5), (0, 6), (1, 5), (1, 6),
                                   (1, 7), (2, 6), (4, 5), (5, 8), (5, 9), (5, 10), (8, 10)])

VARIANTS = [(tag, chord) for tag in range(1, 7)
            for chord in ((False, True) if GAMMA_TEMPLATES[tag]["chord"] else (False,))]


def edge_cover(pieces):
    out = []
    for p in pieces:
        out.extend(tuple(sorted(e)) for e in zip(p.path, p.path[1:]))
    return sorted(out)


def test_c4_pieces_cover_all_edges():
    pieces = find_zero_series_pieces(cycle(4), range(4))
    assert edge_cover(pieces) == cycle(4).edges()


def test_triangle_gives_three_single_edges():
    pieces = find_zero_series_pieces(complete(3), range(3))
    assert sorted(p.path for p in pieces) == [(0, 1), (0, 2), (1, 2)]


def test_theta_gives_three_paths():
    pieces = find_zero_series_pieces(THETA, range(5))
    assert sorted(p.path for p in pieces) == [(0, 2, 1), (0, 3, 1), (0, 4, 1)]
    assert [len(q.constituents) for q in find_zero_parallel_pieces(THETA, range(5))] == [3]


def test_pieces_need_two_connected_block():
    path3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        find_zero_series_pieces(path3, range(3))


def test_cycle_pieces_anchor_at_cut_vertex():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)])
    pieces = find_zero_series_pieces(g, range(5), cut_vertex=0)
    assert edge_cover(pieces) == sorted(e for e in g.edges() if 5 not in e)
    assert all(0 in (p.path[0], p.path[-1]) or 0 not in p.path for p in pieces)


@pytest.mark.parametrize("tag, chord", VARIANTS)
def test_canonical_fixture_matches_own_template(tag, chord):
    g, ids = gamma_fixture(tag, chord)
    v = ids[GAMMA_TEMPLATES[tag]["v"]]
    shape = match_gamma(tag, range(g.n), g.edges(), ids["s"], ids["t"], v)
    assert shape is not None and shape.tag == tag and shape.chord == chord


def test_template_cross_checks_36():
    results = {}
    for fixture in range(1, 7):
        g, ids = gamma_fixture(fixture)
        v = ids[GAMMA_TEMPLATES[fixture]["v"]]
        for template in range(1, 7):
            shape = match_gamma(template, range(g.n), g.edges(), ids["s"], ids["t"], v)
            results[fixture, template] = shape is not None
    assert len(results) == 36
    assert all(results[i, j] == (i == j) for i, j in results)


def test_classify_triangle_terminal_and_internal_v():
    g = complete(3)
    assert classify_gamma_raw([0, 1, 2], g.edges(), 0, 1, 0).tag == 1
    assert classify_gamma_raw([0, 1, 2], g.edges(), 0, 1, 2).tag == 2


def test_classify_c5_with_far_v_is_gamma6():
    # edge st = 0-1 plus path 0-2-3-4-1; vertex 3 is two steps from both terminals
    c5 = Graph.from_edges(5, [(0, 1), (0, 2), (2, 3), (3, 4), (4, 1)])
    q = ZeroParallelPiece(0, 1, (ZeroSeriesPiece((0, 1)), ZeroSeriesPiece((0, 2, 3, 4, 1))))
    assert {tuple(sorted(e)) for e in q.edges()} == set(c5.edges())
    assert classify_gamma(q, 3).tag == 6


def test_classify_requires_v_in_piece():
    q = ZeroParallelPiece(0, 1, (ZeroSeriesPiece((0, 1)), ZeroSeriesPiece((0, 2, 1))))
    with pytest.raises(ValueError):
        classify_gamma(q, 7)


def test_match_single_triangle():
    st_ = match_triangle_string(complete(3), range(3), 0, 1)
    assert st_ is not None and len(st_.triangles) == 1 and st_.chords == ()


def test_match_three_triangle_chain():
    g, s, t = triangle_string(3)
    st_ = match_triangle_string(g, range(g.n), s, t)
    assert st_ is not None and len(st_.triangles) == 3
    assert st_.vertices == frozenset(range(g.n)) and len(st_.apexes) == 3


def test_c4_is_not_a_string():
    assert match_triangle_string(cycle(4), range(4), 0, 1) is None


def test_ring_of_two_plain_strings():
    g, _, _ = triangle_ring(1, 2)
    assert find_ring(g, range(g.n)) == ("plain", frozenset(range(6)))


def test_diamond_is_smallest_ring():
    diamond = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert find_ring(diamond, range(4)) == ("plain", frozenset(range(4)))


@pytest.mark.parametrize("tag", [3, 5])
def test_gamma_ring_matched_back(tag):
    g, ids = gamma_ring(tag, 2)
    v = ids[GAMMA_TEMPLATES[tag]["v"]]
    bd = block_decompose(g)
    block = next(b for b in bd.blocks if v in b and len(b) > 4)
    rings = list(iter_gamma_rings(BlockView(g, block, v)))
    assert rings and rings[0].shape.tag == tag
    assert rings[0].vertices == frozenset(block)


def test_kite_in_string_with_tail():
    kites = list(iter_kites(BlockView(STRING_WITH_TAIL, range(7))))
    assert kites
    for k in kites:
        assert k.path[-1] == k.joint and k.joint in k.string.vertices
        # the far endpoint may close back onto the string; the rest may not
        assert set(k.path[1:]) & set(k.string.vertices) == {k.joint}
        assert k.trimmed == k.string.vertices | {k.path[-2]}
    assert find_kite(STRING_WITH_TAIL, range(7)) == kites[0]


def test_plain_string_has_no_kite():
    g, _, _ = triangle_string(3)
    assert find_kite(g, range(g.n)) is None


def test_kite_only_at_v_is_rejected():
    block = [0, 1, 4, 5, 6]
    assert {k.joint for k in iter_kites(BlockView(LONE_JOINT, block))} == {5}
    assert find_kite(LONE_JOINT, block, 5) is None


def test_piece_report_lists_gamma_around_v():
    g, ids = gamma_ring(4, 2)
    v = ids["v"]
    block = next(b for b in block_decompose(g).blocks if v in b and len(b) > 4)
    report = piece_report(g, block, v)
    assert [x["tag"] for x in report["gamma"]] == [4]
    assert [x["tag"] for x in report["gamma_rings"]] == [4]


@given(st.integers(1, 6), st.integers(1, 6))
def test_ring_pieces_partition_edges(l1, l2):
    g, _, _ = triangle_ring(l1, l2)
    pieces = find_zero_series_pieces(g, range(g.n))
    assert edge_cover(pieces) == g.edges()


@given(st.integers(1, 7))
def test_string_subpieces_are_strings(length):
    # every series/parallel node of a string's tree is again a triangle-string
    g, s, t = triangle_string(length)
    tree = canonical_sp(g, s, t)
    for node in tree.walk():
        if node.kind == SERIES or (node.kind != EDGE and node.vertices != tree.vertices):
            sub = sorted(node.vertices)
            if len(sub) >= 3:
                assert match_triangle_string(g, sub, node.s, node.t) is not None
    assert string_of(tree, g) is not None
