import random

import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, graphs, path
from indeque.decompose import (EDGE, PARALLEL, SERIES, NotSeriesParallel, SPNode, block_decompose,
                               canonical_sp, check_tree, flatten, is_k4_minor_free, realize,
                               recognize_sp, reroot_sp)
from indeque.exact import has_k4_minor_bruteforce
from indeque.gen import random_k4mf, random_sp, triangle_ring
from indeque.graph import Graph, induced_subgraph

THETA = Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
BOWTIE = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def realizes(tree, g):
    verts, edges = realize(tree)
    return verts == set(range(g.n)) and edges == set(g.edges())


def is_binary(tree):
    return all(n.kind == EDGE or len(n.children) == 2 for n in tree.walk())


def test_bowtie_blocks():
    bd = block_decompose(BOWTIE)
    assert bd.blocks == [[0, 1, 2], [2, 3, 4]]
    assert bd.cut_vertices == [2]
    assert sorted(bd.leaf_blocks) == [0, 1]


def test_cycle_is_one_block():
    bd = block_decompose(cycle(4))
    assert bd.blocks == [[0, 1, 2, 3]] and bd.cut_vertices == []


def test_path_has_bridge_blocks():
    bd = block_decompose(path(3))
    assert bd.blocks == [[0, 1], [1, 2]] and bd.cut_vertices == [1]


def test_k4_is_not_series_parallel():
    with pytest.raises(NotSeriesParallel) as info:
        recognize_sp(complete(4), 0, 1)
    assert len(info.value.vertices) == 4


def test_c4_tree_realizes_c4():
    tree = recognize_sp(cycle(4), 0, 1)
    assert tree.kind == PARALLEL and (tree.s, tree.t) == (0, 1)
    assert realizes(tree, cycle(4)) and is_binary(tree)


def test_theta_is_nested_binary_parallel():
    tree = recognize_sp(THETA, 0, 1)
    assert is_binary(tree) and realizes(tree, THETA)
    assert tree.kind == PARALLEL and tree.children[0].kind == PARALLEL
    assert len(canonical_sp(THETA, 0, 1).children) == 3


def test_k4_minor_free_examples():
    assert not is_k4_minor_free(complete(4))[0]
    g, _, _ = triangle_ring(2, 3)
    assert is_k4_minor_free(g)[0]
    both = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (0, 3)] +
                            [(a + 4, b + 4) for a, b in complete(4).edges()])
    ok, reports = is_k4_minor_free(both)
    assert not ok and [r.series_parallel for r in reports] == [True, False]


def test_reroot_c5_at_a_path():
    c5 = cycle(5)
    tree = reroot_sp(recognize_sp(c5, 0, 1), [0, 4, 3])
    assert tree.kind == PARALLEL and (tree.s, tree.t) == (0, 3)
    assert sorted(realize(tree.children[0])[0]) == [0, 3, 4]
    assert realizes(tree, c5)


def test_reroot_triangle_at_an_edge():
    tree = reroot_sp(recognize_sp(complete(3), 0, 1), [1, 2])
    assert tree.kind == PARALLEL
    assert tree.children[0].kind == EDGE and tree.children[1].kind == SERIES


@pytest.mark.parametrize("piece", [[0, 2, 1], [0, 3, 1], [0, 4, 1]])
def test_reroot_theta_each_path(piece):
    tree = reroot_sp(recognize_sp(THETA, 0, 1), piece)
    assert realizes(tree, THETA)
    assert sorted(realize(tree.children[0])[0]) == sorted(piece)


def test_reroot_rejects_foreign_path():
    with pytest.raises(ValueError):
        reroot_sp(recognize_sp(THETA, 0, 1), [2, 3])


def test_check_tree_catches_broken_chain():
    bad = SPNode(SERIES, 0, 2, (SPNode.edge(0, 1), SPNode.edge(3, 2)))
    with pytest.raises(ValueError):
        check_tree(bad)


@given(st.integers(1, 40), st.integers(0, 10**6), st.sampled_from([0.3, 0.5, 0.7]))
def test_recognition_round_trip(edges, seed, p):
    g, tree = random_sp(edges, seed, p)
    assert realizes(tree, g)
    again = recognize_sp(g, tree.s, tree.t)
    assert realizes(again, g) and is_binary(again)
    check_tree(again)
    assert realizes(flatten(again), g)


@given(st.integers(3, 30), st.integers(0, 10**6))
def test_recognition_is_terminal_robust(edges, seed):
    g, _ = random_sp(edges, seed)
    bd = block_decompose(g)
    for block in bd.blocks:
        if len(block) < 3:
            continue
        sub, _ = induced_subgraph(g, block)
        for s, t in sub.edges():
            assert realizes(recognize_sp(sub, s, t), sub)


@given(graphs(12))
def test_block_invariants(g):
    bd = block_decompose(g)
    edge_blocks = {}
    for i, block in enumerate(bd.blocks):
        members = set(block)
        for u, w in g.edges():
            if u in members and w in members:
                edge_blocks.setdefault((u, w), []).append(i)
    # every edge lies in exactly one block
    assert sorted(edge_blocks) == g.edges()
    assert all(len(v) == 1 for v in edge_blocks.values())
    count = {}
    for block in bd.blocks:
        for v in block:
            count[v] = count.get(v, 0) + 1
    assert sorted(v for v, c in count.items() if c >= 2) == bd.cut_vertices
    assert set(count) == set(range(g.n))
    for i in bd.leaf_blocks:
        assert sum(1 for v in bd.blocks[i] if v in set(bd.cut_vertices)) <= 1


@given(st.integers(1, 40), st.integers(0, 10**6))
def test_generated_k4mf_recognized(n, seed):
    ok, reports = is_k4_minor_free(random_k4mf(n, seed))
    assert ok
    for r in reports:
        assert r.tree is None or realize(r.tree)[0] == set(r.vertices)


def test_minor_test_matches_contraction_search():
    rng = random.Random(7)
    for _ in range(150):
        n = rng.randint(1, 8)
        p = rng.choice([0.3, 0.5, 0.7])
        g = Graph.from_edges(n, [(u, w) for u in range(n) for w in range(u + 1, n)
                                 if rng.random() < p])
        assert is_k4_minor_free(g)[0] == (not has_k4_minor_bruteforce(g))
