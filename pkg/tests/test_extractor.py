import math

import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle
from indeque.decompose import block_decompose
from indeque.exact import brute_force_max
from indeque.extractor import (WHOLE_GAMMA_SETS, ContraPair, NoRuleMatched, NotK4MinorFree,
                               _block_candidates, contra_pair_problem, extract_half,
                               find_contra_pair)
from indeque.gen import (c4_union, gamma_fixture, gamma_ring, kite, random_k4mf, random_sp,
                         random_tree, triangle_ring, triangle_string)
from indeque.graph import Graph, induced_subgraph, verify_indeque
from indeque.pieces import GAMMA_TEMPLATES, BlockView
import indeque.extractor as extractor

VARIANTS = [(tag, chord) for tag in range(1, 7)
            for chord in ((False, True) if GAMMA_TEMPLATES[tag]["chord"] else (False,))]


def with_diamond(g, v):
    """Hang a diamond (K4 minus an edge) off ``v`` so ``v`` becomes a cut vertex."""
    n = g.n
    far, c, d = n, n + 1, n + 2
    extra = [(v, far), (v, c), (v, d), (far, c), (far, d)]
    return Graph.from_edges(n + 3, g.edges() + extra)


def pendant_string(length):
    """Edge v-t in parallel with a triangle-string from v to t, with v a cut vertex."""
    g, s, t = triangle_string(length)
    return with_diamond(Graph.from_edges(g.n, g.edges() + [(s, t)]), s), s


def leaf_block_at(g, v):
    return max((b for b in block_decompose(g).blocks if v in b), key=len)


def check_trace(g, result, trace):
    xs = [set(step.x) for step in trace.steps]
    assert sum(len(x) for x in xs) == g.n
    assert set().union(*xs) == set(range(g.n)) if xs else g.n == 0
    assert sorted(v for step in trace.steps for v in step.s) == result
    assert verify_indeque(g, result)
    assert len(result) >= math.ceil(g.n / 2)


def test_c4_is_one_r3_step():
    cp = find_contra_pair(cycle(4))
    assert cp.rule == "R3" and cp.x == (0, 1, 2, 3)
    assert len(cp.s) == 2 and cycle(4).has_edge(*cp.s)


def test_star_uses_degree_one_rule():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    cp = find_contra_pair(star)
    assert cp.rule == "R2" and cp.s == (1,) and cp.x == (0, 1)


def test_isolated_vertex_rule():
    assert find_contra_pair(Graph.empty(2)) == ContraPair((0,), (0,), "R1")


@pytest.mark.parametrize("l1, l2", [(2, 2), (2, 3), (3, 4)])
def test_ring_block_takes_half(l1, l2):
    g, _, _ = triangle_ring(l1, l2)
    cp = find_contra_pair(g)
    assert cp.rule == "R4" and 2 * len(cp.s) == len(cp.x)


@pytest.mark.parametrize("k", [1, 2, 5, 13])
def test_c4_union_gives_exactly_half(k):
    result, trace = extract_half(c4_union(k))
    assert len(result) == 2 * k
    check_trace(c4_union(k), result, trace)


def test_triangle_keeps_two():
    result, trace = extract_half(complete(3))
    assert len(result) >= 2 and trace.bound_ok


def test_empty_graph():
    result, trace = extract_half(Graph.empty(0))
    assert result == [] and trace.steps == [] and trace.to_json()["bound_ok"]


def test_k4_rejected():
    with pytest.raises(NotK4MinorFree):
        extract_half(complete(4))


def test_trace_json_shape():
    g, _, _ = triangle_ring(2, 2)
    _, trace = extract_half(g)
    doc = trace.to_json()
    assert set(doc) == {"steps", "set", "n", "bound_ok", "skipped"}
    assert set(doc["steps"][0]) >= {"rule", "X", "S"}


def test_contra_pair_problems_are_reported():
    g = cycle(5)
    assert contra_pair_problem(g, [0, 1, 2], [1]) is not None          # too small
    assert contra_pair_problem(g, [0, 1], [0, 1]) is not None          # 0 sees 4
    assert contra_pair_problem(g, [0, 1, 2, 3], [1, 2]) is None


@pytest.mark.parametrize("tag, chord", VARIANTS)
def test_whole_gamma_sets(tag, chord):
    h, ids = gamma_fixture(tag, chord)
    v = ids[GAMMA_TEMPLATES[tag]["v"]]
    s = [ids[r] for r in WHOLE_GAMMA_SETS[tag]]
    assert v not in s and 2 * len(s) >= h.n
    assert verify_indeque(h, s)
    # the oracle on the shape minus v confirms the stored set is attainable
    rest, _ = induced_subgraph(h, [x for x in range(h.n) if x != v])
    assert len(s) <= brute_force_max(rest)[0]
    g = with_diamond(h, v)
    assert contra_pair_problem(g, range(h.n), s) is None


@pytest.mark.parametrize("tag, chord", VARIANTS)
def test_whole_gamma_rule_fires_on_bare_shape(tag, chord):
    h, ids = gamma_fixture(tag, chord)
    v = ids[GAMMA_TEMPLATES[tag]["v"]]
    g = with_diamond(h, v)
    cands = [c for c in _block_candidates(BlockView(g, range(h.n), v)) if c[0] == "R8"]
    assert any(contra_pair_problem(g, x, s) is None for _, x, s, _ in cands)


@pytest.mark.parametrize("tag, chord", [vc for vc in VARIANTS if vc[0] >= 2])
@pytest.mark.parametrize("length", [2, 3])
def test_gamma_ring_candidates_are_valid(tag, chord, length):
    g, ids = gamma_ring(tag, length, chord)
    v = ids[GAMMA_TEMPLATES[tag]["v"]]
    cands = [c for c in _block_candidates(BlockView(g, leaf_block_at(g, v), v))
             if c[0] == "R6"]
    assert cands
    assert all(c[3] == tag for c in cands)
    assert all(contra_pair_problem(g, x, s) is None for _, x, s, _ in cands)


@pytest.mark.parametrize("length", [2, 3, 4])
def test_pendant_string_candidate_is_valid(length):
    g, v = pendant_string(length)
    cands = [c for c in _block_candidates(BlockView(g, leaf_block_at(g, v), v))
             if c[0] == "R7"]
    assert cands
    assert all(contra_pair_problem(g, x, s) is None for _, x, s, _ in cands)


def test_kite_fixture_extracts():
    for path_len in (2, 3, 4):
        for length in (1, 2, 3):
            g, _ = kite(path_len, length)
            result, trace = extract_half(g)
            check_trace(g, result, trace)


def test_no_rule_matched_surfaces_and_fallback_recovers(monkeypatch):
    g, _, _ = triangle_ring(2, 3)
    monkeypatch.setattr(extractor, "_block_candidates", lambda view: iter(()))
    with pytest.raises(NoRuleMatched) as info:
        extract_half(g)
    assert info.value.graph.n == g.n
    result, trace = extract_half(g, fallback_exact=True)
    assert any(step.rule == "FALLBACK" for step in trace.steps)
    check_trace(g, result, trace)


@given(st.integers(1, 60), st.integers(0, 10**9))
def test_half_bound_on_random_k4mf(n, seed):
    g = random_k4mf(n, seed)
    result, trace = extract_half(g)
    check_trace(g, result, trace)


@given(st.integers(1, 12), st.integers(0, 10**9))
def test_half_is_sandwiched_on_small_graphs(n, seed):
    g = random_k4mf(n, seed)
    result, _ = extract_half(g)
    assert math.ceil(n / 2) <= len(result) <= brute_force_max(g)[0]


@given(st.integers(1, 40), st.integers(0, 10**9))
def test_half_bound_on_random_sp(edges, seed):
    g, _ = random_sp(edges, seed)
    result, trace = extract_half(g)
    check_trace(g, result, trace)


@given(st.integers(1, 30), st.integers(0, 10**9))
def test_half_bound_on_trees(n, seed):
    g = random_tree(n, seed)
    result, trace = extract_half(g)
    check_trace(g, result, trace)
