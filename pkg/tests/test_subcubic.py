import itertools
import math

import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, path
from indeque.exact import brute_force_max
from indeque.gen import blown_cycle, q3, random_subcubic
from indeque.graph import Graph, verify_indeque
from indeque.subcubic import (NotSubcubic, is_local_optimum, max_cut_local_search,
                              subcubic_half)


def local_optima(g):
    """All bipartitions (X containing vertex 0) where nobody has two same-side neighbours."""
    out = []
    for bits in itertools.product((0, 1), repeat=g.n - 1):
        side = (0,) + bits
        if all(sum(side[u] == side[v] for u in g.adj[v]) <= 1 for v in range(g.n)):
            cut = sum(side[u] != side[w] for u, w in g.edges())
            out.append((side, cut))
    return out


def test_c4_local_optima_cut_at_least_two():
    optima = local_optima(cycle(4))
    assert optima and all(cut >= 2 for _, cut in optima)
    for seed in range(20):
        part = max_cut_local_search(cycle(4), seed)
        assert part.cut_size >= 2 and is_local_optimum(cycle(4), part)


def test_k4_local_optimum_is_two_edges():
    assert {cut for _, cut in local_optima(complete(4))} == {4}
    for seed in range(20):
        part = max_cut_local_search(complete(4), seed)
        assert (len(part.x), len(part.y), part.cut_size) == (2, 2, 4)


def test_single_vertex():
    part = max_cut_local_search(Graph.empty(1), 3)
    assert part.x == (0,) and part.y == () and part.moves == 0


def test_k5_is_rejected_with_vertex():
    with pytest.raises(NotSubcubic) as info:
        subcubic_half(complete(5), 0)
    assert info.value.vertex == 0 and "not_subcubic" in str(info.value)


def test_q3_is_optimal():
    for seed in range(10):
        assert len(subcubic_half(q3(), seed)) >= 4
    assert brute_force_max(q3())[0] == 4


@pytest.mark.parametrize("k", [2, 3, 4, 10, 25])
def test_blown_cycle_half(k):
    assert len(subcubic_half(blown_cycle(k), k)) >= 2 * k


def test_edge_gives_one():
    assert len(subcubic_half(path(2), 0)) == 1


def test_ties_return_x():
    part = max_cut_local_search(path(2), 0)
    assert subcubic_half(path(2), 0) == list(part.x)
    assert 0 in part.x


@given(st.integers(0, 80), st.integers(0, 10**9), st.integers(0, 10**6))
def test_guarantees_hold_for_any_seed(n, gseed, seed):
    g = random_subcubic(n, gseed)
    part = max_cut_local_search(g, seed)
    assert sorted(part.x + part.y) == list(range(n))
    assert part.cut_size == sum(1 for u, w in g.edges() if (u in part.x) != (w in part.x))
    assert part.moves <= g.m and is_local_optimum(g, part)
    chosen = subcubic_half(g, seed)
    cert = verify_indeque(g, chosen)
    assert cert and all(len(c) <= 2 for c in cert.components)
    assert len(chosen) >= math.ceil(n / 2)


def test_hundred_seeds_per_instance():
    g = random_subcubic(60, 5)
    for seed in range(100):
        part = max_cut_local_search(g, seed)
        assert is_local_optimum(g, part) and part.moves <= g.m
        assert len(subcubic_half(g, seed)) >= 30
