import itertools

from hypothesis import HealthCheck, settings, strategies as st

from indeque.graph import Graph

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def edges_of(*pairs):
    return [tuple(p) for p in pairs]


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def graphs_with_subset(draw, max_n=10):
    g = draw(graphs(max_n))
    s = draw(st.sets(st.integers(0, g.n - 1))) if g.n else set()
    return g, sorted(s)
