"""Seeded generators for test families and tight examples.

All randomness comes from :class:`random.Random` (Mersenne Twister MT19937)
seeded with the integer in the family spec, so a spec always yields the
same graph byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .decompose import EDGE, PARALLEL, SERIES, SPNode, check_tree, realize
from .graph import Graph
from .pieces import GAMMA_TEMPLATES, template_edges

FAMILIES = ("c4_union", "triangle_string", "triangle_ring", "gamma_ring", "kite",
            "blown_cycle", "q3", "gamma", "random_sp", "random_k4mf",
            "random_subcubic", "random_tree")


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0


@dataclass
class Generated:
    graph: Graph
    known_indeque: int | None = None
    source: str | None = None  # "paper" or "derived" when known_indeque is set
    claimed_bound: int | None = None
    tree: SPNode | None = None
    labels: dict[str, int] = field(default_factory=dict)

    def annotation(self, spec: FamilySpec) -> dict:
        return {"family": spec.family, "params": spec.params, "seed": spec.seed,
                "known_indeque": self.known_indeque, "source": self.source,
                "claimed_bound": self.claimed_bound}


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: set[tuple[int, int]] = set()

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, a: int, b: int) -> None:
        self.edges.add((min(a, b), max(a, b)))

    def triangle(self, a: int, b: int) -> int:
        apex = self.vertex()
        self.edge(a, apex)
        self.edge(apex, b)
        self.edge(a, b)
        return apex

    def string(self, s: int, length: int) -> int:
        """Append ``length`` triangles in series from ``s``; return the far terminal."""
        cur = s
        for _ in range(length):
            nxt = self.vertex()
            self.triangle(cur, nxt)
            cur = nxt
        return cur

    def string_between(self, s: int, t: int, length: int) -> None:
        cur = s
        for i in range(length):
            nxt = t if i == length - 1 else self.vertex()
            self.triangle(cur, nxt)
            cur = nxt

    def graph(self, name: str | None = None) -> Graph:
        return Graph.from_edges(self.n, sorted(self.edges), name)


def _need(params: dict, key: str, low: int, default: int | None = None) -> int:
    if key not in params and default is None:
        raise InvalidSpec(f"missing parameter {key!r}")
    val = params.get(key, default)
    if not isinstance(val, int) or isinstance(val, bool) or val < low:
        raise InvalidSpec(f"parameter {key!r} must be an integer >= {low}, got {val!r}")
    return val


def c4_union(k: int) -> Graph:
    b = _Builder()
    for _ in range(k):
        vs = [b.vertex() for _ in range(4)]
        for i in range(4):
            b.edge(vs[i], vs[(i + 1) % 4])
    return b.graph(f"c4_union({k})")


def triangle_string(length: int, closed: bool = False) -> tuple[Graph, int, int]:
    b = _Builder()
    s = b.vertex()
    t = b.string(s, length)
    if closed and length > 1:
        b.edge(s, t)
    return b.graph(f"triangle_string({length})"), s, t


def triangle_ring(l1: int, l2: int) -> tuple[Graph, int, int]:
    b = _Builder()
    s, t = b.vertex(), b.vertex()
    b.string_between(s, t, l1)
    b.string_between(s, t, l2)
    return b.graph(f"triangle_ring({l1},{l2})"), s, t


def gamma_fixture(tag: int, chord: bool = False) -> tuple[Graph, dict[str, int]]:
    """The shape on its own, vertex ids in template role order."""
    roles = GAMMA_TEMPLATES[tag]["roles"]
    ids = {r: i for i, r in enumerate(roles)}
    edges = [(ids[a], ids[b]) for a, b in template_edges(tag, chord)]
    return Graph.from_edges(len(roles), edges, f"gamma{tag}"), ids


def gamma_ring(tag: int, length: int, chord: bool = False,
               pendant: bool = True) -> tuple[Graph, dict[str, int]]:
    """A Gamma shape in parallel with a string of ``length`` triangles.

    With ``pendant`` a diamond (K4 minus an edge) hangs off the shape's ``v``
    at one of its degree-3 corners, so ``v`` is a cut vertex, the ring is a
    leaf block, and the pendant offers no degree-1 or adjacent degree-2 vertices.
    """
    b = _Builder()
    roles = GAMMA_TEMPLATES[tag]["roles"]
    ids = {r: b.vertex() for r in roles}
    for x, y in template_edges(tag, chord):
        b.edge(ids[x], ids[y])
    b.string_between(ids["s"], ids["t"], length)
    if pendant:
        v = ids[GAMMA_TEMPLATES[tag]["v"]]
        far, c, d = b.vertex(), b.vertex(), b.vertex()
        for x, y in ((v, far), (v, c), (v, d), (far, c), (far, d)):
            b.edge(x, y)
    return b.graph(f"gamma_ring({tag},{length})"), ids


def kite(path_len: int, length: int) -> tuple[Graph, int]:
    """A path of ``path_len`` vertices glued at its end to a string; returns the joint."""
    b = _Builder()
    far = b.vertex()
    cur = far
    for _ in range(path_len - 1):
        nxt = b.vertex()
        b.edge(cur, nxt)
        cur = nxt
    b.string(cur, length)
    return b.graph(f"kite({path_len},{length})"), cur


def blown_cycle(k: int) -> Graph:
    """k induced 4-cycles a_i b_i c_i d_i with edges c_i - a_{i+1} around a cycle."""
    b = _Builder()
    squares = []
    for _ in range(k):
        a, bb, c, d = (b.vertex() for _ in range(4))
        for x, y in ((a, bb), (bb, c), (c, d), (d, a)):
            b.edge(x, y)
        squares.append((a, c))
    for i in range(k):
        b.edge(squares[i][1], squares[(i + 1) % k][0])
    return b.graph(f"blown_cycle({k})")


def q3() -> Graph:
    edges = [(u, u ^ (1 << i)) for u in range(8) for i in range(3) if u < u ^ (1 << i)]
    return Graph.from_edges(8, edges, "Q3")


def random_sp_tree(edges: int, p: float, rng: random.Random) -> SPNode:
    """Random SP tree with ``edges`` leaves, realized on fresh vertex ids.

    A parallel composition that would repeat an existing edge is retried as a
    series composition through a new vertex.
    """
    counter = [2]
    present: set[tuple[int, int]] = set()

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(count: int, s: int, t: int) -> SPNode:
        if count == 1:
            key = (min(s, t), max(s, t))
            if key not in present:
                present.add(key)
                return SPNode.edge(s, t)
            count = 2
            kind = SERIES
        else:
            kind = SERIES if rng.random() < p else PARALLEL
        left = rng.randint(1, count - 1)
        if kind == SERIES:
            m = fresh()
            return SPNode(SERIES, s, t, (build(left, s, m), build(count - left, m, t)))
        return SPNode(PARALLEL, s, t, (build(left, s, t), build(count - left, s, t)))

    tree = build(edges, 0, 1)
    check_tree(tree)
    return tree


def random_sp(edges: int, seed: int, p: float = 0.5) -> tuple[Graph, SPNode]:
    rng = random.Random(seed)
    tree = random_sp_tree(edges, p, rng)
    verts, es = realize(tree)
    g = Graph.from_edges(len(verts), sorted(es), f"random_sp({edges},{seed})")
    return g, tree


def random_k4mf(n: int, seed: int, keep: float | None = None) -> Graph:
    """Random partial 2-tree: grow a 2-tree, then drop edges independently.

    Partial 2-trees are exactly the K4-minor-free graphs.
    """
    rng = random.Random(seed)
    if keep is None:
        keep = rng.choice((1.0, 0.95, 0.9, 0.8, 0.7, 0.5))
    edges: list[tuple[int, int]] = []
    if n >= 2:
        edges.append((0, 1))
    for v in range(2, n):
        a, b = edges[rng.randrange(len(edges))]
        edges += [(a, v), (b, v)]
    kept = sorted({(min(a, b), max(a, b)) for a, b in edges if rng.random() < keep})
    perm = list(range(n))
    rng.shuffle(perm)
    kept = sorted({tuple(sorted((perm[a], perm[b]))) for a, b in kept})
    return Graph.from_edges(n, kept, f"random_k4mf({n},{seed})")


def random_subcubic(n: int, seed: int, density: float | None = None) -> Graph:
    """Random graph of maximum degree 3 with about ``1.5 * density * n`` edges.

    Pairs are drawn uniformly and kept when both ends still have room; the
    draw budget is linear in ``n`` so large instances stay cheap.
    """
    rng = random.Random(seed)
    if density is None:
        density = rng.random()
    target = int(density * 1.5 * n)
    deg = [0] * n
    edges: set[tuple[int, int]] = set()
    budget = 20 * n
    while len(edges) < target and budget > 0:
        budget -= 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= 3 or deg[v] >= 3:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph.from_edges(n, sorted(edges), f"random_subcubic({n},{seed})")


def random_tree(n: int, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return Graph.from_edges(n, edges, f"random_tree({n},{seed})")


def generate(spec: FamilySpec) -> Generated:
    """Build a family member; ``known_indeque`` is filled where it is known."""
    f, p, seed = spec.family, dict(spec.params), spec.seed
    if f == "c4_union":
        k = _need(p, "k", 1)
        return Generated(c4_union(k), 2 * k, "paper")
    if f == "triangle_string":
        length = _need(p, "length", 1)
        g, s, t = triangle_string(length, bool(p.get("closed", False)))
        return Generated(g, claimed_bound=(g.n + 1) // 2, labels={"s": s, "t": t})
    if f == "triangle_ring":
        l1, l2 = _need(p, "l1", 1), _need(p, "l2", 1)
        g, s, t = triangle_ring(l1, l2)
        return Generated(g, claimed_bound=g.n // 2, labels={"s": s, "t": t})
    if f == "gamma_ring":
        tag = _need(p, "i", 1)
        if tag > 6:
            raise InvalidSpec("i must be in 1..6")
        chord = bool(p.get("chord", False))
        if chord and not GAMMA_TEMPLATES[tag]["chord"]:
            raise InvalidSpec(f"Gamma{tag} has no optional chord")
        g, ids = gamma_ring(tag, _need(p, "length", 1), chord, bool(p.get("pendant", True)))
        return Generated(g, claimed_bound=(g.n + 1) // 2, labels=ids)
    if f == "gamma":
        tag = _need(p, "i", 1)
        if tag > 6:
            raise InvalidSpec("i must be in 1..6")
        chord = bool(p.get("chord", False))
        if chord and not GAMMA_TEMPLATES[tag]["chord"]:
            raise InvalidSpec(f"Gamma{tag} has no optional chord")
        g, ids = gamma_fixture(tag, chord)
        return Generated(g, labels=ids)
    if f == "kite":
        g, joint = kite(_need(p, "path", 2, 2), _need(p, "length", 1))
        return Generated(g, claimed_bound=(g.n + 1) // 2, labels={"joint": joint})
    if f == "blown_cycle":
        k = _need(p, "k", 2)
        return Generated(blown_cycle(k), 2 * k, "paper")
    if f == "q3":
        return Generated(q3(), 4, "paper")
    if f == "random_sp":
        g, tree = random_sp(_need(p, "edges", 1), seed, float(p.get("p", 0.5)))
        return Generated(g, claimed_bound=(g.n + 1) // 2, tree=tree)
    if f == "random_k4mf":
        keep = p.get("keep")
        g = random_k4mf(_need(p, "n", 0), seed, None if keep is None else float(keep))
        return Generated(g, claimed_bound=(g.n + 1) // 2)
    if f == "random_subcubic":
        g = random_subcubic(_need(p, "n", 0), seed)
        return Generated(g, claimed_bound=(g.n + 1) // 2)
    if f == "random_tree":
        g = random_tree(_need(p, "n", 1), seed)
        return Generated(g, claimed_bound=(g.n + 1) // 2)
    raise InvalidSpec(f"unknown family {f!r}")


def realize_sp_tree(tree: SPNode) -> Graph:
    """Graph of a well-formed SP tree; ids are compacted in increasing order."""
    check_tree(tree)
    verts, edges = realize(tree)
    order = sorted(verts)
    index = {v: i for i, v in enumerate(order)}
    if tree.kind == EDGE and tree.virtual:
        raise ValueError("tree has no real edges")
    return Graph.from_edges(len(order), [(index[a], index[b]) for a, b in sorted(edges)])
