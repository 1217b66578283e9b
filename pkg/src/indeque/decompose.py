"""Blocks, series-parallel trees and the K4-minor test.

Series-parallel recognition works by reduction on a multigraph copy of the
block: parallel edges are merged and non-terminal vertices of degree two are
suppressed, each step recording a tree node, until a single terminal edge is
left (success) or nothing applies (failure, remainder returned as witness).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, induced_subgraph

EDGE, SERIES, PARALLEL = "edge", "series", "parallel"


class NotSeriesParallel(ValueError):
    """Reduction got stuck; ``vertices``/``edges`` hold the irreducible remainder."""

    def __init__(self, vertices: Sequence[int], edges: Sequence[tuple[int, int]]):
        super().__init__(f"not series-parallel: remainder has {len(vertices)} "
                         f"vertices, {len(edges)} edges")
        self.vertices = list(vertices)
        self.edges = list(edges)


class SPNode:
    """Node of a two-terminal series-parallel decomposition.

    Series children are listed along the chain from ``s`` to ``t``; parallel
    children all have terminals ``{s, t}``.  Trees produced by
    :func:`recognize_sp` are binary; :func:`flatten` merges nested nodes of
    the same kind into the canonical k-ary form.  ``virtual`` edges carry no
    adjacency and only appear in the exact solver's whole-graph trees.
    """

    __slots__ = ("kind", "s", "t", "children", "virtual", "_vertices")

    def __init__(self, kind: str, s: int, t: int,
                 children: Sequence[SPNode] = (), virtual: bool = False):
        self.kind = kind
        self.s = s
        self.t = t
        self.children = tuple(children)
        self.virtual = virtual
        self._vertices: frozenset[int] | None = None

    @classmethod
    def edge(cls, s: int, t: int, virtual: bool = False) -> SPNode:
        return cls(EDGE, s, t, virtual=virtual)

    @classmethod
    def series(cls, *children: SPNode) -> SPNode:
        return cls(SERIES, children[0].s, children[-1].t, children)

    @classmethod
    def parallel(cls, *children: SPNode) -> SPNode:
        return cls(PARALLEL, children[0].s, children[0].t, children)

    @property
    def terminals(self) -> tuple[int, int]:
        return (self.s, self.t)

    @property
    def vertices(self) -> frozenset[int]:
        if self._vertices is None:
            if self.kind == EDGE:
                self._vertices = frozenset((self.s, self.t))
            else:
                acc: set[int] = set()
                for c in self.children:
                    acc |= c.vertices
                self._vertices = frozenset(acc)
        return self._vertices

    @property
    def internal(self) -> frozenset[int]:
        return self.vertices - {self.s, self.t}

    def is_edge(self) -> bool:
        return self.kind == EDGE

    def walk(self) -> Iterable[SPNode]:
        """Pre-order traversal (iterative; trees can be deep)."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def edges(self, include_virtual: bool = False) -> set[tuple[int, int]]:
        out = set()
        for node in self.walk():
            if node.kind == EDGE and (include_virtual or not node.virtual):
                out.add((min(node.s, node.t), max(node.s, node.t)))
        return out

    def to_json(self) -> dict:
        if self.kind == EDGE:
            d = {"kind": EDGE, "s": self.s, "t": self.t}
            if self.virtual:
                d["virtual"] = True
            return d
        return {"kind": self.kind, "s": self.s, "t": self.t,
                "children": [c.to_json() for c in self.children]}

    def __repr__(self) -> str:
        if self.kind == EDGE:
            return f"Edge({self.s},{self.t}{',v' if self.virtual else ''})"
        inner = ", ".join(repr(c) for c in self.children)
        return f"{self.kind.capitalize()}[{self.s},{self.t}]({inner})"


def realize(tree: SPNode) -> tuple[set[int], set[tuple[int, int]]]:
    """Vertex set and (real) edge set of the graph a tree describes."""
    return set(tree.vertices), tree.edges()


def check_tree(tree: SPNode) -> None:
    """Raise ``ValueError`` unless terminals compose as the node kinds demand."""
    for node in tree.walk():
        if node.kind == EDGE:
            if node.s == node.t:
                raise ValueError(f"loop edge at {node.s}")
            continue
        if len(node.children) < 2:
            raise ValueError(f"{node.kind} node with {len(node.children)} children")
        if node.kind == SERIES:
            cur = node.s
            for c in node.children:
                if c.s != cur:
                    raise ValueError(f"series chain broken at {cur}")
                cur = c.t
            if cur != node.t:
                raise ValueError("series chain does not end at sink")
            seen = set()
            for c in node.children:
                inner = c.vertices - {c.s, c.t}
                if inner & seen:
                    raise ValueError("series children overlap")
                seen |= c.vertices - {c.t}
        else:
            for c in node.children:
                if (c.s, c.t) != (node.s, node.t):
                    raise ValueError("parallel child with different terminals")
            seen = set()
            for c in node.children:
                inner = c.internal
                if inner & seen:
                    raise ValueError("parallel children overlap")
                seen |= inner


def orient(tree: SPNode, s: int, t: int) -> SPNode:
    """Copy of ``tree`` with terminals ``(s, t)`` and every series chain in order.

    Children may be stored with either terminal order during reduction; this
    restores the ``left.t == right.s`` convention throughout.
    """
    if {tree.s, tree.t} != {s, t}:
        raise ValueError(f"cannot orient {tree!r} to ({s},{t})")
    if tree.kind == EDGE:
        return SPNode.edge(s, t, tree.virtual)
    if tree.kind == PARALLEL:
        return SPNode(PARALLEL, s, t, [orient(c, s, t) for c in tree.children])
    kids = list(tree.children)
    if tree.s != s:
        kids.reverse()
    out, cur = [], s
    for c in kids:
        nxt = c.t if c.s == cur else c.s
        out.append(orient(c, cur, nxt))
        cur = nxt
    return SPNode(SERIES, s, t, out)


def flatten(tree: SPNode) -> SPNode:
    """Canonical form: no child has the same kind as its parent."""
    if tree.kind == EDGE:
        return tree
    kids: list[SPNode] = []
    for c in tree.children:
        fc = flatten(c)
        if fc.kind == tree.kind:
            kids.extend(fc.children)
        else:
            kids.append(fc)
    return SPNode(tree.kind, tree.s, tree.t, kids)


def binarize(tree: SPNode) -> SPNode:
    """Left-nested binary form of a k-ary tree."""
    if tree.kind == EDGE:
        return tree
    kids = [binarize(c) for c in tree.children]
    acc = kids[0]
    for c in kids[1:]:
        if tree.kind == SERIES:
            acc = SPNode(SERIES, acc.s, c.t, (acc, c))
        else:
            acc = SPNode(PARALLEL, tree.s, tree.t, (acc, c))
    return acc


# -- recognition ----------------------------------------------------------------

def recognize_sp(block: Graph, s: int, t: int) -> SPNode:
    """Binary SP tree of ``block`` with terminals ``(s, t)``.

    Raises :class:`NotSeriesParallel` with the stuck remainder otherwise.
    """
    if s == t:
        raise ValueError("terminals must differ")
    if block.n == 0 or not (0 <= s < block.n and 0 <= t < block.n):
        raise ValueError("terminals outside the block")
    if len(block.components()) != 1:
        raise ValueError("block is not connected")
    return binarize(_reduce(block.n, block.edges(), s, t))


def _reduce(n: int, edge_list: Iterable[tuple[int, int]], s: int, t: int) -> SPNode:
    ends: dict[int, tuple[int, int]] = {}
    tree: dict[int, SPNode] = {}
    inc: dict[int, set[int]] = defaultdict(set)
    vertices: set[int] = set()
    for eid, (u, v) in enumerate(edge_list):
        ends[eid] = (u, v)
        tree[eid] = SPNode.edge(u, v)
        inc[u].add(eid)
        inc[v].add(eid)
        vertices.update((u, v))
    next_id = len(ends)
    queue = sorted(vertices)
    queued = set(queue)

    def other(eid: int, x: int) -> int:
        a, b = ends[eid]
        return b if a == x else a

    def add(u: int, v: int, node: SPNode) -> None:
        nonlocal next_id
        ends[next_id] = (u, v)
        tree[next_id] = node
        inc[u].add(next_id)
        inc[v].add(next_id)
        next_id += 1

    def drop(eid: int) -> None:
        u, v = ends.pop(eid)
        inc[u].discard(eid)
        inc[v].discard(eid)
        del tree[eid]

    def push(x: int) -> None:
        if x not in queued:
            queued.add(x)
            queue.append(x)

    while queue:
        x = queue.pop()
        queued.discard(x)
        if x not in vertices:
            continue
        by_other: dict[int, list[int]] = defaultdict(list)
        for eid in sorted(inc[x]):
            by_other[other(eid, x)].append(eid)
        for y, group in sorted(by_other.items()):
            if len(group) > 1:
                kids = [tree[e] for e in group]
                for e in group:
                    drop(e)
                a, b = min(x, y), max(x, y)
                add(a, b, SPNode(PARALLEL, a, b, kids))
                push(y)
        if x in (s, t):
            continue
        here = sorted(inc[x])
        if len(here) == 2:
            e1, e2 = here
            a, b = other(e1, x), other(e2, x)
            if a > b:
                a, b, e1, e2 = b, a, e2, e1
            node = SPNode(SERIES, a, b, (tree[e1], tree[e2]))
            drop(e1)
            drop(e2)
            vertices.discard(x)
            add(a, b, node)
            push(a)
            push(b)
    if len(ends) == 1 and vertices == {s, t}:
        (only,) = tree.values()
        return orient(only, s, t)
    raise NotSeriesParallel(sorted(vertices), sorted(set(
        (min(u, v), max(u, v)) for u, v in ends.values())))


def canonical_sp(block: Graph, s: int, t: int) -> SPNode:
    """Flattened (k-ary) SP tree with terminals ``(s, t)``."""
    return flatten(recognize_sp(block, s, t))


# -- blocks -----------------------------------------------------------------------

@dataclass
class BlockDecomposition:
    blocks: list[list[int]]
    cut_vertices: list[int]
    block_tree: dict[int, list[int]] = field(default_factory=dict)  # block -> cut vertices
    leaf_blocks: list[int] = field(default_factory=list)

    def blocks_of(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_decompose(g: Graph) -> BlockDecomposition:
    """Biconnected components (bridges and isolated vertices included)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    raw: list[set[int]] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        if not g.adj[root]:
            disc[root] = timer
            timer += 1
            raw.append({root})
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(g.adj[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] == -1:
                    edge_stack.append((u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(g.adj[w])))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.update((a, b))
                    if (a, b) == (parent, u):
                        break
                raw.append(comp)
    blocks = sorted((sorted(b) for b in raw), key=lambda b: (b[0], b))
    count: dict[int, int] = defaultdict(int)
    for b in blocks:
        for v in b:
            count[v] += 1
    cuts = sorted(v for v, c in count.items() if c >= 2)
    cutset = set(cuts)
    tree = {i: [v for v in b if v in cutset] for i, b in enumerate(blocks)}
    leaves = [i for i, b in enumerate(blocks) if len(tree[i]) <= 1]
    return BlockDecomposition(blocks, cuts, tree, leaves)


@dataclass
class BlockReport:
    vertices: list[int]
    series_parallel: bool
    tree: SPNode | None  # in original vertex ids; None for trivial or failed blocks


def is_k4_minor_free(g: Graph) -> tuple[bool, list[BlockReport]]:
    """K4-minor-free test: every block on three or more vertices is series-parallel."""
    bd = block_decompose(g)
    reports = []
    ok = True
    for b in bd.blocks:
        if len(b) < 3:
            tree = SPNode.edge(b[0], b[1]) if len(b) == 2 else None
            reports.append(BlockReport(b, True, tree))
            continue
        sub, back = induced_subgraph(g, b)
        s, t = sub.edges()[0]
        try:
            local = recognize_sp(sub, s, t)
        except NotSeriesParallel:
            ok = False
            reports.append(BlockReport(b, False, None))
            continue
        reports.append(BlockReport(b, True, relabel(local, back)))
    return ok, reports


def relabel(tree: SPNode, mapping: Sequence[int] | dict[int, int]) -> SPNode:
    if tree.kind == EDGE:
        return SPNode.edge(mapping[tree.s], mapping[tree.t], tree.virtual)
    return SPNode(tree.kind, mapping[tree.s], mapping[tree.t],
                  [relabel(c, mapping) for c in tree.children])


def tree_graph(tree: SPNode) -> tuple[Graph, list[int]]:
    """The realized graph of ``tree`` on dense ids, with new -> old map."""
    verts = sorted(tree.vertices)
    index = {v: i for i, v in enumerate(verts)}
    edges = [(index[u], index[v]) for u, v in sorted(tree.edges())]
    return Graph.from_edges(len(verts), edges), verts


def reroot_sp(tree: SPNode, path: Sequence[int]) -> SPNode:
    """Binary tree of the same block rooted at a 0-series-piece.

    The root is a parallel node whose first child is exactly ``path``.
    """
    block, back = tree_graph(tree)
    index = {v: i for i, v in enumerate(back)}
    if len(path) < 2 or any(v not in index for v in path):
        raise ValueError("piece not found in block")
    for a, b in zip(path, path[1:]):
        if not block.has_edge(index[a], index[b]):
            raise ValueError("piece not found in block")
    s, t = path[0], path[-1]
    canon = relabel(canonical_sp(block, index[s], index[t]), back)
    want = {(min(a, b), max(a, b)) for a, b in zip(path, path[1:])}
    kids = list(canon.children) if canon.kind == PARALLEL else [canon]
    for i, c in enumerate(kids):
        if c.edges() == want:
            rest = kids[:i] + kids[i + 1:]
            if not rest:
                raise ValueError("block is the piece itself; nothing to root at")
            others = rest[0] if len(rest) == 1 else SPNode(PARALLEL, s, t, rest)
            return binarize(SPNode(PARALLEL, s, t, [c, others]))
    raise ValueError("piece not found in block")
