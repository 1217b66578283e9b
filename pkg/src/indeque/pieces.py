"""Structural patterns inside a leaf block.

The matchers work on canonical (flattened) SP trees of a block: parallel
node children are the maximal parallel branches, series node children the
maximal series parts.  "Degree two" always means degree in the host graph,
so the cut vertex of a leaf block never counts as a degree-2 vertex.

A *pseudo-string* is a triangle-string or a bare path ``a - c - b`` whose
middle vertex has degree two; both have ``2d + 1`` vertices and ``d``
degree-2 internal vertices, which is the only property the ring rule uses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .decompose import (EDGE, PARALLEL, SERIES, NotSeriesParallel, SPNode,
                        canonical_sp, relabel)
from .graph import Graph, induced_subgraph

# -- Gamma templates -------------------------------------------------------------
#
# Role labels: "s", "t" terminals, "v" the cut vertex, other letters are
# degree-2 vertices.  ``chord`` marks templates where edge st is optional.

GAMMA_TEMPLATES: dict[int, dict] = {
    1: {"roles": ("s", "t", "w"), "v": "s",
        "edges": [("s", "t"), ("s", "w"), ("w", "t")], "chord": False},
    2: {"roles": ("s", "t", "v"), "v": "v",
        "edges": [("s", "t"), ("s", "v"), ("v", "t")], "chord": False},
    3: {"roles": ("s", "t", "w", "v"), "v": "v",
        "edges": [("s", "w"), ("w", "t"), ("t", "v"), ("v", "s")], "chord": True},
    4: {"roles": ("s", "t", "u", "v"), "v": "v",
        "edges": [("s", "t"), ("t", "u"), ("u", "v"), ("v", "s")], "chord": False},
    5: {"roles": ("s", "t", "w", "u", "v"), "v": "v",
        "edges": [("s", "w"), ("w", "t"), ("t", "u"), ("u", "v"), ("v", "s")],
        "chord": True},
    6: {"roles": ("s", "t", "w", "v", "u"), "v": "v",
        "edges": [("s", "t"), ("s", "w"), ("w", "v"), ("v", "u"), ("u", "t")],
        "chord": False},
}


@dataclass(frozen=True)
class GammaShape:
    tag: int
    s: int
    t: int
    v: int
    chord: bool
    roles: tuple[tuple[str, int], ...]  # role label -> vertex

    def role(self, name: str) -> int:
        return dict(self.roles)[name]


def template_edges(tag: int, chord: bool) -> list[tuple[str, str]]:
    tpl = GAMMA_TEMPLATES[tag]
    edges = list(tpl["edges"])
    if chord:
        if not tpl["chord"]:
            raise ValueError(f"Gamma{tag} has no optional chord")
        edges.append(("s", "t"))
    return edges


def match_gamma(tag: int, vertices: Sequence[int], edges: Sequence[tuple[int, int]],
                s: int, t: int, v: int) -> GammaShape | None:
    """Match one template with ``s``, ``t`` and ``v`` pinned (either terminal order)."""
    tpl = GAMMA_TEMPLATES[tag]
    verts = set(vertices)
    if len(verts) != len(tpl["roles"]) or v not in verts:
        return None
    want = {frozenset(e) for e in edges}
    if len(want) != len(edges):
        return None
    for a, b in ((s, t), (t, s)):
        fixed = {"s": a, "t": b}
        if tpl["v"] in fixed:
            if fixed[tpl["v"]] != v:
                continue
        else:
            if v in (a, b):
                continue
            fixed["v"] = v
        free_roles = [r for r in tpl["roles"] if r not in fixed]
        free_verts = sorted(verts - set(fixed.values()))
        if len(free_roles) != len(free_verts):
            continue
        for perm in itertools.permutations(free_verts):
            assign = dict(fixed, **dict(zip(free_roles, perm)))
            for chord in ((False, True) if tpl["chord"] else (False,)):
                got = {frozenset((assign[x], assign[y]))
                       for x, y in template_edges(tag, chord)}
                if got == want:
                    return GammaShape(tag, a, b, v, chord,
                                      tuple(sorted(assign.items())))
    return None


def classify_gamma_raw(vertices: Sequence[int], edges: Sequence[tuple[int, int]],
                       s: int, t: int, v: int) -> GammaShape | None:
    for tag in GAMMA_TEMPLATES:
        got = match_gamma(tag, vertices, edges, s, t, v)
        if got is not None:
            return got
    return None


# -- 0-series and 0-parallel pieces ------------------------------------------------

@dataclass(frozen=True)
class ZeroSeriesPiece:
    path: tuple[int, ...]

    @property
    def terminals(self) -> tuple[int, int]:
        return (self.path[0], self.path[-1])

    @property
    def internal(self) -> tuple[int, ...]:
        return self.path[1:-1]

    def edges(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b in zip(self.path, self.path[1:])}


@dataclass(frozen=True)
class ZeroParallelPiece:
    s: int
    t: int
    constituents: tuple[ZeroSeriesPiece, ...]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.constituents for v in p.path)

    def edges(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for p in self.constituents:
            out |= p.edges()
        return out


def _chains(adj: dict[int, list[int]], interior: set[int],
            anchor: int) -> list[tuple[int, ...]]:
    """Maximal paths whose inner vertices lie in ``interior``.

    With fewer than two anchors (the block is a cycle, possibly with one
    high-degree vertex) ``anchor`` and its neighbours become anchors.
    """
    ends = set(adj) - interior
    if len(ends) < 2:
        ends = {anchor, *adj[anchor]}
    out, seen = [], set()
    for a in sorted(ends):
        for w in adj[a]:
            path, prev = [a, w], a
            while path[-1] not in ends:
                cur = path[-1]
                nxt = [x for x in adj[cur] if x != prev]
                prev = cur
                path.append(nxt[0])
            key = frozenset(frozenset(e) for e in zip(path, path[1:]))
            if key in seen:
                continue
            seen.add(key)
            out.append(tuple(path) if path[0] <= path[-1] else tuple(reversed(path)))
    return sorted(out)


def find_zero_series_pieces(g: Graph, block: Sequence[int],
                            cut_vertex: int | None = None) -> list[ZeroSeriesPiece]:
    """Maximal paths of ``block`` whose internal vertices have degree two in ``g``."""
    members = set(block)
    if len(members) < 3:
        raise ValueError("block is not 2-connected")
    sub, back = induced_subgraph(g, sorted(members))
    if len(sub.components()) != 1 or any(sub.degree(i) < 2 for i in range(sub.n)):
        raise ValueError("block is not 2-connected")
    adj = {v: [w for w in g.adj[v] if w in members] for v in sorted(members)}
    interior = {v for v in members if g.degree(v) == 2 and v != cut_vertex}
    anchor = cut_vertex if cut_vertex in members else min(members)
    return [ZeroSeriesPiece(p) for p in _chains(adj, interior, anchor)]


def find_zero_parallel_pieces(g: Graph, block: Sequence[int],
                              cut_vertex: int | None = None) -> list[ZeroParallelPiece]:
    groups: dict[tuple[int, int], list[ZeroSeriesPiece]] = {}
    for p in find_zero_series_pieces(g, block, cut_vertex):
        groups.setdefault(p.terminals, []).append(p)
    return [ZeroParallelPiece(s, t, tuple(ps))
            for (s, t), ps in sorted(groups.items()) if len(ps) >= 2]


def classify_gamma(q: ZeroParallelPiece, v: int) -> GammaShape | None:
    """Which of the six shapes ``q`` is around ``v``, or None."""
    if v not in q.vertices:
        raise ValueError(f"{v} is not in the piece")
    return classify_gamma_raw(sorted(q.vertices), sorted(q.edges()), q.s, q.t, v)


# -- triangle-strings -------------------------------------------------------------

@dataclass(frozen=True)
class TriangleString:
    """Witness that a 2-terminal subgraph is a (possibly Gamma-) triangle-string.

    ``triangles`` are ``(a, apex, b)`` triples in chain order; ``chords`` the
    absorbed parallel K2 edges; ``gamma`` the substituted shape, if any.
    """

    s: int
    t: int
    triangles: tuple[tuple[int, int, int], ...]
    chords: tuple[tuple[int, int], ...] = ()
    gamma: GammaShape | None = None
    vertices: frozenset[int] = field(default=frozenset(), compare=False)

    @property
    def apexes(self) -> list[int]:
        return [tri[1] for tri in self.triangles]


def is_three_path(node: SPNode, g: Graph, v: int | None = None) -> bool:
    if node.kind != SERIES or len(node.children) != 2:
        return False
    if not all(c.kind == EDGE for c in node.children):
        return False
    mid = node.children[0].t
    return mid != v and g.degree(mid) == 2


def is_path_node(node: SPNode) -> bool:
    return node.kind == SERIES and all(c.kind == EDGE for c in node.children)


def string_of(node: SPNode, g: Graph, v: int | None = None,
              allow_gamma: bool = False) -> TriangleString | None:
    """Parse a canonical SP node as a triangle-string.

    Strings are closed under series composition of strings and parallel
    composition with a terminal edge; the base case is a triangle whose apex
    has degree two in ``g``.  With ``allow_gamma`` at most one base piece may
    instead be a Gamma shape around ``v``.
    """
    if node.kind == EDGE:
        return None
    if node.kind == PARALLEL:
        edges = [c for c in node.children if c.kind == EDGE and not c.virtual]
        others = [c for c in node.children if c.kind != EDGE]
        if len(edges) == 1 and len(others) == 1 and len(node.children) == 2:
            o = others[0]
            if is_three_path(o, g, v):
                return TriangleString(node.s, node.t,
                                      ((node.s, o.children[0].t, node.t),),
                                      vertices=node.vertices)
            if o.kind == SERIES:
                inner = string_of(o, g, v, allow_gamma)
                if inner is not None:
                    return TriangleString(node.s, node.t, inner.triangles,
                                          inner.chords + ((node.s, node.t),),
                                          inner.gamma, node.vertices)
        if allow_gamma and v is not None and v in node.vertices and \
                all(c.kind == EDGE or is_path_node(c) for c in node.children):
            shape = classify_gamma_raw(sorted(node.vertices), sorted(node.edges()),
                                       node.s, node.t, v)
            if shape is not None:
                return TriangleString(node.s, node.t, (), (), shape, node.vertices)
        return None
    parts = []
    for c in node.children:
        p = string_of(c, g, v, allow_gamma)
        if p is None:
            return None
        parts.append(p)
    gammas = [p.gamma for p in parts if p.gamma is not None]
    if len(gammas) > 1:
        return None
    return TriangleString(node.s, node.t,
                          tuple(tri for p in parts for tri in p.triangles),
                          tuple(ch for p in parts for ch in p.chords),
                          gammas[0] if gammas else None, node.vertices)


def pseudo_string(node: SPNode, g: Graph, v: int | None = None) -> TriangleString | None:
    """A string, or a bare degree-2-middle path read as an open triangle."""
    if is_three_path(node, g, v):
        return TriangleString(node.s, node.t, ((node.s, node.children[0].t, node.t),),
                              vertices=node.vertices)
    return string_of(node, g, v)


def match_triangle_string(g: Graph, sub: Sequence[int], s: int, t: int,
                          v: int | None = None) -> TriangleString | None:
    """A triangle-string witness whose realization is exactly ``g[sub]``."""
    members = sorted(set(sub))
    if s not in members or t not in members or s == t:
        return None
    h, back = induced_subgraph(g, members)
    index = {x: i for i, x in enumerate(back)}
    if len(h.components()) != 1:
        return None
    try:
        tree = relabel(canonical_sp(h, index[s], index[t]), back)
    except NotSeriesParallel:
        return None
    got = string_of(tree, g, v, allow_gamma=v is not None)
    if got is None:
        return None
    induced = {(back[a], back[b]) for a, b in h.edges()}
    if tree.edges() != induced:
        return None
    return got


# -- block views ------------------------------------------------------------------

class BlockView:
    """A 2-connected block of ``g`` with its optional cut vertex ``v``.

    Canonical SP trees are built lazily per terminal pair and cached.
    """

    def __init__(self, g: Graph, block: Sequence[int], v: int | None = None):
        self.g = g
        self.block = sorted(block)
        self.members = frozenset(self.block)
        self.v = v
        self.sub, self.back = induced_subgraph(g, self.block)
        self.index = {x: i for i, x in enumerate(self.back)}
        self.adj = {x: [w for w in g.adj[x] if w in self.members] for x in self.block}
        self._trees: dict[tuple[int, int], SPNode | None] = {}
        self._chains: list[tuple[int, ...]] | None = None

    def tree(self, s: int, t: int) -> SPNode | None:
        key = (s, t)
        if key not in self._trees:
            try:
                local = canonical_sp(self.sub, self.index[s], self.index[t])
                self._trees[key] = relabel(local, self.back)
            except NotSeriesParallel:
                self._trees[key] = None
        return self._trees[key]

    def chains(self) -> list[tuple[int, ...]]:
        """0-series pieces by degree inside the block (``v`` may be internal)."""
        if self._chains is None:
            interior = {x for x in self.block if len(self.adj[x]) == 2}
            anchor = self.v if self.v is not None else self.block[0]
            self._chains = _chains(self.adj, interior, anchor)
        return self._chains

    def rootings(self) -> Iterator[SPNode]:
        """Canonical trees rooted at each 0-series piece, v's pieces first."""
        chains = self.chains()
        if self.v is not None:
            chains = sorted(chains, key=lambda p: self.v not in p)
        seen = set()
        for p in chains:
            key = (p[0], p[-1])
            if p[0] == p[-1] or key in seen:
                continue
            seen.add(key)
            tree = self.tree(*key)
            if tree is not None:
                yield tree

    def deg2(self, nodes: frozenset[int] | set[int]) -> set[int]:
        return {x for x in nodes if self.g.degree(x) == 2}


@dataclass(frozen=True)
class Ring:
    tag: str  # "plain" or "G1"
    s: int
    t: int
    strings: tuple[TriangleString, TriangleString]
    vertices: frozenset[int]


@dataclass(frozen=True)
class Kite:
    path: tuple[int, ...]  # ends at the joint
    string: TriangleString
    joint: int

    @property
    def trimmed(self) -> frozenset[int]:
        """Vertices of the kite without the far path end: the near path vertex plus the string."""
        return self.string.vertices | {self.path[-2]}


@dataclass(frozen=True)
class GammaRing:
    shape: GammaShape
    piece: frozenset[int]
    string: TriangleString
    vertices: frozenset[int]


def iter_rings(view: BlockView) -> Iterator[Ring]:
    """Two pseudo-strings in parallel, neither using ``v`` as a degree-2 vertex."""
    seen = set()
    for tree in view.rootings():
        for node in tree.walk():
            if node.kind != PARALLEL:
                continue
            parts = [p for p in (pseudo_string(c, view.g, view.v) for c in node.children)
                     if p is not None]
            for a, b in itertools.combinations(parts, 2):
                verts = a.vertices | b.vertices
                if verts in seen:
                    continue
                seen.add(verts)
                tag = "G1" if view.v is not None and view.v in verts else "plain"
                yield Ring(tag, node.s, node.t, (a, b), verts)


def iter_kites(view: BlockView) -> Iterator[Kite]:
    """A path glued to a triangle-string at a joint other than ``v``."""
    g, v = view.g, view.v
    seen = set()
    for tree in view.rootings():
        for node in tree.walk():
            if node.kind == SERIES:
                kids = node.children
                for i, c in enumerate(kids):
                    if c.kind != PARALLEL:
                        continue
                    st = string_of(c, g, v)
                    if st is None:
                        continue
                    for step in (-1, 1):
                        j = i + step
                        run = []
                        while 0 <= j < len(kids) and kids[j].kind == EDGE:
                            run.append(kids[j])
                            j += step
                        if not run:
                            continue
                        joint = c.s if step == -1 else c.t
                        path = [joint]
                        for e in run:
                            path.append(e.s if e.t == path[-1] else e.t)
                        kite = Kite(tuple(reversed(path)), st, joint)
                        if joint != v and (kite.path, joint) not in seen:
                            seen.add((kite.path, joint))
                            yield kite
            elif node.kind == PARALLEL:
                paths = [c for c in node.children if is_path_node(c)]
                strs = [p for p in (string_of(c, g, v) for c in node.children
                                    if c.kind == SERIES) if p is not None]
                for c in paths:
                    seq = [c.s] + [e.t for e in c.children]
                    for st in strs:
                        for joint, path in ((c.s, seq), (c.t, seq[::-1])):
                            kite = Kite(tuple(reversed(path)), st, joint)
                            if joint != v and (kite.path, joint) not in seen:
                                seen.add((kite.path, joint))
                                yield kite


def iter_gamma_rings(view: BlockView) -> Iterator[GammaRing]:
    """The whole block as a Gamma piece around ``v`` in parallel with a string."""
    v = view.v
    if v is None or len(view.adj[v]) != 2:
        return
    for p in view.chains():
        if v not in p[1:-1]:
            continue
        tree = view.tree(p[0], p[-1])
        if tree is None or tree.kind != PARALLEL:
            continue
        zero = [c for c in tree.children if c.kind == EDGE or is_path_node(c)]
        rest = [c for c in tree.children if not (c.kind == EDGE or is_path_node(c))]
        if len(rest) != 1 or rest[0].kind != SERIES:
            continue
        st = string_of(rest[0], view.g, v)
        if st is None:
            continue
        options = [zero]
        if any(c.kind == EDGE for c in zero):
            options.append([c for c in zero if c.kind != EDGE])
        for zs in options:
            verts = frozenset(x for c in zs for x in c.vertices)
            edges = sorted({e for c in zs for e in c.edges()})
            shape = classify_gamma_raw(sorted(verts), edges, tree.s, tree.t, v)
            if shape is not None and shape.tag != 1:
                yield GammaRing(shape, verts, st, frozenset(view.block))
                break


def find_ring(g: Graph, block: Sequence[int], v: int | None = None
              ) -> tuple[str, frozenset[int]] | None:
    """First ring in the block: plain/G1 from two pseudo-strings, else a Gamma ring."""
    view = BlockView(g, block, v)
    for ring in iter_rings(view):
        return ring.tag, ring.vertices
    for gr in iter_gamma_rings(view):
        return f"G{gr.shape.tag}", gr.vertices
    return None


def find_kite(g: Graph, block: Sequence[int], v: int | None = None) -> Kite | None:
    for kite in iter_kites(BlockView(g, block, v)):
        return kite
    return None


def piece_report(g: Graph, block: Sequence[int], v: int | None = None) -> dict:
    """JSON-ready summary of everything the matchers see in one block."""
    view = BlockView(g, block, v)
    out: dict = {"block": view.block, "cut_vertex": v,
                 "zero_series_pieces": [list(p) for p in view.chains()]}
    gammas = []
    if v is not None:
        # group chains by terminals with v allowed inside (v sees the outside)
        groups: dict[tuple[int, int], list[ZeroSeriesPiece]] = {}
        for path in view.chains():
            piece = ZeroSeriesPiece(path)
            groups.setdefault(piece.terminals, []).append(piece)
        for (s, t), ps in sorted(groups.items()):
            q = ZeroParallelPiece(s, t, tuple(ps))
            if len(ps) >= 2 and v in q.vertices:
                shape = classify_gamma(q, v)
                if shape is not None:
                    gammas.append({"tag": shape.tag, "s": shape.s, "t": shape.t,
                                   "chord": shape.chord})
    out["zero_parallel_pieces"] = [
        {"s": p.s, "t": p.t, "vertices": sorted(p.vertices)}
        for p in find_zero_parallel_pieces(g, block, v)]
    out["gamma"] = gammas
    out["rings"] = [{"tag": r.tag, "vertices": sorted(r.vertices)} for r in iter_rings(view)]
    out["gamma_rings"] = [{"tag": gr.shape.tag, "vertices": sorted(gr.vertices)}
                          for gr in iter_gamma_rings(view)]
    out["kites"] = [{"path": list(k.path), "joint": k.joint,
                     "string": sorted(k.string.vertices)} for k in iter_kites(view)]
    return out
