"""Exact indeque numbers: subset brute force and a series-parallel dynamic program.

These are ground-truth oracles.  The brute force works on any small graph;
the dynamic program runs on any K4-minor-free graph through its SP trees.
"""

from __future__ import annotations

import itertools
from typing import Callable

from .decompose import (EDGE, SERIES, SPNode, binarize, block_decompose, check_tree,
                        is_k4_minor_free, realize, recognize_sp)
from .graph import Graph, induced_subgraph, verify_indeque

HARD_LIMIT = 26


class OverLimit(ValueError):
    pass


class TreeMismatch(ValueError):
    pass


class NotK4MinorFree(ValueError):
    pass


# -- brute force ----------------------------------------------------------------

def _component_max(g: Graph, verts: list[int]) -> list[int]:
    """Lexicographically least maximum indeque subset of one component."""
    k = len(verts)
    order = sorted(verts)
    in_set = [False] * g.n
    comp_of: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    chosen: list[int] = []
    best: list[int] = []

    def add(v: int) -> bool:
        nbrs = [u for u in g.adj[v] if in_set[u]]
        if not nbrs:
            comp_of[v] = v
            members[v] = [v]
        else:
            c = comp_of[nbrs[0]]
            if any(comp_of[u] != c for u in nbrs) or len(members[c]) != len(nbrs):
                return False
            comp_of[v] = c
            members[c].append(v)
        in_set[v] = True
        chosen.append(v)
        return True

    def remove(v: int) -> None:
        in_set[v] = False
        chosen.pop()
        c = comp_of.pop(v)
        members[c].pop()
        if not members[c]:
            del members[c]

    def search(i: int) -> None:
        nonlocal best
        if len(chosen) + (k - i) <= len(best):
            return
        if i == k:
            best = list(chosen)
            return
        v = order[i]
        if add(v):
            search(i + 1)
            remove(v)
        search(i + 1)

    search(0)
    return best


def brute_force_max(g: Graph, limit: int = 20) -> tuple[int, list[int]]:
    """Maximum indeque set by exhaustive search, split over connected components.

    The witness is the lexicographically least maximum set.  Refuses graphs
    with more than ``limit`` vertices (never more than 26).
    """
    cap = min(limit, HARD_LIMIT)
    if g.n > cap:
        raise OverLimit(f"n={g.n} exceeds brute-force limit {cap}")
    witness: list[int] = []
    for comp in g.components():
        witness.extend(_component_max(g, comp))
    witness.sort()
    assert verify_indeque(g, witness)
    return len(witness), witness


def _max_clique_in(cands: int, adj: list[int], size: int) -> int:
    if not cands:
        return size
    best = size
    while cands:
        if size + bin(cands).count("1") <= best:
            break
        v = cands.bit_length() - 1
        cands &= ~(1 << v)
        best = max(best, _max_clique_in(cands & adj[v], adj, size + 1))
    return best


def _masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.adj[v]) for v in range(g.n)]


def omega(g: Graph, limit: int = 40) -> int:
    """Clique number by branch and bound."""
    if g.n > limit:
        raise OverLimit(f"n={g.n} exceeds limit {limit}")
    return _max_clique_in((1 << g.n) - 1, _masks(g), 0)


def alpha(g: Graph, limit: int = 40) -> int:
    """Independence number, as the clique number of the complement."""
    if g.n > limit:
        raise OverLimit(f"n={g.n} exceeds limit {limit}")
    full = (1 << g.n) - 1
    comp = [full & ~m & ~(1 << v) for v, m in enumerate(_masks(g))]
    return _max_clique_in(full, comp, 0)


def has_k4_minor_bruteforce(g: Graph, limit: int = 10) -> bool:
    """Search every graph reachable by edge contractions for a K4 subgraph.

    Deletions never help find a subgraph, so contractions alone suffice.
    Independent of the series-parallel machinery; meant for tiny graphs.
    """
    if g.n > limit:
        raise OverLimit(f"n={g.n} exceeds limit {limit}")
    start = frozenset(frozenset(e) for e in g.edges())
    seen = {start}
    stack = [start]
    while stack:
        edges = stack.pop()
        if _has_k4(edges):
            return True
        if len(edges) < 6:
            continue
        for e in edges:
            u, w = sorted(e)
            merged = set()
            for f in edges:
                if f == e:
                    continue
                a, b = (u if x == w else x for x in f)
                if a != b:
                    merged.add(frozenset((a, b)))
            nxt = frozenset(merged)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _has_k4(edges: frozenset) -> bool:
    nbrs: dict[int, set[int]] = {}
    for e in edges:
        a, b = e
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)
    for a, b in (tuple(e) for e in edges):
        common = nbrs[a] & nbrs[b]
        for c, d in itertools.combinations(common, 2):
            if d in nbrs[c]:
                return True
    return False


# -- series-parallel dynamic program -----------------------------------------------
#
# A terminal's state relative to a node's subgraph H:
#   OUT      not in the set
#   ALONE    in the set, no set neighbour inside H
#   CLOSED   in the set, its clique in H has internal vertices but not the other terminal
#   JOINED   both terminals in the set and in one clique of H, either the bare
#            edge (JOINED) or a triangle through one internal vertex (JOINED_TRI)
# Internal vertices of H only see vertices of H, so at most one side of any
# composition may contribute internal vertices to a terminal's clique.

OUT, ALONE, CLOSED, JOINED, JOINED_TRI = range(5)
STATE_NAMES = ("out", "alone", "closed", "joined", "joined_tri")

Weights = tuple[int, int, int]  # (out, in with no set neighbour, in with set neighbour)
UNIT: Weights = (0, 1, 1)


def _weight(w: Weights, state: int) -> int:
    if state == OUT:
        return w[0]
    return w[1] if state == ALONE else w[2]


def _series_join(l: int, r: int, a_state: int, b_state: int,
                 ab_edge: bool) -> tuple[tuple[int, int], int] | None:
    """Merge at an inner vertex c in the set; ``l``/``r`` are c's states on each side."""
    lj, rj = l >= JOINED, r >= JOINED
    if not lj and not rj:
        if l == CLOSED and r == CLOSED:
            return None
        mode = ALONE if l == ALONE and r == ALONE else CLOSED
        return (a_state, b_state), mode
    if lj and r == ALONE:
        return (CLOSED, b_state), CLOSED
    if rj and l == ALONE:
        return (a_state, CLOSED), CLOSED
    if l == JOINED and r == JOINED and ab_edge:
        return (JOINED_TRI, JOINED_TRI), CLOSED
    return None


def _merge_terminal(x: int, y: int) -> int | None:
    if x == OUT or y == OUT:
        return OUT if x == y else None
    if x == CLOSED and y == CLOSED:
        return None
    return CLOSED if CLOSED in (x, y) else ALONE


def _parallel_join(s1: tuple[int, int], s2: tuple[int, int]) -> tuple[int, int] | None:
    j1, j2 = s1[0] >= JOINED, s2[0] >= JOINED
    if j1 and j2:
        if s1[0] == JOINED_TRI and s2[0] == JOINED_TRI:
            return None
        return s1 if s1[0] == JOINED_TRI else s2
    if j1 or j2:
        joined, other = (s1, s2) if j1 else (s2, s1)
        return joined if other == (ALONE, ALONE) else None
    a = _merge_terminal(s1[0], s2[0])
    b = _merge_terminal(s1[1], s2[1])
    if a is None or b is None:
        return None
    return a, b


_EDGE_TABLE = {(OUT, OUT): 0, (ALONE, OUT): 0, (OUT, ALONE): 0, (JOINED, JOINED): 0}


class SeriesParallelDP:
    """Vertex-weighted maximum indeque set over a binary SP tree.

    ``weights[v]`` gives the score of ``v`` when out of the set, in the set
    without set neighbours in the block, and in the set with some.  Unlisted
    vertices score as in the plain problem.
    """

    def __init__(self, g: Graph, tree: SPNode,
                 weights: dict[int, Weights] | None = None):
        self.g = g
        self.tree = binarize(tree)
        self.weights = weights or {}
        self.tables: dict[int, dict[tuple[int, int], tuple[int, object]]] = {}
        self._run()

    def w(self, v: int) -> Weights:
        return self.weights.get(v, UNIT)

    def _run(self) -> None:
        order = []
        stack = [self.tree]
        while stack:
            node = stack.pop()
            order.append(node)
            if node.kind != EDGE:
                stack.extend(node.children)
        for node in reversed(order):
            if node.kind == EDGE:
                self.tables[id(node)] = {k: (v, None) for k, v in _EDGE_TABLE.items()}
            elif node.kind == SERIES:
                self.tables[id(node)] = self._series(node)
            else:
                self.tables[id(node)] = self._parallel(node)

    def _series(self, node: SPNode) -> dict:
        left, right = node.children
        c = left.t
        wc = self.w(c)
        ab_edge = self.g.has_edge(node.s, node.t)
        out: dict = {}
        for s1, (v1, _) in self.tables[id(left)].items():
            for s2, (v2, _) in self.tables[id(right)].items():
                if (s1[1] == OUT) != (s2[0] == OUT):
                    continue
                if s1[1] == OUT:
                    state, val = (s1[0], s2[1]), v1 + v2 + wc[0]
                else:
                    got = _series_join(s1[1], s2[0], s1[0], s2[1], ab_edge)
                    if got is None:
                        continue
                    state, mode = got
                    val = v1 + v2 + _weight(wc, mode)
                if state not in out or val > out[state][0]:
                    out[state] = (val, (s1, s2))
        return out

    def _parallel(self, node: SPNode) -> dict:
        left, right = node.children
        out: dict = {}
        for s1, (v1, _) in self.tables[id(left)].items():
            for s2, (v2, _) in self.tables[id(right)].items():
                state = _parallel_join(s1, s2)
                if state is None:
                    continue
                val = v1 + v2
                if state not in out or val > out[state][0]:
                    out[state] = (val, (s1, s2))
        return out

    def root_values(self) -> dict[tuple[int, int], int]:
        """Best total per root state, terminal weights included."""
        s, t = self.tree.s, self.tree.t
        return {st: val + _weight(self.w(s), st[0]) + _weight(self.w(t), st[1])
                for st, (val, _) in self.tables[id(self.tree)].items()}

    def best(self, accept: Callable[[tuple[int, int]], bool] = lambda st: True
             ) -> tuple[int, tuple[int, int]] | None:
        cands = [(val, st) for st, val in self.root_values().items() if accept(st)]
        if not cands:
            return None
        return max(cands, key=lambda p: (p[0], [-x for x in p[1]]))

    def modes(self, root_state: tuple[int, int]) -> dict[int, int]:
        """Per-vertex mode (OUT, ALONE or CLOSED) of the solution ending in ``root_state``."""
        res: dict[int, int] = {}
        s, t = self.tree.s, self.tree.t
        res[s] = min(root_state[0], CLOSED)
        res[t] = min(root_state[1], CLOSED)
        stack = [(self.tree, root_state)]
        while stack:
            node, st = stack.pop()
            if node.kind == EDGE:
                continue
            s1, s2 = self.tables[id(node)][st][1]
            left, right = node.children
            if node.kind == SERIES:
                c = left.t
                if s1[1] == OUT:
                    res[c] = OUT
                else:
                    res[c] = _series_join(s1[1], s2[0], s1[0], s2[1], True)[1]
            stack.append((left, s1))
            stack.append((right, s2))
        return res


def sp_dp_max(block: Graph, tree: SPNode) -> tuple[int, list[int]]:
    """Maximum indeque set of a series-parallel ``block`` realized by ``tree``."""
    try:
        check_tree(tree)
    except ValueError as exc:
        raise TreeMismatch(str(exc)) from None
    verts, edges = realize(tree)
    isolated = {v for v in range(block.n) if not block.adj[v]}
    if verts | isolated != set(range(block.n)) or edges != set(block.edges()):
        raise TreeMismatch("tree does not realize the block")
    if verts & isolated:
        raise TreeMismatch("tree does not realize the block")
    dp = SeriesParallelDP(block, tree)
    val, st = dp.best()
    modes = dp.modes(st)
    witness = sorted([v for v, m in modes.items() if m != OUT] + list(isolated))
    assert len(witness) == val + len(isolated), "dp witness size mismatch"
    assert verify_indeque(block, witness), "dp witness is not indeque"
    return len(witness), witness


# -- K4-minor-free graphs via the block-cut tree -----------------------------------

def _block_tree(g: Graph, block: list[int], s: int) -> tuple[Graph, SPNode, list[int]]:
    sub, back = induced_subgraph(g, block)
    index = {v: i for i, v in enumerate(back)}
    si = index[s]
    ti = sub.adj[si][0]
    return sub, recognize_sp(sub, si, ti), back


def k4mf_exact(g: Graph) -> tuple[int, list[int]]:
    """Maximum indeque set of a K4-minor-free graph.

    Blocks are solved by :class:`SeriesParallelDP`; each cut vertex carries
    the best scores of the blocks hanging below it for three situations:
    left out, in the set with its clique kept above, and in the set with its
    clique allowed to reach into one block below.
    """
    ok, _ = is_k4_minor_free(g)
    if not ok:
        raise NotK4MinorFree("not_k4_minor_free")
    bd = block_decompose(g)
    blocks_of: dict[int, list[int]] = {}
    for i, b in enumerate(bd.blocks):
        for v in b:
            blocks_of.setdefault(v, []).append(i)

    witness: list[int] = []
    done = [False] * len(bd.blocks)
    for i, root in enumerate(bd.blocks):
        if done[i]:
            continue
        witness.extend(_solve_component(g, bd.blocks, blocks_of, i, done))
    witness.sort()
    assert verify_indeque(g, witness), "k4mf witness is not indeque"
    return len(witness), witness


def _solve_component(g: Graph, blocks: list[list[int]], blocks_of: dict[int, list[int]],
                     root: int, done: list[bool]) -> list[int]:
    if len(blocks[root]) == 1:
        done[root] = True
        return list(blocks[root])
    # orient the component's block-cut tree: children[b] = [(cut, child block)]
    parent_cut: dict[int, int | None] = {root: None}
    order = [root]
    children: dict[int, list[tuple[int, int]]] = {}
    done[root] = True
    k = 0
    while k < len(order):
        b = order[k]
        k += 1
        children[b] = []
        for c in blocks[b]:
            if c == parent_cut[b]:
                continue
            for nb in blocks_of[c]:
                if not done[nb]:
                    done[nb] = True
                    parent_cut[nb] = c
                    children[b].append((c, nb))
                    order.append(nb)

    solved: dict[int, tuple[SeriesParallelDP, list[int], dict]] = {}
    scores: dict[int, tuple[int, int, int]] = {}  # block -> (out, closed, open) at its parent cut
    for b in reversed(order):
        p = parent_cut[b]
        anchor = p if p is not None else blocks[b][0]
        sub, tree, back = _block_tree(g, blocks[b], anchor)
        weights: dict[int, Weights] = {}
        by_cut: dict[int, list[int]] = {}
        for c, nb in children[b]:
            by_cut.setdefault(c, []).append(nb)
        local = {v: i for i, v in enumerate(back)}
        for c, kids in by_cut.items():
            outs = sum(scores[nb][0] for nb in kids)
            closed = sum(scores[nb][1] for nb in kids)
            gain = max([0] + [scores[nb][2] - scores[nb][1] for nb in kids])
            weights[local[c]] = (outs, 1 + closed + gain, 1 + closed)
        if p is not None:
            weights[local[p]] = (0, 0, 0)
        dp = SeriesParallelDP(sub, tree, weights)
        solved[b] = (dp, back, by_cut)
        if p is not None:
            # the anchor is the tree's source terminal
            scores[b] = (dp.best(lambda st: st[0] == OUT)[0],
                         dp.best(lambda st: st[0] == ALONE)[0],
                         dp.best(lambda st: st[0] != OUT)[0])

    chosen: list[int] = []
    stack: list[tuple[int, Callable | None]] = [(root, None)]
    while stack:
        b, accept = stack.pop()
        dp, back, by_cut = solved[b]
        _, st = dp.best(accept) if accept else dp.best()
        modes = dp.modes(st)
        p = parent_cut[b]
        for lv, mode in modes.items():
            v = back[lv]
            if v != p and mode != OUT:
                chosen.append(v)
        for c, kids in by_cut.items():
            mode = modes[back.index(c)]
            if mode == OUT:
                for nb in kids:
                    stack.append((nb, lambda st: st[0] == OUT))
                continue
            open_kid = None
            if mode == ALONE:
                gains = [(scores[nb][2] - scores[nb][1], -j) for j, nb in enumerate(kids)]
                top = max(gains)
                if top[0] > 0:
                    open_kid = kids[-top[1]]
            for nb in kids:
                if nb == open_kid:
                    stack.append((nb, lambda st: st[0] != OUT))
                else:
                    stack.append((nb, lambda st: st[0] == ALONE))
    return chosen


def exact_max(g: Graph, method: str = "brute", limit: int = 20) -> tuple[int, list[int]]:
    if method == "brute":
        return brute_force_max(g, limit)
    if method == "dp":
        return k4mf_exact(g)
    raise ValueError(f"unknown method {method!r}")


def sandwich_holds(g: Graph, value: int) -> bool:
    a, w = alpha(g), omega(g)
    return max(a, w) <= value <= a * w if g.n else value == 0

