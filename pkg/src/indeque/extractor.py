"""Half-size indeque sets for K4-minor-free graphs by repeated contra-pairs.

A contra-pair ``(X, S)`` is an indeque set ``S`` inside a vertex set ``X``
with ``2|S| >= |X|`` and no edge from ``S`` to the outside of ``X``.
Banking ``S`` and deleting ``X`` keeps the running total at or above half of
the deleted vertices, so looping until the graph is empty gives an indeque
set of at least ``n/2`` vertices.  Every pair is checked before it is used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

from .decompose import EDGE, PARALLEL, SERIES, block_decompose, is_k4_minor_free
from .graph import Graph, delete_vertices, induced_subgraph, verify_indeque
from .pieces import (BlockView, classify_gamma_raw, iter_gamma_rings, iter_kites,
                     iter_rings, string_of)

# indeque subsets of each whole-block Gamma shape, by role, avoiding v
WHOLE_GAMMA_SETS: dict[int, tuple[str, ...]] = {
    1: ("t", "w"),
    2: ("s", "t"),
    3: ("s", "w"),
    4: ("s", "t"),
    5: ("s", "w", "u"),
    6: ("s", "w", "u"),
}

RULE_NAMES = {
    "R1": "isolated", "R2": "degree1", "R3": "adjacent_deg2", "R4": "ring",
    "R5": "kite", "R6": "gamma_ring", "R7": "pendant_string", "R8": "whole_gamma",
    "FALLBACK": "exact_fallback",
}


class NotK4MinorFree(ValueError):
    pass


class NoRuleMatched(RuntimeError):
    """No rule produced a valid contra-pair; ``graph`` is the residual input."""

    def __init__(self, graph: Graph, skipped: int = 0):
        super().__init__(f"no rule matched on residual graph with n={graph.n}, "
                         f"m={graph.m} ({skipped} candidates failed the check)")
        self.graph = graph
        self.skipped = skipped


class InvalidContraPair(AssertionError):
    pass


@dataclass(frozen=True)
class ContraPair:
    x: tuple[int, ...]
    s: tuple[int, ...]
    rule: str
    gamma: int | None = None

    def to_json(self) -> dict:
        d = {"rule": self.rule, "X": list(self.x), "S": list(self.s)}
        if self.gamma is not None:
            d["gamma"] = self.gamma
        return d


def contra_pair_problem(g: Graph, x, s) -> str | None:
    """Why ``(x, s)`` is not a contra-pair of ``g``, or None if it is."""
    xs, ss = set(x), set(s)
    if not xs:
        return "X is empty"
    if not ss <= xs:
        return "S is not inside X"
    if 2 * len(ss) < len(xs):
        return f"2|S| = {2 * len(ss)} < |X| = {len(xs)}"
    for u in ss:
        out = g.neighbor_set(u) - xs
        if out:
            return f"{u} in S has neighbour {min(out)} outside X"
    if not verify_indeque(g, ss):
        return "S is not indeque"
    return None


def _pair(g: Graph, x, s, rule: str, gamma: int | None = None) -> ContraPair | None:
    if contra_pair_problem(g, x, s) is not None:
        return None
    return ContraPair(tuple(sorted(set(x))), tuple(sorted(set(s))), rule, gamma)


def _local_rule(g: Graph) -> ContraPair | None:
    deg = [len(a) for a in g.adj]
    for u in range(g.n):
        if deg[u] == 0:
            return ContraPair((u,), (u,), "R1")
    for u in range(g.n):
        if deg[u] == 1:
            w = g.adj[u][0]
            return ContraPair(tuple(sorted((u, w))), (u,), "R2")
    for v1 in range(g.n):
        if deg[v1] != 2:
            continue
        for v2 in g.adj[v1]:
            if deg[v2] == 2:
                v3 = next(w for w in g.adj[v1] if w != v2)
                v4 = next(w for w in g.adj[v2] if w != v1)
                return ContraPair(tuple(sorted({v1, v2, v3, v4})),
                                  tuple(sorted((v1, v2))), "R3")
    return None


def _block_candidates(view: BlockView) -> Iterator[tuple[str, set[int], set[int], int | None]]:
    g, v = view.g, view.v
    block = frozenset(view.block)
    for ring in iter_rings(view):
        apexes = {a for st in ring.strings for a in st.apexes}
        yield "R4", set(ring.vertices), apexes, None
    for kite in iter_kites(view):
        yield "R5", set(kite.trimmed), set(kite.string.apexes) | {kite.joint}, None
    if v is not None and len(block) <= 5:
        edges = [(a, b) for a in view.block for b in view.adj[a] if a < b]
        for s, t in itertools.combinations(view.block, 2):
            shape = classify_gamma_raw(view.block, edges, s, t, v)
            if shape is not None:
                roles = dict(shape.roles)
                yield ("R8", set(block), {roles[r] for r in WHOLE_GAMMA_SETS[shape.tag]},
                       shape.tag)
    deg2 = view.deg2(block)
    for gr in iter_gamma_rings(view):
        tag = gr.shape.tag
        if tag == 2:
            for v2 in view.adj[v]:
                yield "R6", set(block), deg2 | {v2}, tag
        elif tag == 3:
            yield "R6", set(block - {v}), deg2 - {v}, tag
        elif tag == 4:
            for v1 in view.adj[v]:
                if v1 in (gr.shape.s, gr.shape.t):
                    yield "R6", set(block), (deg2 | {v1}) - {v}, tag
        else:
            yield "R6", set(block), deg2 - {v}, tag
    for a, t in _pendant_roots(view):
        tree = view.tree(a, t)
        if tree is None or tree.kind != PARALLEL or len(tree.children) != 2:
            continue
        kinds = sorted(c.kind for c in tree.children)
        if kinds != [EDGE, SERIES]:
            continue
        body = next(c for c in tree.children if c.kind == SERIES)
        if string_of(body, g, v) is not None:
            yield "R7", set(block), deg2 | {t}, None


def _pendant_roots(view: BlockView) -> Iterator[tuple[int, int]]:
    if view.v is not None:
        for t in view.adj[view.v]:
            yield view.v, t
        return
    for a in view.block:
        for b in view.adj[a]:
            yield a, b


def find_contra_pair(g: Graph, stats: dict | None = None) -> ContraPair:
    """First contra-pair in rule priority order (local rules, then leaf blocks)."""
    if g.n == 0:
        raise ValueError("empty graph has no contra-pair")
    cp = _local_rule(g)
    if cp is not None:
        return cp
    skipped = 0
    bd = block_decompose(g)
    leaves = sorted((bd.blocks[i] for i in bd.leaf_blocks if len(bd.blocks[i]) >= 3),
                    key=lambda b: b[0])
    cutset = set(bd.cut_vertices)
    for block in leaves:
        cuts = [x for x in block if x in cutset]
        view = BlockView(g, block, cuts[0] if cuts else None)
        for rule, x, s, gamma in _block_candidates(view):
            cp = _pair(g, x, s, rule, gamma)
            if cp is not None:
                if stats is not None:
                    stats["skipped"] = stats.get("skipped", 0) + skipped
                return cp
            skipped += 1
    if stats is not None:
        stats["skipped"] = stats.get("skipped", 0) + skipped
    raise NoRuleMatched(g, skipped)


def _fallback_pair(g: Graph) -> ContraPair:
    from .exact import brute_force_max

    bd = block_decompose(g)
    cutset = set(bd.cut_vertices)
    leaves = sorted((bd.blocks[i] for i in bd.leaf_blocks), key=lambda b: b[0])
    for block in leaves:
        cuts = [x for x in block if x in cutset]
        inner = [x for x in block if x not in cuts]
        sub, back = induced_subgraph(g, inner)
        _, wit = brute_force_max(sub, limit=26)
        s = [back[i] for i in wit]
        for x in (block, inner):
            cp = _pair(g, x, s, "FALLBACK")
            if cp is not None:
                return cp
    raise NoRuleMatched(g)


@dataclass
class ExtractionTrace:
    n: int
    steps: list[ContraPair] = field(default_factory=list)
    set: tuple[int, ...] = ()
    skipped: int = 0

    @property
    def bound_ok(self) -> bool:
        return len(self.set) >= math.ceil(self.n / 2)

    def to_json(self) -> dict:
        return {"steps": [st.to_json() for st in self.steps], "set": list(self.set),
                "n": self.n, "bound_ok": self.bound_ok, "skipped": self.skipped}


def extract_half(g: Graph, fallback_exact: bool = False,
                 check_minor: bool = True) -> tuple[list[int], ExtractionTrace]:
    """Indeque set of size at least ``ceil(n/2)`` of a K4-minor-free graph."""
    if check_minor and not is_k4_minor_free(g)[0]:
        raise NotK4MinorFree("not_k4_minor_free")
    trace = ExtractionTrace(g.n)
    stats: dict = {}
    residual, back = g, list(range(g.n))
    banked: list[int] = []
    while residual.n:
        try:
            cp = find_contra_pair(residual, stats)
        except NoRuleMatched:
            if not fallback_exact:
                raise
            cp = _fallback_pair(residual)
        problem = contra_pair_problem(residual, cp.x, cp.s)
        if problem is not None:
            raise InvalidContraPair(f"{cp.rule}: {problem}")
        step = ContraPair(tuple(sorted(back[i] for i in cp.x)),
                          tuple(sorted(back[i] for i in cp.s)), cp.rule, cp.gamma)
        trace.steps.append(step)
        banked.extend(step.s)
        residual, keep = delete_vertices(residual, cp.x)
        back = [back[i] for i in keep]
    result = sorted(banked)
    trace.set = tuple(result)
    trace.skipped = stats.get("skipped", 0)
    if not verify_indeque(g, result):
        raise InvalidContraPair("banked union is not indeque in the input graph")
    if not trace.bound_ok:
        raise InvalidContraPair(f"size {len(result)} below ceil({g.n}/2)")
    return result, trace
