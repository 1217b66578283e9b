"""Half-size indeque sets in graphs of maximum degree three.

A bipartition in which no vertex has two neighbours on its own side makes
both sides induce matchings plus isolated vertices, and the larger side
holds at least half the vertices.  Moving a vertex with two or more
same-side neighbours raises the cut by at least one, so single-vertex
moves reach such a bipartition within ``m`` moves.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph, GraphError, verify_indeque


class NotSubcubic(GraphError):
    def __init__(self, vertex: int, degree: int):
        super().__init__(f"not_subcubic: vertex {vertex} has degree {degree}")
        self.vertex = vertex
        self.degree = degree


@dataclass(frozen=True)
class Bipartition:
    x: tuple[int, ...]
    y: tuple[int, ...]
    cut_size: int
    moves: int = 0


def check_subcubic(g: Graph) -> None:
    for v in range(g.n):
        if len(g.adj[v]) > 3:
            raise NotSubcubic(v, len(g.adj[v]))


def max_cut_local_search(g: Graph, seed: int) -> Bipartition:
    """Locally maximal cut from a seeded random start.

    Vertices are scanned in increasing id; any vertex with at least two
    neighbours on its own side switches sides.  Stops after a clean scan.
    """
    check_subcubic(g)
    rng = random.Random(seed)
    adj = g.adj
    side = [rng.getrandbits(1) for _ in range(g.n)]
    same = [sum(1 for u in adj[v] if side[u] == side[v]) for v in range(g.n)]
    moves = 0
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if same[v] >= 2:
                sv = side[v]
                for u in adj[v]:
                    same[u] += -1 if side[u] == sv else 1
                side[v] = 1 - sv
                same[v] = len(adj[v]) - same[v]
                moves += 1
                changed = True
    m = g.m
    cut = m - sum(same) // 2
    assert moves <= m, f"{moves} moves exceed m={m}"
    ref = side[0] if g.n else 0
    x = tuple(v for v in range(g.n) if side[v] == ref)
    y = tuple(v for v in range(g.n) if side[v] != ref)
    return Bipartition(x, y, cut, moves)


def is_local_optimum(g: Graph, part: Bipartition) -> bool:
    in_x = [False] * g.n
    for v in part.x:
        in_x[v] = True
    return all(sum(1 for u in g.adj[v] if in_x[u] == in_x[v]) <= 1 for v in range(g.n))


def subcubic_half(g: Graph, seed: int) -> list[int]:
    """The larger side of :func:`max_cut_local_search` (``x`` on ties)."""
    return list(subcubic_half_with_partition(g, seed)[0])


def subcubic_half_with_partition(g: Graph, seed: int) -> tuple[list[int], Bipartition]:
    part = max_cut_local_search(g, seed)
    chosen = list(part.x if len(part.x) >= len(part.y) else part.y)
    cert = verify_indeque(g, chosen)
    assert cert, "local optimum side is not indeque"
    assert all(len(c) <= 2 for c in cert.components)
    assert 2 * len(chosen) >= g.n
    return chosen, part
