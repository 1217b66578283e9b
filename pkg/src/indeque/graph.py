"""Simple undirected graphs on dense integer ids, plus the indeque verifier.

Every solver in the package hands its output to :func:`verify_indeque`;
nothing leaves the package without passing it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Base class for malformed graph or vertex-set input."""


class MalformedHeader(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class EdgeCountMismatch(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    ``adj[v]`` is the sorted tuple of neighbours of ``v``.  Construct through
    :meth:`from_edges` unless the adjacency is already known to be valid.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    name: str | None = None
    _sets: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_sets", tuple(frozenset(a) for a in self.adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   name: str | None = None) -> Graph:
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            if v in nbrs[u]:
                raise DuplicateEdge(f"duplicate edge ({min(u, v)}, {max(u, v)})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in nbrs), name)

    @classmethod
    def empty(cls, n: int = 0) -> Graph:
        return cls(n, tuple(() for _ in range(n)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (sorted lists, ordered by smallest member).

        With ``within`` the components of the induced subgraph on that set.
        """
        allowed = set(range(self.n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for root in sorted(allowed):
            if root in seen:
                continue
            seen.add(root)
            stack, comp = [root], [root]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        stack.append(w)
                        comp.append(w)
            comps.append(sorted(comp))
        return comps


def check_vertex_set(g: Graph, s: Iterable[int]) -> list[int]:
    """Return ``s`` as a sorted list, rejecting bad ids and duplicates."""
    members = list(s)
    out = sorted(members)
    for v in out:
        if not (0 <= v < g.n):
            raise VertexOutOfRange(f"vertex {v} outside 0..{g.n - 1}")
    if len(set(out)) != len(out):
        raise GraphError("duplicate vertex in set")
    return out


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``s`` and the new-id -> old-id map.

    The map is order preserving: new id ``i`` is the ``i``-th smallest member.
    """
    keep = check_vertex_set(g, s)
    index = {v: i for i, v in enumerate(keep)}
    adj = tuple(tuple(index[w] for w in g.adj[v] if w in index) for v in keep)
    return Graph(len(keep), adj), keep


def delete_vertices(g: Graph, x: Iterable[int]) -> tuple[Graph, list[int]]:
    """``g - x`` with its new-id -> old-id map."""
    gone = set(x)
    return induced_subgraph(g, [v for v in range(g.n) if v not in gone])


@dataclass(frozen=True)
class IndequeCertificate:
    """A verified indeque set together with its clique components."""

    set: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.set)

    def to_json(self) -> dict:
        return {"set": list(self.set), "components": [list(c) for c in self.components]}


@dataclass(frozen=True)
class Rejection:
    """Why a set is not indeque: ``u`` and ``w`` share a component but are not adjacent."""

    u: int
    w: int
    component: tuple[int, ...]

    def __bool__(self) -> bool:
        return False


def verify_indeque(g: Graph, s: Iterable[int]) -> IndequeCertificate | Rejection:
    """Certificate if every component of ``g[s]`` is a clique, else a witness pair.

    The returned :class:`Rejection` is falsy so callers may write
    ``if not verify_indeque(g, s)``.
    """
    members = check_vertex_set(g, s)
    comps = g.components(members)
    for comp in comps:
        k = len(comp)
        if k <= 1:
            continue
        cset = set(comp)
        for u in comp:
            if len(g.neighbor_set(u) & cset) != k - 1:
                w = next(x for x in comp if x != u and not g.has_edge(u, x))
                return Rejection(u, w, tuple(comp))
    return IndequeCertificate(tuple(members), tuple(tuple(c) for c in comps))


# -- file formats -------------------------------------------------------------

def parse_graph(text: str | bytes, name: str | None = None) -> Graph:
    """Parse the ``n m`` header + ``u v`` edge-list format."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedHeader("empty input")
    header = lines[0].split()
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise MalformedHeader(f"bad header line {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != m:
        raise EdgeCountMismatch(f"header announces {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        tok = ln.split()
        if len(tok) != 2 or not all(t.lstrip("-").isdigit() for t in tok):
            raise MalformedHeader(f"bad edge line {ln!r}")
        edges.append((int(tok[0]), int(tok[1])))
    return Graph.from_edges(n, edges, name)


def emit_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(out) + "\n"


def parse_vertex_set(text: str | bytes) -> list[int]:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise GraphError(f"bad vertex set: {exc}") from None


def emit_vertex_set(s: Sequence[int]) -> str:
    return "".join(f"{v}\n" for v in sorted(s))


def certificate_json(cert: IndequeCertificate) -> str:
    return json.dumps(cert.to_json(), separators=(",", ":"))


def read_graph(path: str) -> Graph:
    with open(path, "rb") as fh:
        return parse_graph(fh.read(), name=path)


def write_graph(g: Graph, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(emit_graph(g))
