"""Simple undirected graphs, named families, and the Q-graph construction.

Vertices are always ``0..n-1``. Edges are kept as a sorted tuple of
``(i, j)`` pairs with ``i < j``; that order fixes the column order of the
incidence matrix and the labels of the edge-vertices in ``q_graph``.
"""

from __future__ import annotations

import io
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import EdgeListParseError, GraphError

__all__ = [
    "Graph",
    "GraphClassification",
    "FAMILIES",
    "make_family",
    "classify",
    "incidence",
    "line_graph",
    "q_graph",
    "read_edge_list",
    "write_edge_list",
    "load_edge_list",
    "save_edge_list",
]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        seen = set()
        for i, j in edges:
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (0 <= i < j < self.n):
                raise GraphError(f"edge ({i}, {j}) out of range or not ordered i < j for n={self.n}")
            if (i, j) in seen:
                raise GraphError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if list(edges) != sorted(edges):
            raise GraphError("edge list must be sorted lexicographically")
        adj = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in edges:
            adj[i, j] = adj[j, i] = 1
        adj.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from unordered pairs in any order.

        Pairs are normalized to ``i < j`` and sorted; duplicates (in either
        orientation) and self-loops are rejected.
        """
        normalized = []
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            normalized.append((min(i, j), max(i, j)))
        if len(set(normalized)) != len(normalized):
            dup = next(e for e in normalized if normalized.count(e) > 1)
            raise GraphError(f"duplicate edge {dup}")
        return cls(n, tuple(sorted(normalized)))

    @classmethod
    def from_adjacency(cls, adjacency) -> Graph:
        a = np.asarray(adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise GraphError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise GraphError("adjacency must have zero diagonal")
        if not np.all((a == 0) | (a == 1)):
            raise GraphError("adjacency entries must be 0 or 1")
        n = a.shape[0]
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]]
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def neighbors(self, u: int) -> list[int]:
        return [int(w) for w in np.flatnonzero(self.adjacency[u])]


@dataclass(frozen=True)
class GraphClassification:
    is_connected: bool
    is_bipartite: bool
    bipartition: tuple[int, ...] | None = None
    regularity: int | None = None


# -- families -----------------------------------------------------------------


def _hypercube(d: int) -> Graph:
    if d < 1:
        raise GraphError("hypercube needs d >= 1")
    n = 1 << d
    edges = [(x, x ^ (1 << b)) for x in range(n) for b in range(d) if x < x ^ (1 << b)]
    return Graph.from_edges(n, edges)


def _cocktail(m: int) -> Graph:
    # antipodal pairs are (2k, 2k+1); everything else is adjacent
    if m < 2:
        raise GraphError("cocktail party graph needs m >= 2")
    n = 2 * m
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if i // 2 != j // 2]
    return Graph.from_edges(n, edges)


def _halved_hypercube(d: int) -> Graph:
    """Halved 2d-cube: even-weight strings of length 2d at Hamming distance 2."""
    if d < 1:
        raise GraphError("halved hypercube needs d >= 1")
    words = [x for x in range(1 << (2 * d)) if bin(x).count("1") % 2 == 0]
    index = {w: k for k, w in enumerate(words)}
    edges = [
        (index[x], index[y])
        for x, y in itertools.combinations(words, 2)
        if bin(x ^ y).count("1") == 2
    ]
    return Graph.from_edges(len(words), edges)


def _cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def _complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def _path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


FAMILIES = {
    "hypercube": (_hypercube, 1),
    "cocktail": (_cocktail, 1),
    "halved_hypercube": (_halved_hypercube, 1),
    "cycle": (_cycle, 1),
    "complete": (_complete, 1),
    "path": (_path, 1),
    "petersen": (_petersen, 0),
}


def make_family(name: str, params: Iterable[int] = ()) -> Graph:
    """Generate a named graph.

    ``halved_hypercube`` with parameter ``d`` is the halved ``2d``-cube, so
    ``d=2`` gives the 8-vertex graph on even-weight strings of length 4.
    """
    try:
        builder, arity = FAMILIES[name]
    except KeyError:
        raise GraphError(f"unknown family {name!r}") from None
    params = [int(p) for p in params]
    if len(params) != arity:
        raise GraphError(f"family {name!r} takes {arity} integer parameter(s), got {len(params)}")
    return builder(*params)


# -- structure ----------------------------------------------------------------


def classify(g: Graph) -> GraphClassification:
    colour = [-1] * g.n
    bipartite = True
    components = 0
    for start in range(g.n):
        if colour[start] != -1:
            continue
        components += 1
        colour[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if colour[y] == -1:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    bipartite = False
    degrees = g.degrees()
    regularity = int(degrees[0]) if g.n and np.all(degrees == degrees[0]) else None
    return GraphClassification(
        is_connected=components <= 1,
        is_bipartite=bipartite,
        bipartition=tuple(colour) if bipartite else None,
        regularity=regularity,
    )


def incidence(g: Graph) -> np.ndarray:
    """Vertex-edge incidence matrix; column ``j`` is ``g.edges[j]``."""
    r = np.zeros((g.n, g.m), dtype=np.int64)
    for k, (i, j) in enumerate(g.edges):
        r[i, k] = r[j, k] = 1
    return r


def line_graph(g: Graph) -> Graph:
    r = incidence(g)
    a = r.T @ r - 2 * np.eye(g.m, dtype=np.int64)
    return Graph.from_adjacency(a)


def q_graph(g: Graph) -> Graph:
    """Subdivide every edge and join subdivision vertices of incident edges.

    Labels ``0..n-1`` are the original vertices; label ``n + k`` is the new
    vertex on edge ``g.edges[k]``.
    """
    r = incidence(g)
    lg = r.T @ r - 2 * np.eye(g.m, dtype=np.int64)
    top = np.hstack([np.zeros((g.n, g.n), dtype=np.int64), r])
    bottom = np.hstack([r.T, lg])
    return Graph.from_adjacency(np.vstack([top, bottom]))


# -- edge-list I/O ------------------------------------------------------------


def read_edge_list(data: str | bytes) -> Graph:
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise EdgeListParseError(f"non-ASCII input: {exc}") from None
    n = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(io.StringIO(data), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1 or not fields[0].isdigit():
                raise EdgeListParseError(f"expected vertex count, got {line!r}", lineno)
            n = int(fields[0])
            continue
        if len(fields) != 2 or not all(f.isdigit() for f in fields):
            raise EdgeListParseError(f"expected 'i j', got {line!r}", lineno)
        i, j = int(fields[0]), int(fields[1])
        if i == j:
            raise EdgeListParseError(f"self-loop at vertex {i}", lineno)
        if i >= n or j >= n:
            raise EdgeListParseError(f"vertex index out of range for n={n}: {line!r}", lineno)
        if i > j:
            raise EdgeListParseError(f"edge must satisfy i < j: {line!r}", lineno)
        if (i, j) in seen:
            raise EdgeListParseError(f"duplicate edge ({i}, {j}), first seen on line {seen[(i, j)]}", lineno)
        seen[(i, j)] = lineno
        edges.append((i, j))
    if n is None:
        raise EdgeListParseError("missing vertex count line")
    return Graph(n, tuple(sorted(edges)))


def write_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{i} {j}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def load_edge_list(path) -> Graph:
    with open(path, "rb") as fh:
        return read_edge_list(fh.read())


def save_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_edge_list(g))
