"""Immutable simple graphs and the metric primitives everything else builds on.

Distances are BFS distances; intervals use the union semantics (a vertex is in
I(u, v) when it lies on at least one shortest u,v-path, endpoints included).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from io import StringIO
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

INF = -1  # sentinel for unreachable vertices in BFS distance vectors
DEFAULT_PATH_CAP = 10**6


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"graph is disconnected: no path between {u} and {v}")
        self.pair = (u, v)


class CapExceeded(RuntimeError):
    """Raised when a shortest-path enumeration would exceed its cap."""

    def __init__(self, u: int, v: int, cap: int):
        super().__init__(f"more than {cap} shortest paths between {u} and {v}")
        self.u, self.v, self.cap = u, v, cap


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: Mapping[int, str] | None = None
    _masks: tuple[int, ...] = field(default=(), repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Mapping[int, str] | None = None) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        masks = tuple(sum(1 << w for w in adj) for adj in adjacency)
        return cls(n, adjacency, dict(labels) if labels is not None else None, masks)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._masks[u] >> v & 1)

    def neighbor_mask(self, v: int) -> int:
        """Neighbours of ``v`` as an int bitset."""
        return self._masks[v]

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return self.labels.get(v, str(v))

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Return the induced subgraph and the list mapping new index -> old index."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u in order for v in self.adjacency[u]
                 if v in index and u < v]
        labels = None
        if self.labels is not None:
            labels = {index[v]: self.label(v) for v in order}
        return Graph.from_edges(len(order), edges, labels), order

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        return INF not in bfs_distances(self, 0)


class DistanceMatrix:
    """All-pairs shortest-path lengths of a connected graph.

    ``rows`` is a list-of-lists copy for fast scalar access from Python loops;
    ``array`` is the same data as a numpy matrix for vectorised checks.
    """

    __slots__ = ("array", "rows")

    def __init__(self, array: np.ndarray):
        self.array = array
        self.array.setflags(write=False)
        self.rows: list[list[int]] = array.tolist()

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        return self.rows[u][v]

    def __len__(self) -> int:
        return len(self.rows)

    def max(self) -> int:
        return int(self.array.max()) if len(self.rows) else 0


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise GraphError(f"vertex {v} out of range for {g.vertex_count} vertices")


def bfs_distances(g: Graph, source: int) -> list[int]:
    _check_vertex(g, source)
    dist = [INF] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adj[x]:
            if dist[y] == INF:
                dist[y] = dx
                queue.append(y)
    return dist


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    n = g.vertex_count
    arr = np.zeros((n, n), dtype=np.int32)
    for u in range(n):
        row = bfs_distances(g, u)
        if INF in row:
            raise DisconnectedGraphError(u, row.index(INF))
        arr[u] = row
    return DistanceMatrix(arr)


def interval(g: Graph, dist: DistanceMatrix, u: int, v: int) -> frozenset[int]:
    """Vertices on at least one shortest u,v-path, endpoints included."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    du, dv = dist.rows[u], dist.rows[v]
    d = du[v]
    return frozenset(w for w in range(g.vertex_count) if du[w] + dv[w] == d)


@dataclass(frozen=True)
class ShortestPathDag:
    source: int
    target: int
    arcs: dict[int, tuple[int, ...]]  # successor lists, sorted

    @property
    def vertices(self) -> frozenset[int]:
        out = set(self.arcs)
        for succ in self.arcs.values():
            out.update(succ)
        out.add(self.source)
        return frozenset(out)

    def arc_list(self) -> list[tuple[int, int]]:
        return [(a, b) for a in sorted(self.arcs) for b in self.arcs[a]]

    def path_count(self) -> int:
        memo = {self.target: 1}

        def count(x: int) -> int:
            if x not in memo:
                memo[x] = sum(count(y) for y in self.arcs.get(x, ()))
            return memo[x]

        # recursion depth is bounded by d(source, target)
        return count(self.source)


def shortest_path_dag(g: Graph, dist: DistanceMatrix, u: int, v: int) -> ShortestPathDag:
    members = interval(g, dist, u, v)
    du = dist.rows[u]
    arcs: dict[int, tuple[int, ...]] = {}
    for a in sorted(members):
        succ = tuple(b for b in g.adjacency[a] if b in members and du[b] == du[a] + 1)
        if succ:
            arcs[a] = succ
    return ShortestPathDag(u, v, arcs)


def enumerate_shortest_paths(g: Graph, u: int, v: int, cap: int = DEFAULT_PATH_CAP,
                             dist: DistanceMatrix | None = None) -> list[tuple[int, ...]]:
    """All shortest u,v-paths in lexicographic order; raises CapExceeded past ``cap``."""
    if cap < 1:
        raise ValueError("cap must be positive")
    _check_vertex(g, u)
    _check_vertex(g, v)
    if dist is not None:
        to_v = dist.rows[v]
    else:
        to_v = bfs_distances(g, v)
    if to_v[u] == INF:
        return []
    adj = g.adjacency
    paths: list[tuple[int, ...]] = []
    stack: list[int] = [u]

    def extend(x: int) -> None:
        if x == v:
            if len(paths) >= cap:
                raise CapExceeded(u, v, cap)
            paths.append(tuple(stack))
            return
        want = to_v[x] - 1
        for y in adj[x]:
            if to_v[y] == want:
                stack.append(y)
                extend(y)
                stack.pop()

    extend(u)
    return paths


# --- file formats -----------------------------------------------------------

def write_edge_list(g: Graph, sink: TextIO) -> None:
    edges = g.edges()
    sink.write(f"{g.vertex_count} {len(edges)}\n")
    for u, v in edges:
        sink.write(f"{u} {v}\n")


def write_dimacs_graph(g: Graph, sink: TextIO) -> None:
    edges = g.edges()
    sink.write(f"p edge {g.vertex_count} {len(edges)}\n")
    for u, v in edges:
        sink.write(f"e {u + 1} {v + 1}\n")


def _content_lines(source: TextIO) -> list[list[str]]:
    out = []
    for line in source:
        parts = line.split()
        if not parts or parts[0] in ("c", "#") or parts[0].startswith("#"):
            continue
        out.append(parts)
    return out


def read_edge_list(source: TextIO) -> Graph:
    lines = _content_lines(source)
    if not lines:
        raise GraphError("empty edge-list file")
    n, m = int(lines[0][0]), int(lines[0][1])
    edges = [(int(a), int(b)) for a, b in lines[1:]]
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def read_dimacs_graph(source: TextIO) -> Graph:
    n = m = None
    edges = []
    for parts in _content_lines(source):
        if parts[0] == "p":
            n, m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise GraphError("missing 'p edge' header")
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def read_graph(source: TextIO) -> Graph:
    """Read either format, sniffing the first content line."""
    text = source.read()
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("c ") or s == "c" or s.startswith("#"):
            continue
        if s.startswith("p "):
            return read_dimacs_graph(StringIO(text))
        return read_edge_list(StringIO(text))
    raise GraphError("empty graph file")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def fingerprint(g: Graph, dist: DistanceMatrix | None = None) -> tuple:
    """Isomorphism invariant: order, size, degree sequence, distance multiset."""
    if dist is None:
        dist = all_pairs_distances(g)
    degrees = tuple(sorted(g.degree(v) for v in range(g.vertex_count)))
    values, counts = np.unique(dist.array, return_counts=True)
    return (g.vertex_count, g.edge_count, degrees,
            tuple(zip(values.tolist(), counts.tolist())))


def vertex_set(vertices: Iterable[int], g: Graph | None = None) -> tuple[int, ...]:
    """Normalise to a strictly increasing tuple, range-checked against ``g``."""
    out = tuple(sorted(set(vertices)))
    if g is not None:
        for v in out:
            _check_vertex(g, v)
    return out


def to_mask(vertices: Sequence[int] | Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
