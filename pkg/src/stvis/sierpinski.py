"""Base-3 Sierpinski graphs S^n and Sierpinski triangle graphs ST_3^n.

Vertices of S^n are ternary words of length n, indexed by their base-3 value
(so index order is lexicographic word order). ST_3^n is S^{n+1} with every
non-clique edge contracted; a merged vertex is named by its lexicographically
smaller word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .graph_core import DistanceMatrix, Graph, GraphError, all_pairs_distances, interval

MAX_SIERPINSKI_DEPTH = 12
MAX_TRIANGLE_DEPTH = 9

Word = tuple[int, ...]


class ResourceLimitError(GraphError):
    pass


def word_str(word: Word) -> str:
    return "".join(map(str, word))


def parse_word(text: str) -> Word:
    if any(c not in "012" for c in text):
        raise GraphError(f"not a ternary word: {text!r}")
    return tuple(int(c) for c in text)


def _word_index(word: Word) -> int:
    idx = 0
    for d in word:
        idx = 3 * idx + d
    return idx


def _index_word(idx: int, n: int) -> Word:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, 3)
    return tuple(out)


def sierpinski_edges(n: int) -> list[tuple[int, int]]:
    """Edges of S^n as index pairs (u < v), built from the recursive definition."""
    edges: list[tuple[int, int]] = []
    for level in range(1, n + 1):
        # connecting edges {s i j^k, s j i^k} with k = level - 1 and prefix s of length n - level
        k = level - 1
        block = 3 ** level
        for prefix_idx in range(3 ** (n - level)):
            base = prefix_idx * block
            for i, j in ((0, 1), (0, 2), (1, 2)):
                a = _word_index((i,) + (j,) * k)
                b = _word_index((j,) + (i,) * k)
                edges.append((base + a, base + b))
    edges.sort()
    return edges


def build_sierpinski(n: int, max_depth: int = MAX_SIERPINSKI_DEPTH) -> Graph:
    if n < 0:
        raise GraphError("depth must be nonnegative")
    if n > max_depth:
        raise ResourceLimitError(f"S^{n} exceeds the configured depth limit {max_depth}")
    labels = {i: word_str(_index_word(i, n)) for i in range(3 ** n)}
    return Graph.from_edges(3 ** n, sierpinski_edges(n), labels)


def is_clique_edge(a: Word, b: Word) -> bool:
    """Clique edges of S^m are those inside an innermost triangle."""
    return a[:-1] == b[:-1]


@dataclass(frozen=True, eq=False)
class SierpinskiTriangle:
    graph: Graph
    n: int
    vertex_words: tuple[tuple[Word, ...], ...]
    extremes: tuple[int, int, int]
    word_to_vertex: dict[Word, int]

    @cached_property
    def dist(self) -> DistanceMatrix:
        return all_pairs_distances(self.graph)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def vertex_of(self, word: Word | str) -> int:
        if isinstance(word, str):
            word = parse_word(word)
        return self.word_to_vertex[tuple(word)]

    def word_label(self, v: int) -> str:
        return ",".join(word_str(w) for w in self.vertex_words[v])


def build_sierpinski_triangle(n: int, max_depth: int = MAX_TRIANGLE_DEPTH) -> SierpinskiTriangle:
    if n < 0:
        raise GraphError("depth must be nonnegative")
    if n > max_depth:
        raise ResourceLimitError(f"ST_3^{n} exceeds the configured depth limit {max_depth}")
    m = n + 1
    size = 3 ** m
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    base_edges = sierpinski_edges(m)
    for a, b in base_edges:
        if a // 3 != b // 3:  # endpoints in different innermost triangles
            ra, rb = find(a), find(b)
            # smaller index == lexicographically smaller word
            parent[max(ra, rb)] = min(ra, rb)

    reps = sorted({find(x) for x in range(size)})
    new_index = {r: i for i, r in enumerate(reps)}
    members: list[list[Word]] = [[] for _ in reps]
    word_to_vertex: dict[Word, int] = {}
    for x in range(size):
        v = new_index[find(x)]
        w = _index_word(x, m)
        members[v].append(w)
        word_to_vertex[w] = v
    edges = {tuple(sorted((new_index[find(a)], new_index[find(b)])))
             for a, b in base_edges if a // 3 == b // 3}
    words = tuple(tuple(ws) for ws in members)
    labels = {v: ",".join(word_str(w) for w in ws) for v, ws in enumerate(words)}
    graph = Graph.from_edges(len(reps), sorted(edges), labels)
    extremes = tuple(sorted(word_to_vertex[(i,) * m] for i in range(3)))
    return SierpinskiTriangle(graph, n, words, extremes, word_to_vertex)


def extreme_vertices(st: SierpinskiTriangle) -> tuple[int, int, int]:
    degree_two = tuple(v for v in range(st.vertex_count) if st.graph.degree(v) == 2)
    if degree_two != st.extremes:
        raise AssertionError(f"degree-2 census {degree_two} disagrees with corner words {st.extremes}")
    return st.extremes


def _check_prefix(st: SierpinskiTriangle, prefix: Word, k: int | None = None) -> None:
    if len(prefix) > st.n or any(d not in (0, 1, 2) for d in prefix):
        raise GraphError(f"invalid subtriangle address {word_str(prefix)!r} for ST_3^{st.n}")
    if k is not None and len(prefix) != st.n - k:
        raise GraphError(f"address {word_str(prefix)!r} does not name a copy of ST_3^{k}")


def subtriangle_addresses(st: SierpinskiTriangle, k: int) -> list[Word]:
    if not 0 <= k <= st.n:
        raise GraphError(f"no copies of ST_3^{k} in ST_3^{st.n}")
    return [tuple(p) for p in itertools.product(range(3), repeat=st.n - k)]


def enumerate_h2_copies(st: SierpinskiTriangle) -> list[Word]:
    if st.n < 2:
        raise GraphError("ST_3^2 copies need n >= 2")
    return subtriangle_addresses(st, 2)


def subtriangle_vertices(st: SierpinskiTriangle, addr: Word | str) -> frozenset[int]:
    if isinstance(addr, str):
        addr = parse_word(addr)
    addr = tuple(addr)
    _check_prefix(st, addr)
    tail = st.n + 1 - len(addr)
    return frozenset(st.word_to_vertex[addr + rest]
                     for rest in itertools.product(range(3), repeat=tail))


def subtriangle_extremes(st: SierpinskiTriangle, addr: Word) -> tuple[int, int, int]:
    """Corners of the addressed copy, ordered by corner digit 0, 1, 2."""
    addr = tuple(addr)
    _check_prefix(st, addr)
    tail = st.n + 1 - len(addr)
    return tuple(st.word_to_vertex[addr + (i,) * tail] for i in range(3))


def proper_vertices(st: SierpinskiTriangle, addr: Word | str) -> tuple[int, int, int]:
    """The three vertices of an ST_3^2 copy lying on no shortest corner-to-corner path."""
    if isinstance(addr, str):
        addr = parse_word(addr)
    addr = tuple(addr)
    _check_prefix(st, addr, k=2)
    copy = subtriangle_vertices(st, addr)
    sub, back = st.graph.induced_subgraph(copy)
    local = {old: new for new, old in enumerate(back)}
    q = [local[p] for p in subtriangle_extremes(st, addr)]
    dist = all_pairs_distances(sub)
    sides = (interval(sub, dist, q[0], q[1]) | interval(sub, dist, q[0], q[2])
             | interval(sub, dist, q[1], q[2]))
    result = tuple(sorted(back[v] for v in range(sub.vertex_count) if v not in sides))
    if len(result) != 3:
        raise AssertionError(f"copy {word_str(addr)!r} has {len(result)} proper vertices")
    return result


def h2_proper_vertex_union(st: SierpinskiTriangle) -> list[int]:
    out: set[int] = set()
    for addr in enumerate_h2_copies(st):
        out.update(proper_vertices(st, addr))
    return sorted(out)


def recognize_triangle(g: Graph) -> int | None:
    """Return n if ``g`` is (label-for-label) the generated ST_3^n, else None."""
    count = g.vertex_count
    n = 0
    while (3 ** (n + 1) + 3) // 2 < count:
        n += 1
    if (3 ** (n + 1) + 3) // 2 != count or n > MAX_TRIANGLE_DEPTH:
        return None
    if g.edge_count != 3 ** (n + 1):
        return None
    st = build_sierpinski_triangle(n)
    if st.graph.adjacency != g.adjacency:
        return None
    return n
