"""Mutual-visibility and general-position checks.

A pair u, v is M-visible when some shortest u,v-path has no internal vertex in
M. Visibility is decided by reachability in the shortest-path DAG with the
blocked vertices removed, never by enumerating paths.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph_core import DistanceMatrix, Graph, from_mask, interval, vertex_set
from .sierpinski import SierpinskiTriangle, subtriangle_extremes, subtriangle_vertices


class Variant(enum.Enum):
    MUTUAL = "mutual"
    TOTAL = "total"
    OUTER = "outer"
    DUAL = "dual"
    GENERAL_POSITION = "gp"

    @classmethod
    def parse(cls, text: str | Variant) -> Variant:
        if isinstance(text, Variant):
            return text
        key = text.strip().lower().replace("-", "_")
        aliases = {"general_position": "gp", "mv": "mutual", "m": "mutual"}
        key = aliases.get(key, key)
        for v in cls:
            if v.value == key or v.name.lower() == key:
                return v
        raise ValueError(f"unknown variant {text!r}")

    def requires(self, u_in: bool, v_in: bool) -> bool:
        """Whether a pair with these memberships must be M-visible."""
        if self is Variant.TOTAL:
            return True
        if self is Variant.OUTER:
            return u_in or v_in
        if self is Variant.DUAL:
            return u_in == v_in
        return u_in and v_in

    @property
    def anti_monotone(self) -> bool:
        """True when every subset of a valid set is valid."""
        return self is not Variant.DUAL


class ViolationKind(enum.Enum):
    PAIR_NOT_VISIBLE = "PAIR_NOT_VISIBLE"
    COLLINEAR_TRIPLE = "COLLINEAR_TRIPLE"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    vertices: tuple[int, ...]  # (u, v) or (u, w, v) with w between u and v

    def __str__(self) -> str:
        return "VIOLATION " + " ".join([self.kind.value, *map(str, self.vertices)])


def pair_visible(g: Graph, dist: DistanceMatrix, M: Iterable[int], u: int, v: int) -> bool:
    if u == v:
        raise ValueError("pair_visible needs two distinct vertices")
    blocked = set(M)
    blocked.discard(u)
    blocked.discard(v)
    return _reachable(g, dist, blocked, u, v)


def _reachable(g: Graph, dist: DistanceMatrix, blocked, u: int, v: int) -> bool:
    du, dv = dist.rows[u], dist.rows[v]
    d = du[v]
    if d <= 1:
        return True
    adj = g.adjacency
    frontier = {u}
    for step in range(1, d):
        rest = d - step
        nxt = set()
        for x in frontier:
            for y in adj[x]:
                if du[y] == step and dv[y] == rest and y not in blocked:
                    nxt.add(y)
        if not nxt:
            return False
        frontier = nxt
    return True


def _first_collinear(dist: DistanceMatrix, members: list[int]) -> Violation | None:
    k = len(members)
    if k < 3:
        return None
    S = dist.array[np.ix_(members, members)].astype(np.int64)
    idx = np.arange(k)
    for a in range(k - 1):
        # between[b, c]: members[c] lies on a shortest members[a], members[b]-path
        between = (S[a][None, :] + S) == S[a][:, None]
        between[:, a] = False
        between[idx, idx] = False
        between[: a + 1] = False
        hits = np.argwhere(between)
        if len(hits):
            b, c = hits[0]
            return Violation(ViolationKind.COLLINEAR_TRIPLE, (members[a], members[c], members[b]))
    return None


def _at_risk(dist: DistanceMatrix, rows: np.ndarray, cols: np.ndarray, blockers: list[int]) -> np.ndarray:
    """at_risk[i, j]: some blocker other than rows[i], cols[j] lies in I(rows[i], cols[j])."""
    D = dist.array
    sub = D[np.ix_(rows, cols)]
    risk = np.zeros(sub.shape, dtype=bool)
    for w in blockers:
        hit = (D[rows, w][:, None] + D[w, cols][None, :]) == sub
        hit[rows == w, :] = False
        hit[:, cols == w] = False
        risk |= hit
    return risk


def validate_set(g: Graph, dist: DistanceMatrix, M: Iterable[int], variant: Variant | str) -> Violation | None:
    """Return the lexicographically first violation, or None if ``M`` is valid."""
    variant = Variant.parse(variant)
    members = list(vertex_set(M, g))
    if variant is Variant.GENERAL_POSITION:
        return _first_collinear(dist, members)
    n = g.vertex_count
    in_m = np.zeros(n, dtype=bool)
    in_m[members] = True
    if variant is Variant.MUTUAL:
        verts = np.array(members, dtype=np.int64)
    else:
        verts = np.arange(n)
    if len(verts) < 2 or not members:
        return None
    risk = _at_risk(dist, verts, verts, members)
    mi = in_m[verts]
    required = {
        Variant.MUTUAL: np.ones((len(verts), len(verts)), dtype=bool),
        Variant.TOTAL: np.ones((len(verts), len(verts)), dtype=bool),
        Variant.OUTER: mi[:, None] | mi[None, :],
        Variant.DUAL: mi[:, None] == mi[None, :],
    }[variant]
    candidates = np.argwhere(np.triu(risk & required, 1))
    blocked = set(members)
    for i, j in candidates:
        u, v = int(verts[i]), int(verts[j])
        blocked_uv = blocked - {u, v}
        if not _reachable(g, dist, blocked_uv, u, v):
            return Violation(ViolationKind.PAIR_NOT_VISIBLE, (u, v))
    return None


def is_valid(g: Graph, dist: DistanceMatrix, M: Iterable[int], variant: Variant | str) -> bool:
    return validate_set(g, dist, M, variant) is None


def is_h2_proper(st: SierpinskiTriangle, M: Iterable[int], addr) -> bool:
    g, dist = st.graph, st.dist
    M = set(M)
    corners = subtriangle_extremes(st, addr)
    for i in range(3):
        for j in range(i + 1, 3):
            if interval(g, dist, corners[i], corners[j]) & M:
                return False
    for u in sorted(subtriangle_vertices(st, addr) & M):
        for p in corners:
            if u != p and not pair_visible(g, dist, M, u, p):
                return False
    return True


def is_h2_outer_proper(st: SierpinskiTriangle, M: Iterable[int], addr) -> bool:
    g, dist = st.graph, st.dist
    M = set(M)
    corners = subtriangle_extremes(st, addr)
    for u in sorted(subtriangle_vertices(st, addr)):
        for p in corners:
            if u != p and not pair_visible(g, dist, M, u, p):
                return False
    return True


class VisibilityOracle:
    """Bitset-based pair visibility for repeated queries on one small graph.

    For every pair u < v the shortest-path DAG is stored as a list of layer
    masks (vertices at distance 1, 2, ... from u inside I(u, v)). A query
    walks the layers, intersecting the neighbourhood of the current frontier
    with the next layer minus the blocked vertices.
    """

    def __init__(self, g: Graph, dist: DistanceMatrix):
        self.g = g
        self.dist = dist
        n = g.vertex_count
        self.n = n
        self.nbr = [g.neighbor_mask(v) for v in range(n)]
        rows = dist.rows
        self.interior: dict[tuple[int, int], int] = {}
        self.layers: dict[tuple[int, int], tuple[int, ...]] = {}
        # pairs whose interior contains w, used for incremental re-checks
        self.through: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        # shadow[x][w]: mask of y such that w is strictly between x and y
        self.shadow: list[list[int]] = [[0] * n for _ in range(n)]
        for u in range(n):
            du = rows[u]
            for v in range(u + 1, n):
                dv = rows[v]
                d = du[v]
                layer = [0] * (d + 1)
                for w in range(n):
                    if du[w] + dv[w] == d:
                        layer[du[w]] |= 1 << w
                inner = 0
                for m in layer[1:d]:
                    inner |= m
                self.interior[u, v] = inner
                self.layers[u, v] = tuple(layer[1:d])
                for w in from_mask(inner):
                    self.through[w].append((u, v))
                    self.shadow[u][w] |= 1 << v
                    self.shadow[v][w] |= 1 << u

    def visible(self, u: int, v: int, blocked: int) -> bool:
        if u > v:
            u, v = v, u
        if not self.interior[u, v] & blocked:
            return True
        nbr = self.nbr
        frontier = 1 << u
        free = ~blocked
        for layer in self.layers[u, v]:
            reach = 0
            f = frontier
            while f:
                low = f & -f
                reach |= nbr[low.bit_length() - 1]
                f ^= low
            frontier = reach & layer & free
            if not frontier:
                return False
        return True

    def between_mask(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.interior.get((u, v), 0)
