"""Undirected multigraphs whose edges are code symbols and whose vertices are parity checks."""

from __future__ import annotations

import math
import random
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf2 import BitMatrix

INFINITE = math.inf


class RetriesExhausted(RuntimeError):
    def __init__(self, message: str, best_girth: float):
        super().__init__(message)
        self.best_girth = best_girth


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]] = ()):
        norm = tuple((int(u), int(v)) for u, v in edges)
        for u, v in norm:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        object.__setattr__(self, "vertex_count", int(vertex_count))
        object.__setattr__(self, "edges", norm)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the (neighbour, edge id) pairs in edge-id order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        return tuple(tuple(a) for a in adj)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def is_regular(self, d: int | None = None) -> bool:
        degs = set(self.degrees())
        if d is None:
            return len(degs) <= 1
        return degs <= {d} and (self.vertex_count == 0 or degs == {d})

    def bipartition(self) -> tuple[int, ...] | None:
        """A 0/1 side label per vertex, or None if an odd cycle exists."""
        side = [-1] * self.vertex_count
        for root in range(self.vertex_count):
            if side[root] >= 0:
                continue
            side[root] = 0
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y, _ in self.adjacency[x]:
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        queue.append(y)
                    elif side[y] == side[x]:
                        return None
        return tuple(side)

    def without_edges(self, removed: Iterable[int]) -> tuple["Multigraph", list[int]]:
        """Graph with some edges dropped, plus the old id of each surviving edge."""
        drop = set(removed)
        keep = [e for e in range(self.edge_count) if e not in drop]
        return Multigraph(self.vertex_count, [self.edges[e] for e in keep]), keep


@dataclass(frozen=True)
class GirthResult:
    girth: float  # an int, or INFINITE for forests
    witness_cycle: tuple[int, ...] = field(default=())

    @property
    def is_infinite(self) -> bool:
        return self.girth == INFINITE


def incidence_matrix(graph: Multigraph) -> BitMatrix:
    dense = np.zeros((graph.vertex_count, graph.edge_count), dtype=np.uint8)
    if graph.edge_count:
        cols = np.arange(graph.edge_count)
        ends = np.asarray(graph.edges)
        dense[ends[:, 0], cols] = 1
        dense[ends[:, 1], cols] = 1
    return BitMatrix.from_dense(dense)


def _shortest_path_avoiding(
    adj: Sequence[Sequence[tuple[int, int]]], u: int, v: int, skip: int, limit: float
) -> list[int] | None:
    """Edge ids of a shortest u-v path not using edge ``skip``, if its length is <= limit.

    Bidirectional BFS: grow whichever side has the smaller frontier one full
    level at a time. The first level at which the two searches meet fixes the
    distance, and the meeting vertex closest to the far side realises it.
    """
    parent = ({u: (-1, -1)}, {v: (-1, -1)})
    dist = ({u: 0}, {v: 0})
    frontier = ([u], [v])
    depth = [0, 0]
    while frontier[0] and frontier[1] and depth[0] + depth[1] < limit:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        par, dst, other = parent[side], dist[side], dist[1 - side]
        nxt: list[int] = []
        meet: int | None = None
        meet_len = math.inf
        d = depth[side] + 1
        for x in frontier[side]:
            for y, e in adj[x]:
                if e == skip or y in par:
                    continue
                par[y] = (x, e)
                dst[y] = d
                nxt.append(y)
                if y in other and d + other[y] < meet_len:
                    meet, meet_len = y, d + other[y]
        depth[side] = d
        frontier = (nxt, frontier[1]) if side == 0 else (frontier[0], nxt)
        if meet is not None:
            if meet_len > limit:
                return None
            path: list[int] = []
            for s in (0, 1):
                x = meet
                while parent[s][x][1] >= 0:
                    x, e = parent[s][x]
                    path.append(e)
            return path
    return None


def girth(graph: Multigraph) -> GirthResult:
    """Shortest cycle length, by a per-edge search for the shortest detour.

    For every edge (u, v) the shortest u-v path avoiding that edge closes a
    cycle of length one more. Searches are capped below the best cycle found
    so far, so only strictly shorter cycles are ever explored.
    """
    adj = graph.adjacency
    best = INFINITE
    witness: tuple[int, ...] = ()
    for e, (u, v) in enumerate(graph.edges):
        limit = best - 2 if best != INFINITE else graph.vertex_count
        if limit < 1:
            break
        path = _shortest_path_avoiding(adj, u, v, e, limit)
        if path is not None:
            best = len(path) + 1
            witness = _order_cycle(graph, [e, *path])
    return GirthResult(best, witness)


def _order_cycle(graph: Multigraph, cycle_edges: list[int]) -> tuple[int, ...]:
    # walk the cycle starting from its smallest edge id so witnesses are canonical
    remaining = set(cycle_edges)
    start = min(remaining)
    u, v = graph.edges[start]
    order = [start]
    remaining.discard(start)
    current = v
    while remaining:
        nxt = next(e for e in sorted(remaining) if current in graph.edges[e])
        order.append(nxt)
        remaining.discard(nxt)
        a, b = graph.edges[nxt]
        current = b if a == current else a
    if current != u:
        raise AssertionError("witness edges do not close a cycle")
    return tuple(order)


def connected_components(graph: Multigraph) -> tuple[int, tuple[int, ...]]:
    label = [-1] * graph.vertex_count
    count = 0
    for root in range(graph.vertex_count):
        if label[root] >= 0:
            continue
        label[root] = count
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, _ in graph.adjacency[x]:
                if label[y] < 0:
                    label[y] = count
                    queue.append(y)
        count += 1
    return count, tuple(label)


def bipartite_double_cover(graph: Multigraph) -> Multigraph:
    """Vertex x becomes x and x + N; edge (u, v) becomes (u, v+N) then (u+N, v)."""
    n = graph.vertex_count
    edges = []
    for u, v in graph.edges:
        edges.append((u, v + n))
        edges.append((u + n, v))
    return Multigraph(2 * n, edges)


def gen_complete(k: int) -> Multigraph:
    if k < 2:
        raise ValueError("complete graph needs at least 2 vertices")
    return Multigraph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def gen_complete_bipartite(a: int, b: int) -> Multigraph:
    if a < 1 or b < 1:
        raise ValueError("both sides of a complete bipartite graph must be nonempty")
    return Multigraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gen_hoffman_singleton() -> Multigraph:
    # pentagons P_h are vertices 5h+j, pentagrams Q_i are 25+5i+j
    def p(h: int, j: int) -> int:
        return 5 * h + j

    def q(i: int, j: int) -> int:
        return 25 + 5 * i + j

    edges = []
    for h in range(5):
        edges += [(p(h, j), p(h, (j + 1) % 5)) for j in range(5)]
    for i in range(5):
        edges += [(q(i, j), q(i, (j + 2) % 5)) for j in range(5)]
    for h, i, j in product(range(5), repeat=3):
        edges.append((p(h, j), q(i, (h * i + j) % 5)))
    return Multigraph(50, edges)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def gen_projective_plane_incidence(q: int) -> Multigraph:
    """Point-line incidence graph of PG(2, q): points 0..N-1, lines N..2N-1."""
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime; only prime-order planes are generated")
    # canonical representatives: first nonzero coordinate equal to 1
    reps = [v for v in product(range(q), repeat=3) if any(v) and next(x for x in v if x) == 1]
    n = len(reps)
    edges = [
        (i, n + j)
        for i, pt in enumerate(reps)
        for j, ln in enumerate(reps)
        if (pt[0] * ln[0] + pt[1] * ln[1] + pt[2] * ln[2]) % q == 0
    ]
    return Multigraph(2 * n, edges)


def _ball(adj: list[list[int]], root: int, radius: int) -> set[int]:
    seen = {root}
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return seen


def gen_random_regular_bipartite(
    d: int, side: int, girth_min: int, seed: int = 0, max_retries: int = 2000
) -> Multigraph:
    """Seeded d-regular bipartite graph on side + side vertices with girth >= girth_min.

    Each attempt lays down d perfect matchings one edge at a time. A left
    vertex takes a random free right vertex lying outside its current
    (girth_min - 2)-ball, so no short cycle is closed; when no such vertex
    is free the attempt falls back to any free non-neighbour and is checked
    by the girth search afterwards. Left vertices are 0..side-1.
    """
    if d < 1 or side < d:
        raise ValueError("need 1 <= d <= side")
    rng = random.Random(seed)
    best = -math.inf
    radius = max(girth_min - 2, 1)
    for _ in range(max_retries):
        adj: list[list[int]] = [[] for _ in range(2 * side)]
        edges: list[tuple[int, int]] = []
        for _k in range(d):
            free = set(range(side, 2 * side))
            order = list(range(side))
            rng.shuffle(order)
            for u in order:
                near = _ball(adj, u, radius)
                pool = sorted(free - near)
                if not pool:
                    pool = sorted(free - set(adj[u])) or sorted(free)
                v = rng.choice(pool)
                free.discard(v)
                adj[u].append(v)
                adj[v].append(u)
                edges.append((u, v))
        graph = Multigraph(2 * side, edges)
        g = girth(graph).girth
        if g >= girth_min:
            return graph
        best = max(best, g)
    raise RetriesExhausted(
        f"no {d}-regular bipartite graph with girth >= {girth_min} on {side}+{side} "
        f"vertices after {max_retries} attempts (best girth {best})",
        best,
    )


def to_edge_list(graph: Multigraph) -> str:
    lines = [f"{graph.vertex_count} {graph.edge_count}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Multigraph:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("edge list must start with 'N M'")
    n, m = int(lines[0][0]), int(lines[0][1])
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edges, found {len(lines) - 1}")
    return Multigraph(n, [(int(a), int(b)) for a, b in lines[1:]])


def read_edge_list(path: str | Path) -> Multigraph:
    return from_edge_list(Path(path).read_text())


def write_edge_list(graph: Multigraph, path: str | Path) -> None:
    Path(path).write_text(to_edge_list(graph))


def _layer_text(layer: int) -> str:
    return "inf" if layer < 0 else str(layer)


def to_dot(
    graph: Multigraph,
    layers: Sequence[int] | None = None,
    colors: Mapping[int, int] | None = None,
) -> str:
    """DOT text; a negative layer label marks the apex and is written as "inf"."""
    out = ["graph G {"]
    for x in range(graph.vertex_count):
        attr = f' [layer="{_layer_text(layers[x])}"]' if layers is not None else ""
        out.append(f"  {x}{attr};")
    for e, (u, v) in enumerate(graph.edges):
        attr = f"id={e}"
        if colors is not None and e in colors:
            attr += f", color={colors[e]}"
        out.append(f"  {u} -- {v} [{attr}];")
    out.append("}")
    return "\n".join(out) + "\n"


_DOT_NODE = re.compile(r'^\s*(\d+)(?:\s*\[layer="(inf|\d+)"\])?;$')
_DOT_EDGE = re.compile(r"^\s*(\d+) -- (\d+) \[id=(\d+)(?:, color=(\d+))?\];$")


def from_dot(text: str) -> tuple[Multigraph, list[int] | None, dict[int, int] | None]:
    """Parse DOT written by :func:`to_dot` back into (graph, layers, colors)."""
    nodes: dict[int, int | None] = {}
    edges: dict[int, tuple[int, int]] = {}
    colors: dict[int, int] = {}
    for line in text.splitlines():
        if m := _DOT_NODE.match(line):
            lay = m.group(2)
            nodes[int(m.group(1))] = None if lay is None else (-1 if lay == "inf" else int(lay))
        elif m := _DOT_EDGE.match(line):
            e = int(m.group(3))
            edges[e] = (int(m.group(1)), int(m.group(2)))
            if m.group(4) is not None:
                colors[e] = int(m.group(4))
    if sorted(nodes) != list(range(len(nodes))) or sorted(edges) != list(range(len(edges))):
        raise ValueError("DOT vertex or edge ids are not contiguous")
    graph = Multigraph(len(nodes), [edges[e] for e in range(len(edges))])
    layer_vals = [nodes[x] for x in range(len(nodes))]
    layers = None if any(x is None for x in layer_vals) else [int(x) for x in layer_vals]  # type: ignore[arg-type]
    return graph, layers, (colors or None)
