"""Perfect matchings, matching decompositions and proper edge colourings of base graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .graph import Multigraph, bipartite_double_cover


class NoPerfectMatching(ValueError):
    pass


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeColoring:
    colors: int
    assignment: tuple[int, ...]  # colour of edge e, in 1..colors

    def is_proper(self, graph: Multigraph) -> bool:
        if len(self.assignment) != graph.edge_count:
            return False
        if any(not 1 <= c <= self.colors for c in self.assignment):
            return False
        for incident in graph.adjacency:
            seen = [self.assignment[e] for _, e in incident]
            if len(seen) != len(set(seen)):
                return False
        return True

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.colors)]
        for e, c in enumerate(self.assignment):
            out[c - 1].append(e)
        return out

    def to_text(self) -> str:
        return "".join(f"{e} {c}\n" for e, c in enumerate(self.assignment))

    @classmethod
    def from_text(cls, text: str, colors: int | None = None) -> "EdgeColoring":
        pairs = sorted(tuple(int(x) for x in ln.split()) for ln in text.splitlines() if ln.strip())
        if [e for e, _ in pairs] != list(range(len(pairs))):
            raise ValueError("colouring must list every edge id exactly once")
        assignment = tuple(c for _, c in pairs)
        return cls(colors if colors is not None else max(assignment, default=0), assignment)


def write_coloring(coloring: EdgeColoring, path: str | Path) -> None:
    Path(path).write_text(coloring.to_text())


@dataclass(frozen=True)
class MatchingSet:
    matchings: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.matchings)

    def as_coloring(self, edge_count: int) -> EdgeColoring:
        assignment = [0] * edge_count
        for i, m in enumerate(self.matchings, start=1):
            for e in m:
                assignment[e] = i
        return EdgeColoring(len(self.matchings), tuple(assignment))


def perfect_matching(graph: Multigraph) -> frozenset[int]:
    """Edge ids of a perfect matching of a bipartite graph (Hopcroft-Karp)."""
    side = graph.bipartition()
    if side is None:
        raise NoPerfectMatching("graph is not bipartite")
    left = [x for x in range(graph.vertex_count) if side[x] == 0]
    if 2 * len(left) != graph.vertex_count:
        raise NoPerfectMatching("the two sides have different sizes")
    adj = graph.adjacency
    match_edge = [-1] * graph.vertex_count  # matched edge id per vertex

    def mate(x: int) -> int:
        e = match_edge[x]
        if e < 0:
            return -1
        a, b = graph.edges[e]
        return b if a == x else a

    unset = float("inf")
    while True:
        # BFS layering from free left vertices over alternating paths
        dist = {x: 0 for x in left if match_edge[x] < 0}
        queue = deque(dist)
        found = False
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                z = mate(y)
                if z < 0:
                    found = True
                elif z not in dist:
                    dist[z] = dist[x] + 1
                    queue.append(z)
        if not found:
            break
        # iterative DFS along the layering
        progressed = False
        for root in [x for x in left if match_edge[x] < 0]:
            stack = [(root, iter(adj[root]))]
            path: list[int] = []
            while stack:
                x, it = stack[-1]
                advanced = False
                for y, e in it:
                    z = mate(y)
                    if z < 0:
                        path.append(e)
                        for pe in path:
                            a, b = graph.edges[pe]
                            match_edge[a] = pe
                            match_edge[b] = pe
                        stack.clear()
                        progressed = True
                        break
                    if dist.get(z, unset) == dist[x] + 1:
                        path.append(e)
                        stack.append((z, iter(adj[z])))
                        advanced = True
                        break
                else:
                    dist[x] = unset  # dead end
                    stack.pop()
                    if path:
                        path.pop()
                    continue
                if not advanced:
                    break
        if not progressed:
            break
    if any(e < 0 for e in match_edge):
        missing = sum(1 for e in match_edge if e < 0)
        raise NoPerfectMatching(f"maximum matching leaves {missing} vertices uncovered")
    return frozenset(match_edge)


def decompose_matchings(graph: Multigraph) -> MatchingSet:
    """Split a d-regular bipartite graph into d disjoint perfect matchings."""
    degs = set(graph.degrees())
    if len(degs) > 1:
        raise NoPerfectMatching(f"graph is not regular (degrees {sorted(degs)})")
    d = degs.pop() if degs else 0
    remaining = list(range(graph.edge_count))
    out = []
    for _ in range(d):
        sub = Multigraph(graph.vertex_count, [graph.edges[e] for e in remaining])
        local = perfect_matching(sub)
        chosen = frozenset(remaining[e] for e in local)
        out.append(chosen)
        remaining = [e for e in remaining if e not in chosen]
    return MatchingSet(tuple(out))


def color_base_graph_odd(base: Multigraph, layers: Sequence[int], r: int) -> EdgeColoring:
    """Proper (r+1)-colouring of a layered base graph for odd t.

    Adding the apex over layer 0 gives a graph that is bipartite under layer
    parity (apex plus odd layers against even layers) and (r+1)-regular, so
    its perfect matchings colour it; the apex edges are then dropped.
    """
    roots = [x for x in range(base.vertex_count) if layers[x] == 0]
    apex = base.vertex_count
    full = Multigraph(base.vertex_count + 1, list(base.edges) + [(apex, x) for x in roots])
    parity = [(layers[x] + 1) % 2 for x in range(base.vertex_count)] + [0]
    for e, (u, v) in enumerate(full.edges):
        if parity[u] == parity[v]:
            raise StructureError(f"edge {e} joins two vertices of the same layer parity")
    if not full.is_regular(r + 1):
        raise StructureError(f"graph with apex is not {r + 1}-regular")
    matchings = decompose_matchings(full)
    coloring = matchings.as_coloring(full.edge_count)
    return EdgeColoring(r + 1, coloring.assignment[: base.edge_count])


def tree_class_sizes(r: int, depth: int) -> tuple[int, int]:
    """Per tree, the leaves at ``depth`` whose parent edge has a given colour j <= r (x)
    and those whose parent edge has colour r+1 (y)."""
    if depth % 2:
        x = (r**depth + 1) // (r + 1)
        y = x - 1
    else:
        x = (r**depth - 1) // (r + 1)
        y = x + 1
    if x * r + y != r**depth:
        raise StructureError(f"class sizes x={x}, y={y} do not split {r}^{depth} leaves")
    return x, y


def circulant_regular(order: int, degree: int) -> Multigraph:
    """Simple degree-regular circulant: i ~ i +- 1..floor(degree/2), plus antipodes if degree is odd."""
    half = degree // 2
    if order < degree + 1 or (degree % 2 and order % 2) or half * 2 >= order:
        raise StructureError(f"no {degree}-regular circulant on {order} vertices")
    edges = [(i, (i + k) % order) for k in range(1, half + 1) for i in range(order)]
    if degree % 2:
        edges += [(i, i + order // 2) for i in range(order // 2)]
    return Multigraph(order, edges)


def _colored_regular_bipartite(nodes: list[int], r: int, palette: list[int]) -> list[tuple[int, int, int]]:
    # r-regular bipartite graph on ``nodes`` via a doubled circulant; edges as (u, v, colour)
    half = len(nodes) // 2
    cover = bipartite_double_cover(circulant_regular(half, r))
    matchings = decompose_matchings(cover)
    out = []
    for colour, m in zip(palette, matchings.matchings):
        for e in sorted(m):
            u, v = cover.edges[e]
            out.append((nodes[u], nodes[v], colour))
    return out


def color_base_graph_even(r: int, t: int) -> tuple[Multigraph, EdgeColoring, tuple[int, ...]]:
    """Coloured base graph for even t >= 6 with four roots.

    Four r-ary trees of depth s = t/2 - 1 are coloured top down: root edges
    take 1..r, and each node hands its children the colours other than its
    own parent-edge colour in ascending order. The leaves are then closed up
    with r-regular bipartite graphs: one per colour j <= r over the leaves
    whose parent edge has colour j, and one over the leaves hanging from a
    colour r+1 edge. No colour r+1 edge touches a root.
    """
    if t % 2 or t < 6:
        raise ValueError("the four-root base graph is defined for even t >= 6")
    if r < 3:
        raise ValueError("r must be at least 3")
    s = t // 2 - 1
    roots = 4
    edges: list[tuple[int, int]] = []
    colour: list[int] = []
    layers = [0] * roots
    parent_colour = [0] * roots  # 0 marks a root
    tree = list(range(roots))
    frontier = list(range(roots))
    for depth in range(1, s + 1):
        nxt = []
        for x in frontier:
            palette = list(range(1, r + 1)) if parent_colour[x] == 0 else [
                c for c in range(1, r + 2) if c != parent_colour[x]
            ]
            for c in palette:
                child = len(layers)
                layers.append(depth)
                parent_colour.append(c)
                tree.append(tree[x])
                edges.append((x, child))
                colour.append(c)
                nxt.append(child)
        frontier = nxt

    x_s, y_s = tree_class_sizes(r, s)
    leaves = frontier
    for j in range(1, r + 2):
        group = [v for v in leaves if parent_colour[v] == j]
        expected = roots * (x_s if j <= r else y_s)
        if len(group) != expected:
            raise StructureError(f"colour-{j} leaf class has {len(group)} nodes, expected {expected}")
        palette = [c for c in range(1, r + 2) if c != j]
        for u, v, c in _colored_regular_bipartite(group, r, palette):
            edges.append((u, v))
            colour.append(c)
    graph = Multigraph(len(layers), edges)
    coloring = EdgeColoring(r + 1, tuple(colour))
    if not coloring.is_proper(graph):
        raise StructureError("constructed base colouring is not proper")
    return graph, coloring, tuple(layers)
