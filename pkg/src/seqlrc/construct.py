"""Building rate-optimal sequential-recovery codes from high-girth graphs.

Every code is a graph whose vertices are parity checks and whose edges are
code symbols. Vertex 0 of a finished code is always the apex check, whose row
is the sum of all other rows. Small (r, t) come straight from Moore graphs;
larger t go through a layered base graph that is blown up by an auxiliary
high-girth bipartite graph until the girth reaches t+1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import bounds
from .coloring import (
    EdgeColoring,
    MatchingSet,
    color_base_graph_even,
    color_base_graph_odd,
    decompose_matchings,
)
from .gf2 import BitMatrix, rank_of_supports
from .graph import (
    GirthResult,
    Multigraph,
    RetriesExhausted,
    connected_components,
    gen_complete,
    gen_complete_bipartite,
    gen_hoffman_singleton,
    gen_projective_plane_incidence,
    gen_random_regular_bipartite,
    girth,
    incidence_matrix,
    is_prime,
)

APEX = -1  # layer label of the apex check


class UnsupportedParameters(ValueError):
    pass


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConstructionParams:
    r: int
    t: int
    a0: int | None = None
    seed: int = 0
    aux_override: Multigraph | None = None
    force_expansion: bool = False

    def __post_init__(self) -> None:
        if self.r < 3:
            raise ValueError("locality r must be at least 3")
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if self.a0 is not None:
            if self.a0 < self.r + 1:
                raise ValueError(f"a0 must be at least r+1 = {self.r + 1} for girth t+1")
            if self.t % 2 and self.a0 % (self.r + 1):
                raise ValueError(f"for odd t, a0 must be a multiple of r+1 = {self.r + 1}")

    @property
    def s(self) -> int:
        return (self.t - 1) // 2

    def pipeline_a0(self) -> int:
        if self.a0 is not None:
            return self.a0
        return self.r + 1 if self.t % 2 else 4


def closed_form_dimension(apex_degree: int, r: int, t: int) -> int:
    """Dimension of a layered code whose apex has the given degree."""
    s = (t - 1) // 2
    if t % 2 == 0:
        value = Fraction(apex_degree * r ** (s + 1), 2)
    else:
        value = apex_degree * r**s - Fraction(apex_degree * r**s, r + 1)
    if value.denominator != 1:
        raise CertificationError(f"apex degree {apex_degree} gives a fractional dimension {value}")
    return int(value)


def layers_from_apex(graph: Multigraph, apex: int = 0) -> tuple[int, ...]:
    """BFS depth below the apex minus one; the apex itself is labelled APEX."""
    depth = [-2] * graph.vertex_count
    depth[apex] = APEX
    queue = deque([apex])
    while queue:
        x = queue.popleft()
        for y, _ in graph.adjacency[x]:
            if depth[y] == -2:
                depth[y] = depth[x] + 1
                queue.append(y)
    if -2 in depth:
        raise CertificationError("graph is not connected to the apex")
    return tuple(depth)


def edge_sets_from_layers(graph: Multigraph, layers: Sequence[int]) -> tuple[int, ...]:
    """Index j of the edge class E_j: edges going down into layer i are E_i, edges inside layer i are E_{i+1}."""
    out = []
    for u, v in graph.edges:
        lu, lv = layers[u], layers[v]
        out.append(max(lu, lv) + (1 if lu == lv else 0))
    return tuple(out)


@dataclass(frozen=True)
class LayeredCode:
    graph: Multigraph
    layers: tuple[int, ...]
    r: int
    t: int
    a0: int
    rank: int
    girth: GirthResult
    replicas: int = 1
    route: str = ""
    seed: int | None = None
    aux: Multigraph | None = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.graph.edge_count

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def apex_degree(self) -> int:
        return len(self.graph.adjacency[0])

    @property
    def optimal(self) -> bool:
        return self.rate == bounds.rate_bound(self.r, self.t)

    @cached_property
    def edge_sets(self) -> tuple[int, ...]:
        return edge_sets_from_layers(self.graph, self.layers)

    @cached_property
    def parity_check(self) -> BitMatrix:
        """Incidence matrix including the apex row."""
        return incidence_matrix(self.graph)

    @cached_property
    def staircase_matrix(self) -> BitMatrix:
        """Parity checks without the apex row, which is redundant."""
        return self.parity_check.delete_rows([0])

    def layer_sizes(self) -> list[int]:
        top = max(self.layers)
        return [sum(1 for x in self.layers if x == i) for i in range(top + 1)]

    def certificate(self) -> dict:
        rate = self.rate
        g = self.girth.girth
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "t": self.t,
            "a0": self.a0,
            "girth": None if math.isinf(g) else int(g),
            "rank": self.rank,
            "rate_num": rate.numerator,
            "rate_den": rate.denominator,
            "optimal": self.optimal,
            "seed": self.seed,
            "route": self.route,
            "replicas": self.replicas,
            "apex_degree": self.apex_degree,
        }


def _certify(
    graph: Multigraph,
    r: int,
    t: int,
    a0: int,
    replicas: int,
    route: str,
    seed: int | None,
    check_closed_form: bool = True,
    aux: Multigraph | None = None,
) -> LayeredCode:
    layers = layers_from_apex(graph, 0)
    degs = graph.degrees()
    if any(d != r + 1 for d in degs[1:]):
        raise CertificationError(f"some non-apex check does not have degree r+1 = {r + 1}")
    g = girth(graph)
    if g.girth < t + 1:
        raise CertificationError(f"girth {g.girth} is below t+1 = {t + 1}")
    rk = rank_of_supports(graph.edges)
    code = LayeredCode(graph, layers, r, t, a0, rk, g, replicas, route, seed, aux)
    if check_closed_form:
        expected = closed_form_dimension(code.apex_degree, r, t)
        if code.k != expected:
            raise CertificationError(f"rank gives k = {code.k}, layered structure predicts {expected}")
    return code


def construct_from_regular_graph(graph: Multigraph, r: int, t: int) -> LayeredCode:
    """Code whose parity checks are the vertices of a connected (r+1)-regular graph."""
    if not graph.is_regular(r + 1):
        raise CertificationError(f"graph is not {r + 1}-regular")
    if connected_components(graph)[0] != 1:
        raise CertificationError("graph is not connected")
    moore = graph.vertex_count == bounds.moore_bound(r, t)
    return _certify(graph, r, t, r + 1, 1, "regular-graph", None, check_closed_form=moore)


def build_t4_base_from_moore(r: int) -> Multigraph:
    """Girth-6 Moore graph of degree r+1 with the ends of edge 0 merged into vertex 0."""
    if not is_prime(r):
        raise UnsupportedParameters(f"no girth-6 Moore graph generator for r={r} (needs prime r)")
    moore = gen_projective_plane_incidence(r)
    u, v = moore.edges[0]
    others = [x for x in range(moore.vertex_count) if x not in (u, v)]
    index = {x: i + 1 for i, x in enumerate(others)}
    index[u] = index[v] = 0
    return Multigraph(moore.vertex_count - 1, [(index[a], index[b]) for a, b in moore.edges[1:]])


def build_base_graph(params: ConstructionParams) -> tuple[Multigraph, tuple[int, ...]]:
    graph, _, layers = _colored_base(params)
    return graph, layers


def _odd_base(r: int, t: int, a0: int) -> tuple[Multigraph, tuple[int, ...]]:
    s = (t - 1) // 2
    layers = [0] * a0
    edges: list[tuple[int, int]] = []
    frontier = list(range(a0))
    for depth in range(1, s):
        nxt = []
        for x in frontier:
            for _ in range(r):
                child = len(layers)
                layers.append(depth)
                edges.append((x, child))
                nxt.append(child)
        frontier = nxt
    bottom = a0 * r**s // (r + 1)
    first = len(layers)
    layers += [s] * bottom
    # stub i of the layer above lands on bottom vertex i mod |bottom|
    stub = 0
    for x in frontier:
        for _ in range(r):
            edges.append((x, first + stub % bottom))
            stub += 1
    return Multigraph(len(layers), edges), tuple(layers)


def _colored_base(params: ConstructionParams) -> tuple[Multigraph, EdgeColoring, tuple[int, ...]]:
    r, t = params.r, params.t
    if t < 5:
        raise UnsupportedParameters("base graphs are built for t >= 5; smaller t uses Moore graphs")
    a0 = params.pipeline_a0()
    if t % 2:
        graph, layers = _odd_base(r, t, a0)
        return graph, color_base_graph_odd(graph, layers, r), layers
    if a0 != 4:
        raise UnsupportedParameters("even t >= 6 is built with exactly four roots (a0 = 4)")
    return color_base_graph_even(r, t)


def expand(
    base: Multigraph, coloring: EdgeColoring, aux: Multigraph, matchings: MatchingSet
) -> Multigraph:
    """Replace each base vertex by |V(aux)| replicas and each colour-i edge by a lift along matching i.

    Replica l of base vertex a is vertex a * |V(aux)| + l. A base edge (a, b)
    of colour i and a matching edge (l1, l2) give replica edges (a_l1, b_l2)
    and (a_l2, b_l1), so every replica keeps its base degree.
    """
    if coloring.colors != len(matchings):
        raise ValueError(f"{coloring.colors} colours but {len(matchings)} matchings")
    size = aux.vertex_count
    pairs = [sorted(aux.edges[e] for e in m) for m in matchings.matchings]
    edges = []
    for e, (a, b) in enumerate(base.edges):
        for l1, l2 in pairs[coloring.assignment[e] - 1]:
            edges.append((a * size + l1, b * size + l2))
            edges.append((a * size + l2, b * size + l1))
    return Multigraph(base.vertex_count * size, edges)


def finalize(
    graph: Multigraph,
    layers: Sequence[int],
    r: int,
    t: int,
    a0: int,
    replicas: int = 1,
    route: str = "pipeline",
    seed: int | None = None,
    aux: Multigraph | None = None,
) -> LayeredCode:
    """Add the apex over layer 0 (as vertex 0, with its edges first) and certify the result."""
    return _certify(with_apex(graph, layers), r, t, a0, replicas, route, seed, aux=aux)


def with_apex(graph: Multigraph, layers: Sequence[int]) -> Multigraph:
    """Shift vertices up by one and join the new vertex 0 to every layer-0 vertex."""
    roots = [x for x in range(graph.vertex_count) if layers[x] == 0]
    return Multigraph(
        graph.vertex_count + 1, [(0, x + 1) for x in roots] + [(u + 1, v + 1) for u, v in graph.edges]
    )


def default_auxiliary(r: int, t: int, seed: int, attempts_per_size: int = 20, sizes: int = 30) -> Multigraph:
    """Seeded (r+1)-regular bipartite graph of girth >= t+1, grown from the bipartite Moore size."""
    target = t + 1 + (t + 1) % 2  # bipartite girths are even
    side = bounds.moore_bound(r, target - 1) // 2
    for step in range(sizes):
        try:
            return gen_random_regular_bipartite(
                r + 1, side, target, seed=seed * 1_000_003 + step, max_retries=attempts_per_size
            )
        except RetriesExhausted:
            side = math.ceil(side * 1.25)
    raise CertificationError(f"no auxiliary graph with girth >= {target} found up to side {side}")


def run_pipeline(params: ConstructionParams) -> LayeredCode:
    r, t = params.r, params.t
    base, coloring, layers = _colored_base(params)
    a0 = params.pipeline_a0()
    if not params.force_expansion and params.aux_override is None:
        single = with_apex(base, layers)
        if girth(single).girth >= t + 1:
            return finalize(base, layers, r, t, a0, 1, "single-copy", params.seed)
    aux = params.aux_override or default_auxiliary(r, t, params.seed)
    if not aux.is_regular(r + 1) or aux.bipartition() is None:
        raise CertificationError(f"auxiliary graph must be {r + 1}-regular and bipartite")
    if girth(aux).girth < t + 1:
        raise CertificationError(f"auxiliary graph girth is below t+1 = {t + 1}")
    matchings = decompose_matchings(aux)
    lifted = expand(base, coloring, aux, matchings)
    lifted_layers = [layers[x // aux.vertex_count] for x in range(lifted.vertex_count)]
    return finalize(lifted, lifted_layers, r, t, a0, aux.vertex_count, "expanded", params.seed, aux)


def construct(params: ConstructionParams) -> LayeredCode:
    """Pick the construction route for (r, t) and return a certified code."""
    r, t, a0 = params.r, params.t, params.a0
    direct_a0 = a0 in (None, r + 1)
    if t == 2 and direct_a0:
        return _moore(gen_complete(r + 2), r, t, "complete")
    if t == 3 and direct_a0:
        return _moore(gen_complete_bipartite(r + 1, r + 1), r, t, "complete-bipartite")
    if t == 4:
        if r == 6 and direct_a0:
            return _moore(gen_hoffman_singleton(), r, t, "hoffman-singleton")
        if a0 not in (None, 2 * r):
            raise UnsupportedParameters(f"t=4 supports a0 = {2 * r} (merged Moore graph) for r={r}")
        if not is_prime(r):
            raise UnsupportedParameters(
                f"t=4 needs r=6 (Hoffman-Singleton) or prime r (projective plane), got r={r}"
            )
        merged = build_t4_base_from_moore(r)
        return _certify(merged, r, t, 2 * r, 1, "merged-moore", None)
    if t < 4:
        raise UnsupportedParameters(f"t={t} is built only with a0 = r+1 = {r + 1}")
    if t == 5 and is_prime(r) and direct_a0 and not params.force_expansion and params.aux_override is None:
        return _moore(gen_projective_plane_incidence(r), r, t, "projective-plane")
    return run_pipeline(params)


def _moore(graph: Multigraph, r: int, t: int, route: str) -> LayeredCode:
    code = construct_from_regular_graph(graph, r, t)
    return LayeredCode(
        code.graph, code.layers, r, t, r + 1, code.rank, code.girth, 1, route, None
    )
