import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hypercube
from seqlrc.coloring import (
    EdgeColoring,
    NoPerfectMatching,
    StructureError,
    circulant_regular,
    color_base_graph_even,
    color_base_graph_odd,
    decompose_matchings,
    perfect_matching,
    tree_class_sizes,
    write_coloring,
)
from seqlrc.graph import (
    Multigraph,
    bipartite_double_cover,
    gen_complete_bipartite,
    gen_projective_plane_incidence,
    gen_random_regular_bipartite,
    girth,
)


def assert_is_perfect_matching(graph, matching):
    covered = [x for e in matching for x in graph.edges[e]]
    assert sorted(covered) == list(range(graph.vertex_count))


def assert_decomposes(graph, ms, degree):
    assert len(ms) == degree
    union = sorted(e for m in ms.matchings for e in m)
    assert union == list(range(graph.edge_count))
    for m in ms.matchings:
        assert_is_perfect_matching(graph, m)
    assert ms.as_coloring(graph.edge_count).is_proper(graph)


@pytest.mark.parametrize(
    "graph, degree",
    [
        (gen_complete_bipartite(2, 2), 2),
        (Multigraph(6, [(i, (i + 1) % 6) for i in range(6)]), 2),
        (gen_projective_plane_incidence(2), 3),
        (Multigraph(*hypercube(3)), 3),
        (Multigraph(4, [(0, 2), (0, 2), (1, 3), (1, 3)]), 2),
    ],
    ids=["K22", "C6", "Heawood", "Q3", "doubled-edges"],
)
def test_decomposition_of_regular_bipartite(graph, degree):
    assert_decomposes(graph, decompose_matchings(graph), degree)


def test_odd_cycle_has_no_perfect_matching():
    with pytest.raises(NoPerfectMatching):
        perfect_matching(Multigraph(5, [(i, (i + 1) % 5) for i in range(5)]))


def test_unbalanced_bipartite_has_no_perfect_matching():
    with pytest.raises(NoPerfectMatching):
        perfect_matching(gen_complete_bipartite(2, 3))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(5, 14), st.integers(0, 1000))
def test_random_regular_bipartite_decomposes(d, side, seed):
    g = gen_random_regular_bipartite(d, side, 2, seed=seed)
    assert_decomposes(g, decompose_matchings(g), d)


@pytest.mark.parametrize("r, depth, expected", [(3, 2, (2, 3)), (3, 3, (7, 6)), (3, 1, (1, 0)), (4, 2, (3, 4))])
def test_tree_class_sizes(r, depth, expected):
    assert tree_class_sizes(r, depth) == expected


@settings(max_examples=50)
@given(st.integers(2, 9), st.integers(1, 6))
def test_tree_class_sizes_split_leaves(r, depth):
    x, y = tree_class_sizes(r, depth)
    assert x * r + y == r**depth
    assert abs(x - y) == 1 or (depth == 1 and (x, y) == (1, 0))


def leaf_colour_counts(r, depth):
    # brute-force colouring of one r-ary tree: children take colours other than the parent edge's
    counts = [0] * (r + 2)
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for c in frontier:
            nxt += list(range(1, r + 1)) if c == 0 else [k for k in range(1, r + 2) if k != c]
        frontier = nxt
    for c in frontier:
        counts[c] += 1
    return counts


@pytest.mark.parametrize("r, depth", [(3, 1), (3, 2), (3, 3), (4, 2), (5, 3)])
def test_tree_class_sizes_match_explicit_tree(r, depth):
    counts = leaf_colour_counts(r, depth)
    x, y = tree_class_sizes(r, depth)
    assert counts[1 : r + 1] == [x] * r
    assert counts[r + 1] == y


@pytest.mark.parametrize("order, degree", [(6, 3), (9, 4), (10, 3), (12, 5)])
def test_circulant_regular(order, degree):
    g = circulant_regular(order, degree)
    assert g.is_regular(degree)
    assert len({tuple(sorted(e)) for e in g.edges}) == g.edge_count


def test_circulant_rejects_odd_degree_on_odd_order():
    with pytest.raises(StructureError):
        circulant_regular(7, 3)


@pytest.mark.parametrize("r, t", [(3, 6), (4, 6), (3, 8)])
def test_even_base_colouring(r, t):
    graph, colouring, layers = color_base_graph_even(r, t)
    s = t // 2 - 1
    assert colouring.colors == r + 1
    assert colouring.is_proper(graph)
    sizes = [layers.count(i) for i in range(s + 1)]
    assert sizes == [4 * r**i for i in range(s + 1)]
    degrees = graph.degrees()
    for x, lay in enumerate(layers):
        assert degrees[x] == (r if lay == 0 else r + 1)
        if lay == 0:
            assert all(colouring.assignment[e] != r + 1 for _, e in graph.adjacency[x])
    # every vertex except roots sees all r+1 colours
    for x, lay in enumerate(layers):
        if lay:
            assert sorted(colouring.assignment[e] for _, e in graph.adjacency[x]) == list(range(1, r + 2))


def test_even_base_rejects_odd_t():
    with pytest.raises(ValueError):
        color_base_graph_even(3, 5)


def test_odd_colouring_of_heawood_minus_point():
    # delete a point of PG(2,2): its 3 lines are layer 0, remaining points layer 1
    inc = gen_projective_plane_incidence(2)
    removed = 0
    keep = [x for x in range(inc.vertex_count) if x != removed]
    index = {x: i for i, x in enumerate(keep)}
    lines_through = {y for u, v in inc.edges for y in (u, v) if removed in (u, v) and y != removed}
    base = Multigraph(len(keep), [(index[u], index[v]) for u, v in inc.edges if removed not in (u, v)])
    points = set(range(7))
    layers = []
    for x in keep:
        if x in lines_through:
            layers.append(0)
        elif x in points:
            layers.append(1)
        else:
            layers.append(2)
    colouring = color_base_graph_odd(base, layers, 2)
    assert colouring.colors == 3
    assert colouring.is_proper(base)


def test_odd_colouring_rejects_irregular_base():
    base = Multigraph(3, [(0, 1), (1, 2)])
    with pytest.raises(StructureError):
        color_base_graph_odd(base, [0, 1, 0], 2)


def test_improper_colouring_detected():
    g = Multigraph(3, [(0, 1), (1, 2)])
    assert not EdgeColoring(2, (1, 1)).is_proper(g)
    assert EdgeColoring(2, (1, 2)).is_proper(g)
    assert not EdgeColoring(2, (1, 3)).is_proper(g)


def test_colouring_text_round_trip(tmp_path):
    c = EdgeColoring(3, (1, 3, 2, 1))
    write_coloring(c, tmp_path / "c.txt")
    assert EdgeColoring.from_text((tmp_path / "c.txt").read_text(), colors=3) == c
    assert c.classes() == [[0, 3], [2], [1]]


def test_colouring_text_rejects_missing_edge():
    with pytest.raises(ValueError):
        EdgeColoring.from_text("0 1\n2 1\n")


def test_double_cover_colouring_stays_proper():
    g = gen_projective_plane_incidence(3)
    cover = bipartite_double_cover(g)
    ms = decompose_matchings(cover)
    assert_decomposes(cover, ms, 4)
    assert girth(cover).girth >= 6
