from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import peel_recovers, petersen, random_regular
from seqlrc.construct import ConstructionParams, construct
from seqlrc.gf2 import BitMatrix, BudgetExceeded
from seqlrc.graph import (
    Multigraph,
    gen_complete,
    gen_hoffman_singleton,
    girth,
    incidence_matrix,
)
from seqlrc.verify import (
    BUDGET_ENV,
    code_supports,
    enumeration_budget,
    girth_certifies,
    graph_from_matrix,
    peel,
    staircase_check,
    staircase_check_code,
    verification_report,
    verify_all,
)


def small_graphs():
    def build(n):
        pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
        return st.lists(pair, min_size=1, max_size=12).map(lambda es: Multigraph(n, es))

    return st.integers(2, 7).flatmap(build)


def graph_with_pattern():
    return small_graphs().flatmap(
        lambda g: st.tuples(st.just(g), st.sets(st.integers(0, g.edge_count - 1), max_size=g.edge_count))
    )


def assert_valid_order(graph, pattern, report, locality=None):
    erased = set(pattern)
    for e, x in report.order:
        assert x in graph.edges[e]
        assert [f for _, f in graph.adjacency[x] if f in erased] == [e]
        if locality is not None:
            assert len(graph.adjacency[x]) - 1 <= locality
        erased.discard(e)
    assert erased == set(report.stuck_core)


def test_single_erasure_repaired_by_lower_check():
    g = gen_complete(5)
    report = peel(g, [4])
    assert report.success
    assert report.order == ((4, 1),)


def test_empty_pattern():
    assert peel(gen_complete(4), []).success


def test_out_of_range_symbol():
    with pytest.raises(ValueError):
        peel(gen_complete(3), [3])


def test_shortest_cycle_is_the_stuck_core():
    g = gen_hoffman_singleton()
    cycle = girth(g).witness_cycle
    report = peel(g, cycle)
    assert not report.success
    assert report.stuck_core == frozenset(cycle)
    assert report.order == ()


def test_stuck_core_checks_see_two_erasures():
    g = Multigraph(*petersen())
    cycle = girth(g).witness_cycle
    report = peel(g, set(cycle) | {12})
    assert not report.success
    for e in report.stuck_core:
        for x in g.edges[e]:
            assert sum(1 for _, f in g.adjacency[x] if f in report.stuck_core) >= 2


def test_layered_code_repairs_read_at_most_r_symbols():
    code = construct(ConstructionParams(3, 5, force_expansion=True))
    pattern = list(range(0, 40, 3))
    report = peel(code, pattern)
    assert_valid_order(code.graph, pattern, report, locality=3)


def test_complete_graph_two_and_three_erasures():
    code = construct(ConstructionParams(3, 2))
    ok = verify_all(code, 2)
    assert ok.passed and ok.checked == 10 + 45
    bad = verify_all(code, 3)
    assert not bad.passed
    tri = bad.counterexample
    assert len(tri) == 3
    assert girth(Multigraph(5, [code.graph.edges[e] for e in tri])).girth == 3
    assert bad.report is not None and bad.report.stuck_core == frozenset(tri)


def test_hoffman_singleton_four_erasures_budget():
    code = construct(ConstructionParams(6, 4))
    with pytest.raises(BudgetExceeded):
        verify_all(code, 4, budget=1000)


def test_budget_env(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "123")
    assert enumeration_budget() == 123
    monkeypatch.delenv(BUDGET_ENV)
    assert enumeration_budget() == 10**7


def test_counterexample_found_beyond_budget_total():
    # C(10,<=3) = 175 patterns but the first failing triangle comes early
    code = construct(ConstructionParams(3, 2))
    result = verify_all(code, 3, budget=100)
    assert not result.passed and result.checked <= 100


def test_girth_certifies():
    code = construct(ConstructionParams(3, 5))
    assert girth_certifies(code, 5)
    assert not girth_certifies(code, 6)
    assert girth_certifies(gen_complete(5), 2)


@settings(max_examples=200)
@given(graph_with_pattern())
def test_peel_matches_any_order_oracle(case):
    g, pattern = case
    report = peel(g, pattern)
    assert report.success == peel_recovers(list(g.edges), pattern)
    assert_valid_order(g, pattern, report)


@settings(max_examples=100)
@given(graph_with_pattern(), st.randoms(use_true_random=False))
def test_peeling_is_monotone(case, rnd):
    g, pattern = case
    if not peel(g, pattern).success:
        return
    sub = {e for e in pattern if rnd.random() < 0.5}
    assert peel(g, sub).success


@settings(max_examples=100)
@given(graph_with_pattern(), st.randoms(use_true_random=False))
def test_verdict_invariant_under_relabelling(case, rnd):
    g, pattern = case
    perm = list(range(g.vertex_count))
    rnd.shuffle(perm)
    h = Multigraph(g.vertex_count, [(perm[u], perm[v]) for u, v in g.edges])
    assert peel(h, pattern).success == peel(g, pattern).success


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(1, 4))
def test_verify_all_matches_oracle_enumeration(g, t):
    result = verify_all(g, t)
    expected = None
    for w in range(1, min(t, g.edge_count) + 1):
        for pat in combinations(range(g.edge_count), w):
            if not peel_recovers(list(g.edges), set(pat)):
                expected = pat
                break
        if expected:
            break
    assert result.passed == (expected is None)
    assert result.counterexample == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_verify_all_equals_girth_predicate(seed, t):
    g = Multigraph(10, random_regular(10, 3, seed))
    assert verify_all(g, t).passed == (girth(g).girth >= t + 1)


@pytest.mark.parametrize("r, t", [(3, 2), (3, 3), (3, 4), (6, 4), (3, 5)])
def test_staircase_passes_on_constructed_codes(r, t):
    code = construct(ConstructionParams(r, t))
    report = staircase_check_code(code)
    assert report.ok, report.failure
    assert report.a0 == code.apex_degree
    assert list(report.layer_sizes) == code.layer_sizes()


def test_staircase_on_dense_matrix():
    code = construct(ConstructionParams(3, 4))
    report = staircase_check(code.staircase_matrix, 3, 4)
    assert report.ok and report.layer_sizes == (6, 18)


def test_staircase_fails_after_perturbation():
    code = construct(ConstructionParams(3, 4))
    dense = code.staircase_matrix.to_dense()
    col = next(j for j in range(dense.shape[1]) if dense[:, j].sum() == 2)
    rows = list(dense[:, col].nonzero()[0])
    spare = next(i for i in range(dense.shape[0]) if i not in rows)
    dense[rows[0], col], dense[spare, col] = 0, 1
    report = staircase_check(BitMatrix.from_dense(dense), 3, 4)
    assert not report.ok and report.failure


def test_staircase_fails_without_weight_one_columns():
    g = Multigraph(*petersen())
    report = staircase_check(incidence_matrix(g), 2, 4)
    assert not report.ok
    assert "weight-1" in report.failure


def test_staircase_rejects_wrong_parity_of_t():
    code = construct(ConstructionParams(3, 5))
    assert not staircase_check(code_supports(code.graph, 0), 3, 4).ok


def test_graph_from_matrix_round_trip():
    code = construct(ConstructionParams(3, 4))
    graph, added = graph_from_matrix(code.staircase_matrix)
    assert added
    assert [set(e) for e in graph.edges] == [set(e) for e in code.graph.edges]
    plain, added = graph_from_matrix(incidence_matrix(gen_complete(4)))
    assert not added and plain.edges == gen_complete(4).edges


def test_graph_from_matrix_rejects_heavy_columns():
    with pytest.raises(ValueError):
        graph_from_matrix(BitMatrix.from_dense([[1], [1], [1]]))


def test_verification_report_shape():
    code = construct(ConstructionParams(3, 3))
    report = verification_report(code.graph, 3, 3, staircase_check_code(code))
    assert report["girth"] == 4 and report["girth_certifies"] is True
    assert report["verify_all"] == {"checked": 16 + 120 + 560, "passed": True}
    assert report["staircase"]["ok"] is True
    assert report["d_min_lower_bound"] == 4


def test_verification_report_skips_on_budget():
    code = construct(ConstructionParams(3, 5))
    report = verification_report(code.graph, 3, 5, staircase_check_code(code), budget=10)
    assert report["verify_all"]["passed"] is None
    assert "skipped" in report["verify_all"]
