"""Independent checks that a graph code repairs t erasures one symbol at a time."""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from itertools import chain, combinations, islice
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .construct import LayeredCode
from .gf2 import BitMatrix, BudgetExceeded
from .graph import Multigraph, girth

DEFAULT_PATTERN_BUDGET = 10**7
BUDGET_ENV = "SEQLRC_ENUM_BUDGET"
_BATCH = 1 << 16

Code = LayeredCode | Multigraph


def enumeration_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_PATTERN_BUDGET


def _graph_of(code: Code) -> tuple[Multigraph, int | None]:
    if isinstance(code, LayeredCode):
        return code.graph, code.r
    return code, None


def _resolvers(graph: Multigraph, locality: int | None) -> list[bool]:
    # a check repairs a symbol from its other neighbours, so its degree bounds the repair cost
    if locality is None:
        return [True] * graph.vertex_count
    return [d <= locality + 1 for d in graph.degrees()]


@dataclass(frozen=True)
class PeelReport:
    success: bool
    order: tuple[tuple[int, int], ...]  # (symbol, resolving check)
    stuck_core: frozenset[int] = field(default_factory=frozenset)


def peel(code: Code, pattern: Iterable[int], locality: int | None = None) -> PeelReport:
    """Peeling decoder: repeatedly let the lowest-numbered check with one erased symbol repair it.

    For a LayeredCode, checks with more than r+1 symbols (the apex of an
    expanded code) are not used for repair, so every repair reads at most r
    symbols. The verdict does not depend on this: a stuck set still contains
    a cycle.
    """
    graph, default_locality = _graph_of(code)
    limit = default_locality if locality is None else locality
    erased = set(pattern)
    for e in erased:
        if not 0 <= e < graph.edge_count:
            raise ValueError(f"symbol {e} out of range")
    can = _resolvers(graph, limit)
    load = [0] * graph.vertex_count
    for e in erased:
        for x in graph.edges[e]:
            load[x] += 1
    heap = [x for x in range(graph.vertex_count) if load[x] == 1 and can[x]]
    heapq.heapify(heap)
    order = []
    while heap:
        x = heapq.heappop(heap)
        if load[x] != 1:
            continue
        e = next(e for _, e in graph.adjacency[x] if e in erased)
        erased.discard(e)
        order.append((e, x))
        for y in graph.edges[e]:
            load[y] -= 1
            if load[y] == 1 and can[y]:
                heapq.heappush(heap, y)
    return PeelReport(not erased, tuple(order), frozenset(erased))


def _batch_peel_fails(eu: np.ndarray, ev: np.ndarray, can: np.ndarray, pats: np.ndarray) -> np.ndarray:
    """Vectorised peel over a batch of equal-size patterns; True where the pattern gets stuck.

    All currently repairable symbols are repaired in the same round. A symbol
    that is repairable stays so until repaired, so the stuck set is the same
    as for one-at-a-time peeling.
    """
    u, v = eu[pats], ev[pats]
    w = pats.shape[1]
    mu = (u[:, :, None] == u[:, None, :]) | (u[:, :, None] == v[:, None, :])
    mv = (v[:, :, None] == u[:, None, :]) | (v[:, :, None] == v[:, None, :])
    ok_u, ok_v = can[u], can[v]
    active = np.ones(pats.shape, dtype=bool)
    for _ in range(w):
        cu = (mu & active[:, None, :]).sum(axis=2)
        cv = (mv & active[:, None, :]).sum(axis=2)
        ready = active & (((cu == 1) & ok_u) | ((cv == 1) & ok_v))
        if not ready.any():
            break
        active &= ~ready
    return active.any(axis=1)


@dataclass(frozen=True)
class VerifyResult:
    passed: bool
    checked: int
    counterexample: tuple[int, ...] | None = None
    report: PeelReport | None = None


def verify_all(code: Code, t: int, budget: int | None = None) -> VerifyResult:
    """Peel every erasure pattern of size 1..t, in lexicographic order within each size.

    Stops at the first pattern that gets stuck. Raises BudgetExceeded as soon
    as more than ``budget`` patterns would have been checked.
    """
    graph, locality = _graph_of(code)
    n = graph.edge_count
    limit = enumeration_budget() if budget is None else budget
    ends = np.asarray(graph.edges, dtype=np.int64).reshape(-1, 2)
    eu, ev = ends[:, 0], ends[:, 1]
    can = np.asarray(_resolvers(graph, locality), dtype=bool)
    checked = 0
    for w in range(1, min(t, n) + 1):
        combos = combinations(range(n), w)
        while True:
            flat = np.fromiter(chain.from_iterable(islice(combos, _BATCH)), dtype=np.int64)
            if flat.size == 0:
                break
            pats = flat.reshape(-1, w)
            over = checked + len(pats) > limit
            if over:
                pats = pats[: limit - checked]
            fails = _batch_peel_fails(eu, ev, can, pats)
            if fails.any():
                first = int(np.argmax(fails))
                bad = tuple(int(x) for x in pats[first])
                return VerifyResult(False, checked + first + 1, bad, peel(code, bad))
            checked += len(pats)
            if over:
                total = sum(comb(n, k) for k in range(1, min(t, n) + 1))
                raise BudgetExceeded(
                    f"{total} erasure patterns exceed the budget of {limit}; certify by girth instead"
                )
    return VerifyResult(True, checked)


def girth_certifies(code: Code, t: int) -> bool:
    graph, _ = _graph_of(code)
    g = code.girth.girth if isinstance(code, LayeredCode) else girth(graph).girth
    return g >= t + 1


@dataclass(frozen=True)
class StaircaseReport:
    ok: bool
    a0: int
    layer_sizes: tuple[int, ...]
    failure: str | None = None


def _supports(matrix: BitMatrix) -> list[tuple[int, ...]]:
    dense = matrix.to_dense()
    return [tuple(int(i) for i in np.flatnonzero(dense[:, j])) for j in range(matrix.cols)]


def staircase_check(matrix: BitMatrix | tuple[int, Sequence[Sequence[int]]], r: int, t: int) -> StaircaseReport:
    """Recover the layered block form of a rate-optimal parity-check matrix by peeling layers.

    Accepts a BitMatrix or (row count, column supports). Weight-1 columns seed
    layer 0; each layer's remaining r entries per row lead to the next layer,
    until the bottom block: for even t, columns inside the last layer with r
    per row; for odd t, a new layer whose rows each collect r+1 columns.
    """
    if isinstance(matrix, BitMatrix):
        rows, cols = matrix.rows, _supports(matrix)
    else:
        rows, cols = matrix[0], [tuple(c) for c in matrix[1]]
    s = (t - 1) // 2
    sizes: list[int] = []

    def fail(msg: str, a0: int = 0) -> StaircaseReport:
        return StaircaseReport(False, a0, tuple(sizes), msg)

    by_row: list[list[int]] = [[] for _ in range(rows)]
    for j, sup in enumerate(cols):
        if len(sup) not in (1, 2):
            return fail(f"column {j} has weight {len(sup)}, not 1 or 2")
        for i in sup:
            by_row[i].append(j)
    for i, js in enumerate(by_row):
        if len(js) != r + 1:
            return fail(f"row {i}: row weight {len(js)} != r+1 = {r + 1}")

    d0 = [j for j, sup in enumerate(cols) if len(sup) == 1]
    a0 = len(d0)
    if a0 == 0:
        return fail("no weight-1 columns, so no D_0 block")
    layer_of = [-1] * rows
    layer = []
    for j in d0:
        i = cols[j][0]
        if layer_of[i] >= 0:
            return fail(f"D_0: row {i} holds two weight-1 columns", a0)
        layer_of[i] = 0
        layer.append(i)
    used = [False] * len(cols)
    for j in d0:
        used[j] = True
    sizes.append(len(layer))

    tree_depth = s if t % 2 == 0 else s - 1
    for depth in range(1, tree_depth + 1):
        nxt = []
        for i in layer:
            down = [j for j in by_row[i] if not used[j]]
            if len(down) != r:
                return fail(f"A_{depth}: row {i} has {len(down)} entries, expected r = {r}", a0)
            for j in down:
                other = [x for x in cols[j] if x != i]
                if len(other) != 1:
                    return fail(f"A_{depth}: column {j} has weight 1 inside the layer", a0)
                o = other[0]
                if layer_of[o] >= 0:
                    return fail(f"D_{depth}: row {o} reached twice (not diagonal)", a0)
                layer_of[o] = depth
                used[j] = True
                nxt.append(o)
        layer = nxt
        sizes.append(len(layer))

    if t % 2 == 0:
        inner = {i: [j for j in by_row[i] if not used[j]] for i in layer}
        for i in layer:
            if len(inner[i]) != r:
                return fail(f"C: row {i} has {len(inner[i])} entries, expected r = {r}", a0)
            for j in inner[i]:
                if len(cols[j]) != 2 or any(layer_of[x] != s for x in cols[j]):
                    return fail(f"C: column {j} leaves the last layer", a0)
                used[j] = True
    else:
        hits: dict[int, int] = {}
        for i in layer:
            down = [j for j in by_row[i] if not used[j]]
            if len(down) != r:
                return fail(f"A_{s}: row {i} has {len(down)} entries, expected r = {r}", a0)
            for j in down:
                other = [x for x in cols[j] if x != i]
                if len(other) != 1 or layer_of[other[0]] not in (-1, s):
                    return fail(f"A_{s}: column {j} does not reach a fresh bottom row", a0)
                layer_of[other[0]] = s
                hits[other[0]] = hits.get(other[0], 0) + 1
                used[j] = True
        bad = [i for i, c in hits.items() if c != r + 1]
        if bad:
            return fail(f"D_{s}: row {bad[0]} has {hits[bad[0]]} entries, expected r+1 = {r + 1}", a0)
        sizes.append(len(hits))

    if not all(used):
        return fail(f"column {used.index(False)} lies outside the staircase", a0)
    if -1 in layer_of:
        return fail(f"row {layer_of.index(-1)} lies outside the staircase", a0)
    return StaircaseReport(True, a0, tuple(sizes))


def code_supports(graph: Multigraph, apex: int = 0) -> tuple[int, list[tuple[int, ...]]]:
    """Column supports of the incidence matrix with the apex row removed and rows renumbered."""
    index = {x: i for i, x in enumerate(v for v in range(graph.vertex_count) if v != apex)}
    return graph.vertex_count - 1, [tuple(index[x] for x in e if x != apex) for e in graph.edges]


def staircase_check_code(code: LayeredCode) -> StaircaseReport:
    return staircase_check(code_supports(code.graph, 0), code.r, code.t)


def graph_from_matrix(matrix: BitMatrix) -> tuple[Multigraph, bool]:
    """Graph whose incidence matrix is ``matrix``; weight-1 columns get a new apex row first.

    Returns (graph, apex_added). With an apex the graph's vertex 0 is the apex
    and row i of the matrix is vertex i+1.
    """
    cols = _supports(matrix)
    weights = {len(c) for c in cols}
    if weights - {1, 2}:
        raise ValueError("columns of weight other than 1 or 2 have no graph form")
    if 1 not in weights:
        return Multigraph(matrix.rows, cols), False
    edges = [(0, c[0] + 1) if len(c) == 1 else (c[0] + 1, c[1] + 1) for c in cols]
    return Multigraph(matrix.rows + 1, edges), True


def verification_report(
    graph: Multigraph,
    r: int,
    t: int,
    staircase: StaircaseReport,
    budget: int | None = None,
) -> dict:
    """The JSON-ready verification summary for a code given by its graph (apex included)."""
    g = girth(graph)
    girth_value = None if g.is_infinite else int(g.girth)
    try:
        result = verify_all(graph, t, budget)
        exhaustive: dict = {"checked": result.checked, "passed": result.passed}
        if result.counterexample is not None:
            exhaustive["counterexample"] = list(result.counterexample)
    except BudgetExceeded as exc:
        exhaustive = {"checked": 0, "passed": None, "skipped": str(exc)}
    return {
        "girth": girth_value,
        "t": t,
        "verify_all": exhaustive,
        "girth_certifies": g.girth >= t + 1,
        "staircase": {
            "ok": staircase.ok,
            "a0": staircase.a0,
            "layer_sizes": list(staircase.layer_sizes),
            **({"failure": staircase.failure} if staircase.failure else {}),
        },
        "d_min_lower_bound": girth_value,
    }
