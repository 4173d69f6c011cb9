"""Exact rate and dimension bounds, the even-t linear program in closed form, and an integer search.

Everything is computed with :class:`fractions.Fraction`, so identities between
bounds can be checked with ``==``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

Rational = Fraction


def _s(t: int) -> int:
    return (t - 1) // 2


def _check_r(r: int) -> None:
    if r < 3:
        raise ValueError(f"locality r must be at least 3, got {r}")


def rate_bound(r: int, t: int) -> Fraction:
    """Largest rate of a binary code with locality r recovering t erasures one at a time."""
    _check_r(r)
    if t < 2:
        raise ValueError("t must be at least 2")
    s = _s(t)
    top = r ** (s + 1)
    if t % 2 == 0:
        return Fraction(top, top + 2 * sum(r**i for i in range(s + 1)))
    return Fraction(top, top + 2 * sum(r**i for i in range(1, s + 1)) + 1)


def dim_bound(n: int, r: int, t: int) -> int:
    return math.floor(n * rate_bound(r, t))


def moore_bound(r: int, t: int) -> int:
    """Fewest vertices of an (r+1)-regular graph with girth at least t+1."""
    if r < 1 or t < 2:
        raise ValueError("need r >= 1 and t >= 2")
    s = _s(t)
    if t % 2 == 0:
        return 1 + sum((r + 1) * r**i for i in range(s + 1))
    return 2 * sum(r**i for i in range(s + 1))


def moore_rate(r: int, t: int) -> Fraction:
    _check_r(r)
    return Fraction(r - 1, r + 1) + Fraction(2, moore_bound(r, t) * (r + 1))


def availability_bound(r: int, t: int) -> Fraction:
    """Rate ceiling for codes offering t disjoint repair groups of size r per symbol."""
    if r < 1 or t < 0:
        raise ValueError("need r >= 1 and t >= 0")
    prod = Fraction(1)
    for j in range(1, t + 1):
        prod *= 1 + Fraction(1, j * r)
    return 1 / prod


def optimal_length_step(r: int, t: int) -> int:
    """Smallest positive block length at which the rate bound can be an integer dimension."""
    bound = rate_bound(r, t)
    return bound.denominator


def decimal(x: Fraction, places: int = 6) -> str:
    return f"{float(x):.{places}f}"


@dataclass(frozen=True)
class LpSolution:
    a: tuple[int, ...]  # symbols per column-weight class, a_0 .. a_{t/2}
    p: int  # parity rows outside the layered part
    m: int
    k: int
    objective: Fraction
    extension: bool = False  # True for the odd-t variant

    def as_row(self) -> tuple[int, ...]:
        return (*self.a, self.p)


@dataclass(frozen=True)
class LpClosedForm:
    m_min: Fraction
    k: Fraction
    dual: tuple[Fraction, ...]  # lambda_1 .. lambda_{t/2+1}
    slack: Fraction
    primal_a: tuple[Fraction, ...]
    primal_p: Fraction


def lp_constraints(r: int, t: int) -> tuple[list[list[int]], list[int], list[int]]:
    """Constraint matrix A, right-hand-side multipliers of n, and cost vector for even t.

    Variables are (a_0, ..., a_{t/2}, p); the program reads
    minimise c.x subject to A x >= n * b, x >= 0.
    """
    if t % 2:
        raise ValueError("the layered program is stated for even t")
    h = t // 2
    width = h + 2
    rows: list[list[int]] = []
    rhs: list[int] = []
    for i in range(1, h):
        row = [0] * width
        row[i - 1], row[i] = r, -1
        rows.append(row)
        rhs.append(0)
    row = [0] * width
    row[h - 1], row[h], row[h + 1] = r, -2, r + 1
    rows.append(row)
    rhs.append(0)
    row = [r + 3] + [r + 2] * (h - 1) + [1, r + 1]
    rows.append(row)
    rhs.append(3)
    cost = [1] * h + [0, 1]
    return rows, rhs, cost


def lp_closed_form(n: int, r: int, t: int) -> LpClosedForm:
    """Optimal dual and primal points of the even-t relaxation, in closed form."""
    _check_r(r)
    if t % 2:
        raise ValueError("closed form is available for even t only")
    h = t // 2
    geo = sum(r**i for i in range(h))
    denom = r**h + 2 * geo
    last = Fraction(2 * geo, 3 * denom)
    dual = tuple(
        Fraction(r**h - 3 * r ** (h - (j + 1)) + 2, 3 * (r - 1) * denom) for j in range(h)
    ) + (last,)
    m_min = 3 * n * last
    primal_a = tuple(Fraction(2 * n * r**i, denom) for i in range(h)) + (Fraction(n * r**h, denom),)
    return LpClosedForm(m_min, n - m_min, dual, Fraction(1, denom), primal_a, Fraction(0))


class SearchBudgetExceeded(RuntimeError):
    pass


def _even_feasible_top(a: list[int], p: int, n: int, r: int) -> int | None:
    # largest a_{t/2} satisfying the last two constraint rows and the column count, or None
    h = len(a)
    cap = (r * a[h - 1] + (r + 1) * p) // 2
    cap = min(cap, n - sum(a))
    if cap < 0:
        return None
    covered = (r + 3) * a[0] + (r + 2) * sum(a[1:]) + (r + 1) * p
    need = 3 * n - covered
    if need > cap:
        return None
    return cap


def _even_prefixes(h: int, m_rest: int, r: int) -> Iterator[list[int]]:
    """All (a_0..a_{h-1}) summing to m_rest with a_i <= r a_{i-1},
    a_0 descending, then lexicographically largest first."""

    def rec(prefix: list[int], left: int) -> Iterator[list[int]]:
        i = len(prefix)
        if i == h - 1:
            if i == 0 or left <= r * prefix[-1]:
                yield prefix + [left]
            return
        hi = left if i == 0 else min(left, r * prefix[-1])
        for v in range(hi, -1, -1):
            yield from rec(prefix + [v], left - v)

    yield from rec([], m_rest)


def _tie_key(a: tuple[int, ...], p: int) -> tuple:
    # most columns inside the layered classes, then fewest extra rows, then largest a_0, a_1, ...
    return (-sum(a), p, tuple(-x for x in a))


def ilp_dimension_search(n: int, r: int, t: int, budget: int = 10**7) -> LpSolution:
    """Largest k = n - m over integer points of the layered program.

    Candidate m grows from the relaxation optimum, so the first feasible m is
    optimal. Among the optimal points the one returned covers the most
    columns with the weight-1 and weight-2 classes (class sizes never exceed
    n, as they count disjoint columns), then has the fewest extra rows p,
    then the lexicographically largest (a_0, a_1, ...). a_{t/2} always takes
    its largest feasible value. Odd t dispatches to
    :func:`ilp_dimension_search_odd`.
    """
    _check_r(r)
    if t % 2:
        return ilp_dimension_search_odd(n, r, t, budget)
    h = t // 2
    start = max(0, math.ceil(lp_closed_form(n, r, t).m_min))
    work = 0
    for m in range(start, n + 1):
        best: tuple[tuple, tuple[int, ...], int] | None = None
        for p in range(0, m + 1):
            for prefix in _even_prefixes(h, m - p, r):
                work += 1
                if work > budget:
                    raise SearchBudgetExceeded(f"more than {budget} candidate points examined")
                top = _even_feasible_top(prefix, p, n, r)
                if top is None:
                    continue
                a = tuple(prefix) + (top,)
                key = _tie_key(a, p)
                if best is None or key < best[0]:
                    best = (key, a, p)
        if best is not None:
            return LpSolution(best[1], best[2], m, n - m, Fraction(m))
    raise SearchBudgetExceeded("no feasible point with m <= n")


def ilp_dimension_search_odd(n: int, r: int, t: int, budget: int = 10**7) -> LpSolution:
    """Odd-t analogue, flagged as an extension.

    Variables a_0..a_{s+1}, rho (rows of the bottom block) and p, with
    m = rho + a_0 + ... + a_{s-1} + p and the constraints
      a_i <= r a_{i-1}                (1 <= i <= s)
      a_s <= (r+1) rho
      2 a_{s+1} + a_s <= (r+1)(rho + p)
      (r+1) m >= 3n - 2 a_0 - (a_1 + ... + a_{s+1})
      a_0 + ... + a_{s+1} <= n.
    The returned ``a`` lists a_0..a_{s+1}. Ties are broken as in the even case.
    """
    _check_r(r)
    if t % 2 == 0 or t < 3:
        raise ValueError("odd search needs odd t >= 3")
    s = _s(t)
    work = 0
    start = 0  # searched from scratch so the rate bound stays an independent check
    for m in range(start, n + 1):
        best: tuple[tuple, tuple[int, ...], int] | None = None
        for p in range(0, m + 1):
            for rho in range(m - p, -1, -1):
                layered = m - p - rho
                # necessary: even the most generous bottom block cannot cover 3n otherwise
                generous = 2 * layered + (r + 1) * rho + ((r + 1) * (rho + p)) // 2
                if generous < 3 * n - (r + 1) * m or n + layered < 3 * n - (r + 1) * m:
                    continue
                for prefix in _even_prefixes(s, layered, r):
                    work += 1
                    if work > budget:
                        raise SearchBudgetExceeded(f"more than {budget} candidate points examined")
                    room = n - layered
                    # a_s + a_{s+1} grows with a_s, so the largest a_s dominates
                    a_s = min((r + 1) * rho, r * prefix[-1], room)
                    top = min(((r + 1) * (rho + p) - a_s) // 2, room - a_s)
                    head = 2 * prefix[0] + sum(prefix[1:])
                    if top < 0 or (r + 1) * m < 3 * n - head - a_s - top:
                        continue
                    a = tuple(prefix) + (a_s, top)
                    key = _tie_key(a, p)
                    if best is None or key < best[0]:
                        best = (key, a, p)
            if best is not None and sum(best[1]) == n:
                break  # nothing with more extra rows can rank higher
        if best is not None:
            return LpSolution(best[1], best[2], m, n - m, Fraction(m), extension=True)
    raise SearchBudgetExceeded("no feasible point with m <= n")


def table1_rows(r: int, t: int, n_from: int, n_to: int) -> list[LpSolution]:
    return [ilp_dimension_search(n, r, t) for n in range(n_from, n_to + 1)]


def table1_csv(r: int, t: int, n_from: int, n_to: int) -> str:
    h = t // 2 if t % 2 == 0 else _s(t) + 1
    header = ["n", "k_max"] + [f"a{i}" for i in range(h + 1)] + ["p"]
    lines = [",".join(header)]
    for n, sol in zip(range(n_from, n_to + 1), table1_rows(r, t, n_from, n_to)):
        lines.append(",".join(str(x) for x in (n, sol.k, *sol.a, sol.p)))
    return "\n".join(lines) + "\n"


def compare_csv(rs: range, t: int) -> str:
    lines = ["r,seq_rate,avail_rate,seq_rate_exact,avail_rate_exact"]
    for r in rs:
        seq, avl = rate_bound(r, t), availability_bound(r, t)
        lines.append(f"{r},{decimal(seq)},{decimal(avl)},{seq},{avl}")
    return "\n".join(lines) + "\n"
