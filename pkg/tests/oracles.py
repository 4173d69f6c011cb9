"""Reference implementations that share no code with the package under test."""

from __future__ import annotations

import math
import random
from itertools import combinations

import numpy as np


def cycle_girth(vertex_count: int, edges: list[tuple[int, int]], max_len: int = 12) -> float:
    """Shortest simple cycle by exhaustive path enumeration; inf if none up to max_len."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(vertex_count)]
    for e, (u, v) in enumerate(edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    best = math.inf

    def walk(start: int, x: int, used: set[int], seen: set[int], length: int) -> None:
        nonlocal best
        if length >= min(best, max_len):
            return
        for y, e in adj[x]:
            if e in used:
                continue
            if y == start:
                best = min(best, length + 1)
            elif y > start and y not in seen:
                used.add(e)
                seen.add(y)
                walk(start, y, used, seen, length + 1)
                used.discard(e)
                seen.discard(y)

    for s in range(vertex_count):
        walk(s, s, set(), {s}, 0)
    return best


def dense_rank(array: np.ndarray) -> int:
    """GF(2) rank by row reduction on a dense uint8 copy."""
    a = (np.array(array, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        pivots = np.nonzero(a[rank:, c])[0]
        if pivots.size == 0:
            continue
        p = rank + int(pivots[0])
        a[[rank, p]] = a[[p, rank]]
        below = np.nonzero(a[:, c])[0]
        for i in below:
            if i != rank:
                a[i] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def min_weight_codeword(array: np.ndarray, cap: int) -> int | None:
    """Smallest set of columns summing to zero mod 2, by direct subset sums."""
    a = np.asarray(array, dtype=np.int64)
    n = a.shape[1]
    for w in range(1, min(cap, n) + 1):
        for subset in combinations(range(n), w):
            if not (a[:, subset].sum(axis=1) % 2).any():
                return w
    return None


def peel_recovers(edges: list[tuple[int, int]], pattern: set[int]) -> bool:
    """Sequential recovery by trying every order: succeed if some check sees one erasure, recurse."""
    remaining = set(pattern)
    while remaining:
        progress = False
        for e in sorted(remaining):
            for x in edges[e]:
                if sum(1 for f in remaining if x in edges[f]) == 1:
                    remaining.discard(e)
                    progress = True
                    break
            if progress:
                break
        if not progress:
            return False
    return True


def petersen() -> tuple[int, list[tuple[int, int]]]:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return 10, outer + spokes + inner


def hypercube(dim: int) -> tuple[int, list[tuple[int, int]]]:
    n = 1 << dim
    return n, [(x, x ^ (1 << b)) for x in range(n) for b in range(dim) if x < x ^ (1 << b)]


def random_regular(n: int, d: int, seed: int) -> list[tuple[int, int]]:
    """Simple d-regular graph on n vertices via the configuration model with restarts."""
    if n * d % 2:
        raise ValueError("n * d must be even")
    rng = random.Random(seed)
    while True:
        stubs = [x for x in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        if all(u != v for u, v in pairs) and len({tuple(sorted(p)) for p in pairs}) == len(pairs):
            return [tuple(sorted(p)) for p in pairs]  # type: ignore[misc]


def is_moore_structure(layer_sizes: list[int], a0: int, r: int, t: int) -> bool:
    s = (t - 1) // 2
    tree = [a0 * r**i for i in range(s + 1 if t % 2 == 0 else s)]
    if t % 2:
        tree.append(a0 * r**s // (r + 1))
    return layer_sizes == tree
