"""Dense matrices over GF(2) and the handful of exact operations the codes need.

Storage is a row-major ``numpy.uint8`` array packed with ``numpy.packbits``;
elimination runs on Python integers used as bitsets, which keeps weight-2
incidence columns cheap to reduce.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_SUBSET_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive scan would exceed its work budget."""


@dataclass(frozen=True, eq=False)
class BitMatrix:
    rows: int
    cols: int
    bits: np.ndarray  # shape (rows, ceil(cols / 8)), zero padded

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        width = (self.cols + 7) // 8
        if self.bits.shape != (self.rows, width) or self.bits.dtype != np.uint8:
            raise ValueError("packed bits do not cover rows x cols")
        pad = width * 8 - self.cols
        if pad and self.rows and np.any(self.bits[:, -1] & np.uint8((1 << pad) - 1)):
            raise ValueError("padding bits must be zero")
        self.bits.setflags(write=False)

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]] | np.ndarray) -> "BitMatrix":
        dense = np.asarray(array, dtype=np.uint8)
        if dense.ndim != 2:
            dense = dense.reshape(len(dense), -1) if dense.size else dense.reshape(0, 0)
        if np.any(dense > 1):
            raise ValueError("entries must be 0 or 1")
        rows, cols = dense.shape
        return cls(rows, cols, np.packbits(dense, axis=1).reshape(rows, (cols + 7) // 8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, (cols + 7) // 8), dtype=np.uint8))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Iterable[int]]) -> "BitMatrix":
        """Build from the support (row indices) of each column."""
        cols = list(columns)
        dense = np.zeros((rows, len(cols)), dtype=np.uint8)
        for j, support in enumerate(cols):
            for i in support:
                dense[i, j] ^= 1
        return cls.from_dense(dense)

    def to_dense(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=self.cols).reshape(self.rows, self.cols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return int((self.bits[i, j >> 3] >> (7 - (j & 7))) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    def column_ints(self) -> list[int]:
        """Each column as an int whose bit i is entry (i, column)."""
        dense = self.to_dense()
        out = [0] * self.cols
        for i, j in zip(*np.nonzero(dense)):
            out[j] |= 1 << int(i)
        return out

    def delete_rows(self, indices: Iterable[int]) -> "BitMatrix":
        keep = sorted(set(range(self.rows)) - set(indices))
        return BitMatrix.from_dense(self.to_dense()[keep, :])

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for row in self.to_dense():
            lines.append("".join("1" if x else "0" for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if not lines:
            raise ValueError("empty matrix text")
        try:
            rows, cols = (int(x) for x in lines[0].split())
        except ValueError as exc:
            raise ValueError(f"bad header line: {lines[0]!r}") from exc
        body = lines[1:]
        if cols == 0 and not any(body):
            body = [""] * rows  # zero-width rows are blank lines, lost to strip()
        if len(body) != rows:
            raise ValueError(f"expected {rows} rows, found {len(body)}")
        dense = np.zeros((rows, cols), dtype=np.uint8)
        for i, line in enumerate(body):
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ValueError(f"row {i} is not {cols} characters of 0/1")
            dense[i] = np.frombuffer(line.encode(), dtype=np.uint8) - ord("0")
        return cls.from_dense(dense)


def read_matrix(path: str | Path) -> BitMatrix:
    return BitMatrix.from_text(Path(path).read_text())


def write_matrix(matrix: BitMatrix, path: str | Path) -> None:
    Path(path).write_text(matrix.to_text())


def _reduce_into(basis: dict[int, int], vec: int) -> bool:
    # pivot on the lowest set bit; returns True if vec was independent
    while vec:
        low = vec & -vec
        pivot = basis.get(low)
        if pivot is None:
            basis[low] = vec
            return True
        vec ^= pivot
    return False


def rank(matrix: BitMatrix) -> int:
    basis: dict[int, int] = {}
    count = 0
    for col in matrix.column_ints():
        if _reduce_into(basis, col):
            count += 1
    return count


def rank_of_supports(columns: Iterable[Iterable[int]]) -> int:
    """GF(2) rank of columns given by their supports, for matrices too large to store densely.

    Vectors are kept as sets and reduced on their smallest index, so the
    weight-2 columns of an incidence matrix stay weight 2 throughout.
    """
    basis: dict[int, frozenset[int]] = {}
    count = 0
    for support in columns:
        vec = set()
        for i in support:
            vec ^= {i}
        while vec:
            low = min(vec)
            pivot = basis.get(low)
            if pivot is None:
                basis[low] = frozenset(vec)
                count += 1
                break
            vec ^= pivot
    return count


def null_space_dim(matrix: BitMatrix) -> int:
    return matrix.cols - rank(matrix)


def row_sum(matrix: BitMatrix) -> np.ndarray:
    """GF(2) sum of all rows, as a 0/1 vector of length cols."""
    return (matrix.to_dense().sum(axis=0, dtype=np.int64) & 1).astype(np.uint8)


def min_distance_bruteforce(
    matrix: BitMatrix, cap: int, budget: int = DEFAULT_SUBSET_BUDGET
) -> int | None:
    """Smallest nonzero codeword weight of the code with parity checks ``matrix``.

    Column subsets are scanned by increasing size. A size-w subset sums to
    zero exactly when the XOR of w-1 of its columns equals the remaining
    column, so each size costs one pass over the (w-1)-subsets plus a hash
    lookup. Returns None when no codeword of weight <= cap exists.
    Raises BudgetExceeded once more than ``budget`` subsets have been checked.
    """
    cols = matrix.column_ints()
    n = len(cols)
    if n == rank(matrix):
        return None  # only the zero codeword
    positions: dict[int, list[int]] = {}
    for j, c in enumerate(cols):
        positions.setdefault(c, []).append(j)
    if 0 in positions and cap >= 1:
        return 1

    checked = 0

    def completes(acc: int, last: int) -> bool:
        return any(j > last for j in positions.get(acc, ()))

    for w in range(2, min(cap, n) + 1):
        depth = w - 1
        stack: list[tuple[int, int, int]] = [(0, -1, 0)]  # (acc, last index, size)
        while stack:
            acc, last, size = stack.pop()
            if size == depth:
                checked += 1
                if checked > budget:
                    raise BudgetExceeded(
                        f"more than {budget} column subsets; remaining sizes need about "
                        f"{comb(n, depth)} checks each"
                    )
                if completes(acc, last):
                    return w
                continue
            for j in range(n - 1, last, -1):
                if n - j >= depth - size:
                    stack.append((acc ^ cols[j], j, size + 1))
    return None
