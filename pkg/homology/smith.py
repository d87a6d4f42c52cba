"""
Smith normal form over the integers.

For an integer matrix A this computes unimodular U, V with U·A·V = D,
D diagonal and d₁ | d₂ | … The inverses of U and V are tracked alongside
so cohomology can move between cochain and kernel coordinates without a
second elimination.

The elimination is deterministic: pivots are the entry of least absolute
value, ties broken by (row, column).
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from config import get_settings

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def mat_vec(a: Sequence[Sequence[int]], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


@dataclass(frozen=True)
class SmithResult:
    """U·A·V = D together with U⁻¹, V⁻¹ and the nonzero diagonal."""
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    diagonal: Tuple[int, ...]  # nonzero invariant factors, length = rank

    @property
    def rank(self) -> int:
        return len(self.diagonal)


class _Elimination:
    """Working state; every row/column operation updates D, U, U⁻¹, V, V⁻¹."""

    def __init__(self, matrix: Sequence[Sequence[int]], rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.D = [list(map(int, r)) for r in matrix]
        self.U = identity_matrix(rows)
        self.U_inv = identity_matrix(rows)
        self.V = identity_matrix(cols)
        self.V_inv = identity_matrix(cols)

    # row i <- row i - q·row t
    def row_sub(self, i: int, t: int, q: int) -> None:
        if q == 0:
            return
        for M in (self.D, self.U):
            src, dst = M[t], M[i]
            for j in range(len(dst)):
                dst[j] -= q * src[j]
        for row in self.U_inv:
            row[t] += q * row[i]

    def row_swap(self, i: int, t: int) -> None:
        if i == t:
            return
        for M in (self.D, self.U):
            M[i], M[t] = M[t], M[i]
        for row in self.U_inv:
            row[i], row[t] = row[t], row[i]

    def row_negate(self, t: int) -> None:
        for M in (self.D, self.U):
            M[t] = [-x for x in M[t]]
        for row in self.U_inv:
            row[t] = -row[t]

    # col j <- col j - q·col t
    def col_sub(self, j: int, t: int, q: int) -> None:
        if q == 0:
            return
        for M in (self.D, self.V):
            for row in M:
                row[j] -= q * row[t]
        src, dst = self.V_inv[j], self.V_inv[t]
        for k in range(len(dst)):
            dst[k] += q * src[k]

    def col_swap(self, j: int, t: int) -> None:
        if j == t:
            return
        for M in (self.D, self.V):
            for row in M:
                row[j], row[t] = row[t], row[j]
        self.V_inv[j], self.V_inv[t] = self.V_inv[t], self.V_inv[j]

    def move_least_to_start(self, s: int) -> bool:
        """Bring the least nonzero entry of the lower-right block to (s, s)."""
        best = None
        for i in range(s, self.rows):
            row = self.D[i]
            for j in range(s, self.cols):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            return False
        _, i, j = best
        self.row_swap(s, i)
        self.col_swap(s, j)
        return True

    def move_least_edge_to_start(self, s: int) -> None:
        """Least nonzero entry of row s / column s becomes the pivot."""
        best = (abs(self.D[s][s]), s, s)
        for i in range(s + 1, self.rows):
            x = self.D[i][s]
            if x != 0 and abs(x) < best[0]:
                best = (abs(x), i, s)
        for j in range(s + 1, self.cols):
            x = self.D[s][j]
            if x != 0 and abs(x) < best[0]:
                best = (abs(x), s, j)
        _, i, j = best
        if i != s:
            self.row_swap(s, i)
        elif j != s:
            self.col_swap(s, j)

    def modify_edging(self, s: int) -> None:
        pivot = self.D[s][s]
        for i in range(s + 1, self.rows):
            if self.D[i][s] != 0:
                self.row_sub(i, s, self.D[i][s] // pivot)
        for j in range(s + 1, self.cols):
            if self.D[s][j] != 0:
                self.col_sub(j, s, self.D[s][j] // pivot)

    def edging_is_zero(self, s: int) -> bool:
        return all(self.D[i][s] == 0 for i in range(s + 1, self.rows)) and all(
            self.D[s][j] == 0 for j in range(s + 1, self.cols)
        )

    def null_edging(self, s: int) -> None:
        while not self.edging_is_zero(s):
            self.move_least_edge_to_start(s)
            self.modify_edging(s)

    def first_non_divisible_row(self, s: int) -> Optional[int]:
        pivot = self.D[s][s]
        for i in range(s + 1, self.rows):
            row = self.D[i]
            for j in range(s + 1, self.cols):
                if row[j] % pivot != 0:
                    return i
        return None

    def ensure_divides(self, s: int) -> None:
        """Pivot divides the remaining block; otherwise fold a row in and re-clear."""
        while True:
            self.null_edging(s)
            i = self.first_non_divisible_row(s)
            if i is None:
                return
            # row s <- row s + row i
            self.row_sub(s, i, -1)


def smith_decomposition(matrix: Sequence[Sequence[int]], cols: Optional[int] = None) -> SmithResult:
    """
    Full Smith decomposition with inverses.

    Args:
        matrix: list of integer rows
        cols: column count, needed when the matrix has no rows
    """
    rows = len(matrix)
    if cols is None:
        cols = len(matrix[0]) if rows else 0
    work = _Elimination(matrix, rows, cols)
    diagonal: List[int] = []
    for s in range(min(rows, cols)):
        if not work.move_least_to_start(s):
            break
        work.ensure_divides(s)
        if work.D[s][s] < 0:
            work.row_negate(s)
        diagonal.append(work.D[s][s])
    result = SmithResult(work.U, work.D, work.V, work.U_inv, work.V_inv, tuple(diagonal))
    logger.debug(f"smith: {rows}x{cols}, rank {result.rank}")
    if get_settings().check_snf:
        if not check_smith_form(matrix, result.U, result.D, result.V, cols=cols):
            raise AssertionError(f"Smith normal form postcondition failed for {rows}x{cols} matrix")
    return result


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U·A·V = D, unimodular U and V, d₁ | d₂ | …"""
    result = smith_decomposition(matrix)
    return result.U, result.D, result.V


def _is_unimodular(M: IntMatrix) -> bool:
    if not M:
        return True
    return abs(sympy.Matrix(M).det()) == 1


def check_smith_form(
    A: Sequence[Sequence[int]],
    U: IntMatrix,
    D: IntMatrix,
    V: IntMatrix,
    cols: Optional[int] = None,
) -> bool:
    """Verify U·A·V = D, diagonal shape, the divisibility chain and unimodularity."""
    rows = len(A)
    if cols is None:
        cols = len(A[0]) if rows else 0
    if rows and mat_mul(mat_mul(U, A), V) != D:
        return False
    diagonal = []
    for i in range(rows):
        for j in range(cols):
            if i != j and D[i][j] != 0:
                return False
        if i < cols:
            diagonal.append(D[i][i])
    nonzero = [d for d in diagonal if d != 0]
    if any(d < 0 for d in nonzero):
        return False
    if diagonal[: len(nonzero)] != nonzero:
        return False
    for a, b in zip(nonzero, nonzero[1:]):
        if b % a != 0:
            return False
    return _is_unimodular(U) and _is_unimodular(V)


def solve_integer(
    smith: SmithResult,
    target: Sequence[int],
    cols: int,
) -> Optional[List[int]]:
    """
    Solve A·x = target over ℤ using a precomputed decomposition of A.

    Returns None when no integer solution exists.
    """
    rhs = mat_vec(smith.U, target)  # D·y = U·target, x = V·y
    y = [0] * cols
    for i, value in enumerate(rhs):
        if i < smith.rank:
            d = smith.diagonal[i]
            if value % d != 0:
                return None
            y[i] = value // d
        elif value != 0:
            return None
    return mat_vec(smith.V, y)
