# Exact linear algebra over a Field: dense inversion and a tracked sparse echelon
import heapq
from typing import Hashable, Optional, Sequence

from .scalars import Field, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]
SparseVector = dict[int, Scalar]


def identity_matrix(field: Field, n: int) -> Matrix:
    """Construct an n x n identity matrix."""
    return tuple(
        tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)
    )


def matmul(field: Field, a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    result = []
    for row in a:
        out = []
        for j in range(len(b[0])):
            total = field.zero
            for k, value in enumerate(row):
                total = total + value * b[k][j]
            out.append(total)
        result.append(tuple(out))
    return tuple(result)


def invert_matrix(field: Field, rows: Sequence[Sequence[Scalar]]) -> tuple[int, Optional[Matrix]]:
    """
    Gauss-Jordan elimination on [X | I] with the leftmost usable pivot.

    Returns:
        (rank, inverse) where inverse is None unless the matrix is invertible
    """
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError(f"matrix is not square ({n} rows)")

    work = [list(row) + list(unit) for row, unit in zip(rows, identity_matrix(field, n))]
    rank = 0

    for col in range(n):
        pivot = next((r for r in range(rank, n) if not field.is_zero(work[r][col])), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]

        scale = work[rank][col]
        work[rank] = [value / scale for value in work[rank]]

        for r in range(n):
            if r == rank or field.is_zero(work[r][col]):
                continue
            factor = work[r][col]
            work[r] = [value - factor * pivot_value for value, pivot_value in zip(work[r], work[rank])]
        rank += 1

    if rank < n:
        return rank, None
    return rank, tuple(tuple(row[n:]) for row in work)


class TrackedEchelon:
    """Sparse row-echelon basis that remembers where every row came from.

    Coordinates are integers; a row's pivot is its least coordinate and the
    pivot coefficient is one. Each inserted vector carries a label, and any
    combination of basis rows can be rewritten as a combination of labels.
    """

    def __init__(self, field: Field):
        self.field = field
        self._rows: list[SparseVector] = []
        self._pivot_row: dict[int, int] = {}
        self._labels: list[Hashable] = []
        self._scales: list[Scalar] = []
        self._steps: list[SparseVector] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._pivot_row)

    def rows(self) -> list[SparseVector]:
        return [dict(row) for row in self._rows]

    def reduce(self, vector: SparseVector) -> tuple[SparseVector, SparseVector]:
        """
        Reduce a vector by the basis.

        Returns:
            (remainder, used) with vector = remainder + Σ used[r]·row_r and no
            remainder coordinate equal to a pivot
        """
        zero = self.field.zero
        remainder = {c: v for c, v in vector.items() if not self.field.is_zero(v)}
        used: SparseVector = {}
        heap = list(remainder)
        heapq.heapify(heap)
        queued = set(remainder)

        while heap:
            coord = heapq.heappop(heap)
            coeff = remainder.get(coord)
            row_id = self._pivot_row.get(coord)
            if coeff is None or row_id is None:
                continue
            used[row_id] = coeff
            for c, value in self._rows[row_id].items():
                updated = remainder.get(c, zero) - coeff * value
                if self.field.is_zero(updated):
                    remainder.pop(c, None)
                else:
                    remainder[c] = updated
                if c not in queued:
                    queued.add(c)
                    heapq.heappush(heap, c)

        return remainder, used

    def insert(self, vector: SparseVector, label: Hashable) -> tuple[bool, SparseVector]:
        """
        Add a labelled vector to the span.

        Returns:
            (True, used) if the vector was independent, otherwise (False, used)
            where used expresses the vector through existing rows
        """
        remainder, used = self.reduce(vector)
        if not remainder:
            return False, used

        pivot = min(remainder)
        scale = remainder[pivot]
        self._rows.append({c: v / scale for c, v in remainder.items()})
        self._pivot_row[pivot] = len(self._rows) - 1
        self._labels.append(label)
        self._scales.append(scale)
        self._steps.append(used)
        return True, used

    def expand(self, combination: SparseVector) -> dict[Hashable, Scalar]:
        """Rewrite Σ combination[r]·row_r as a combination of inserted labels."""
        zero = self.field.zero
        pending = {r: c for r, c in combination.items() if not self.field.is_zero(c)}
        heap = [-r for r in pending]
        heapq.heapify(heap)
        result: dict[Hashable, Scalar] = {}

        # row_r = (vector_r - Σ steps_r[s]·row_s) / scale_r, and s < r always
        while heap:
            row_id = -heapq.heappop(heap)
            coeff = pending.pop(row_id, zero)
            if self.field.is_zero(coeff):
                continue
            factor = coeff / self._scales[row_id]
            label = self._labels[row_id]
            result[label] = result.get(label, zero) + factor
            for s, value in self._steps[row_id].items():
                if s not in pending:
                    heapq.heappush(heap, -s)
                pending[s] = pending.get(s, zero) - factor * value

        return {label: c for label, c in result.items() if not self.field.is_zero(c)}

    def reduced_rows(self) -> list[SparseVector]:
        """The reduced row-echelon basis (no pivot coordinate outside its own row)."""
        reduced = TrackedEchelon(self.field)
        by_pivot: dict[int, SparseVector] = {}
        for pivot in sorted(self._pivot_row, reverse=True):
            remainder, _ = reduced.reduce(self._rows[self._pivot_row[pivot]])
            reduced._rows.append(remainder)
            reduced._pivot_row[pivot] = len(reduced._rows) - 1
            by_pivot[pivot] = remainder
        return [by_pivot[p] for p in sorted(by_pivot)]
