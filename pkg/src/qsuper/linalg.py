"""Exact Gauss-Jordan elimination over :class:`~qsuper.scalars.Scalar`.

Rows are sparse dicts ``{column: Scalar}``; this keeps the relation and
block-matrix systems (which are very sparse) cheap.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .scalars import ONE, ZERO, Scalar

SparseRow = dict


class SingularError(ArithmeticError):
    """Raised by :func:`inverse` for a singular matrix; carries the kernel dimension."""

    def __init__(self, kernel_dim: int):
        super().__init__(f"singular operator (kernel dimension {kernel_dim})")
        self.kernel_dim = kernel_dim


def _weight(s: Scalar) -> int:
    return len(s.num) + len(s.den)


def rref(rows: Iterable[SparseRow], order: Sequence[Hashable] | None = None):
    """Reduced row echelon form of sparse rows.

    ``order`` ranks the columns: pivots are taken at the earliest column of
    each row in this order.  Returns ``(reduced_rows, pivot_columns)`` with
    every reduced row normalised to a unit pivot.
    """
    rows = [{c: v for c, v in r.items() if v} for r in rows]
    rows = [r for r in rows if r]
    if order is None:
        cols = set()
        for r in rows:
            cols.update(r)
        order = sorted(cols)
    rank_of = {c: k for k, c in enumerate(order)}

    basis: dict = {}  # pivot column -> row
    for row in rows:
        row = dict(row)
        # eliminate every known pivot column (pivot rows are fully reduced,
        # so one pass suffices)
        for piv in [c for c in row if c in basis]:
            factor = row.get(piv)
            if not factor:
                continue
            for c, v in basis[piv].items():
                nv = row.get(c, ZERO) - factor * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        if row:
            lead = min(row, key=rank_of.__getitem__)
            inv = row[lead].inverse()
            row = {c: v * inv for c, v in row.items()}
            # back-substitute into existing rows
            for piv, other in basis.items():
                if lead in other:
                    factor = other[lead]
                    for c, v in row.items():
                        nv = other.get(c, ZERO) - factor * v
                        if nv:
                            other[c] = nv
                        else:
                            other.pop(c, None)
            basis[lead] = row
    pivots = sorted(basis, key=rank_of.__getitem__)
    return [basis[p] for p in pivots], pivots


def rank(rows: Iterable[SparseRow]) -> int:
    return len(rref(rows)[0])


def dense_to_rows(matrix: Sequence[Sequence[Scalar]]) -> list[SparseRow]:
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]


def nullspace(matrix: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of the right kernel of a dense matrix."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = rref(dense_to_rows(matrix), order=list(range(ncols)))
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for piv, row in zip(pivots, reduced):
            v = row.get(f)
            if v:
                vec[piv] = -v
        basis.append(vec)
    return basis


def inverse(matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n = len(matrix)
    rows = []
    for i, row in enumerate(matrix):
        r = {j: v for j, v in enumerate(row) if v}
        r[n + i] = ONE
        rows.append(r)
    reduced, pivots = rref(rows, order=list(range(2 * n)))
    if len(pivots) < n or pivots[n - 1] >= n:
        k = sum(1 for p in pivots if p < n)
        raise SingularError(n - k)
    out = []
    for row in reduced:
        out.append([row.get(n + j, ZERO) for j in range(n)])
    return out


def solve(rows: Sequence[SparseRow], rhs: Sequence[Scalar], unknowns: Sequence[Hashable]):
    """Solve ``rows · x = rhs``; returns a dict or ``None`` if inconsistent.

    Free unknowns are set to zero.
    """
    marker = object()
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[marker] = b
        aug.append(row)
    reduced, pivots = rref(aug, order=list(unknowns) + [marker])
    if marker in pivots:
        return None
    return {p: row.get(marker, ZERO) for p, row in zip(pivots, reduced)}
