"""Super vector spaces and dense exact operators on their tensor powers.

Multi-indices are 1-based tuples ``(i_1, ..., i_k)``; the flat position is
``sum((i_j - 1) * d**(k - j))`` (row-major).  For an operator ``R`` of arity
2, ``R.entries[(k,l)][(i,j)]`` is the coefficient ``R^{kl}_{ij}`` in
``R(x_i ⊗ x_j) = x_k ⊗ x_l R^{kl}_{ij}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .scalars import ONE, ZERO, Scalar, ScalarLike, parse_scalar


@dataclass(frozen=True)
class SuperSpace:
    """Basis ``x_1..x_d`` with parities (0 even, 1 odd)."""

    parity: tuple[int, ...]

    def __post_init__(self):
        if not self.parity:
            raise ValueError("dimension must be positive")
        if any(b not in (0, 1) for b in self.parity):
            raise ValueError("parities must be 0 or 1")

    @classmethod
    def standard(cls, m: int, n: int) -> "SuperSpace":
        if m < 0 or n < 0 or m + n < 1:
            raise ValueError("need m, n >= 0 and m + n >= 1")
        return cls((0,) * m + (1,) * n)

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def m(self) -> int:
        return self.parity.count(0)

    @property
    def n(self) -> int:
        return self.parity.count(1)

    def is_standard(self) -> bool:
        return self.parity == (0,) * self.m + (1,) * self.n

    def par(self, i: int) -> int:
        """Parity of x_i (1-based)."""
        return self.parity[i - 1]

    def multi_indices(self, k: int):
        return itertools.product(range(1, self.dim + 1), repeat=k)

    def flat(self, idx) -> int:
        pos = 0
        for i in idx:
            pos = pos * self.dim + (i - 1)
        return pos

    def unflat(self, pos: int, k: int) -> tuple[int, ...]:
        out = []
        for _ in range(k):
            pos, r = divmod(pos, self.dim)
            out.append(r + 1)
        return tuple(reversed(out))

    def total_parity(self, idx) -> int:
        return sum(self.parity[i - 1] for i in idx) % 2

    def restrict(self, indices) -> "SuperSpace":
        return SuperSpace(tuple(self.parity[i - 1] for i in indices))


class ArityError(ValueError):
    pass


class LegOperator:
    """Dense exact linear map on ``V^{⊗k}``."""

    __slots__ = ("space", "arity", "rows", "__dict__")

    def __init__(self, space: SuperSpace, arity: int, rows):
        if arity < 1:
            raise ArityError("arity must be positive")
        self.space = space
        self.arity = arity
        n = space.dim**arity
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"expected a {n}x{n} matrix")
        self.rows = [list(r) for r in rows]

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, space: SuperSpace, arity: int) -> "LegOperator":
        n = space.dim**arity
        return cls(space, arity, [[ZERO] * n for _ in range(n)])

    @classmethod
    def identity(cls, space: SuperSpace, arity: int) -> "LegOperator":
        n = space.dim**arity
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = ONE
        return cls(space, arity, rows)

    @classmethod
    def from_function(cls, space: SuperSpace, arity: int, coeff) -> "LegOperator":
        """``coeff(out_idx, in_idx)`` returns the entry (1-based multi-indices)."""
        op = cls.zero(space, arity)
        idxs = list(space.multi_indices(arity))
        for o in idxs:
            row = op.rows[space.flat(o)]
            for i in idxs:
                v = coeff(o, i)
                if v:
                    row[space.flat(i)] = Scalar.coerce(v)
        return op

    @classmethod
    def from_action(cls, space: SuperSpace, arity: int, action) -> "LegOperator":
        """``action(in_idx)`` returns ``{out_idx: coefficient}``."""
        op = cls.zero(space, arity)
        for i in space.multi_indices(arity):
            col = space.flat(i)
            for o, v in action(i).items():
                if v:
                    op.rows[space.flat(o)][col] = op.rows[space.flat(o)][col] + Scalar.coerce(v)
        return op

    # -- access -------------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, out_idx, in_idx) -> Scalar:
        return self.rows[self.space.flat(out_idx)][self.space.flat(in_idx)]

    def __getitem__(self, key) -> Scalar:
        out_idx, in_idx = key
        return self.entry(out_idx, in_idx)

    @cached_property
    def _nonzero_rows(self):
        return [[(j, v) for j, v in enumerate(r) if v] for r in self.rows]

    def action(self, in_idx) -> dict:
        """Image of the basis tensor ``x_{in_idx}`` as ``{out_idx: coeff}``."""
        col = self.space.flat(in_idx)
        k = self.arity
        return {self.space.unflat(r, k): row[col] for r, row in enumerate(self.rows) if row[col]}

    def nonzero_count(self) -> int:
        return sum(len(r) for r in self._nonzero_rows)

    # -- algebra ------------------------------------------------------------
    def _check(self, other: "LegOperator") -> None:
        if not isinstance(other, LegOperator):
            raise TypeError("expected a LegOperator")
        if other.arity != self.arity or other.space != self.space:
            raise ArityError(
                f"arity/space mismatch: {self.arity} on {self.space.parity} vs "
                f"{other.arity} on {other.space.parity}"
            )

    def __add__(self, other: "LegOperator") -> "LegOperator":
        if not isinstance(other, LegOperator):
            return self + self.identity(self.space, self.arity).scale(other)
        self._check(other)
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return LegOperator(self.space, self.arity, rows)

    __radd__ = __add__

    def __neg__(self) -> "LegOperator":
        return LegOperator(self.space, self.arity, [[-v for v in r] for r in self.rows])

    def __sub__(self, other) -> "LegOperator":
        if not isinstance(other, LegOperator):
            return self + (-Scalar.coerce(other))
        return self + (-other)

    def __rsub__(self, other) -> "LegOperator":
        return (-self) + other

    def scale(self, c: ScalarLike) -> "LegOperator":
        c = Scalar.coerce(c)
        return LegOperator(self.space, self.arity, [[c * v if v else ZERO for v in r] for r in self.rows])

    def __rmul__(self, c) -> "LegOperator":
        return self.scale(c)

    def __matmul__(self, other: "LegOperator") -> "LegOperator":
        """Composition ``self ∘ other``."""
        self._check(other)
        n = self.size
        right = other._nonzero_rows
        rows = []
        for lrow in self._nonzero_rows:
            acc: dict[int, Scalar] = {}
            for k, a in lrow:
                for j, b in right[k]:
                    acc[j] = acc.get(j, ZERO) + a * b
            row = [ZERO] * n
            for j, v in acc.items():
                row[j] = v
            rows.append(row)
        return LegOperator(self.space, self.arity, rows)

    def __mul__(self, other):
        if isinstance(other, LegOperator):
            return self @ other
        return self.scale(other)

    def __pow__(self, k: int) -> "LegOperator":
        if k < 0:
            return self.invert() ** (-k)
        out = LegOperator.identity(self.space, self.arity)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LegOperator):
            return NotImplemented
        return self.space == other.space and self.arity == other.arity and self.rows == other.rows

    __hash__ = None

    def is_zero(self) -> bool:
        return all(not v for r in self.rows for v in r)

    def is_identity(self) -> bool:
        return self == LegOperator.identity(self.space, self.arity)

    def invert(self) -> "LegOperator":
        return LegOperator(self.space, self.arity, linalg.inverse(self.rows))

    def rank(self) -> int:
        return linalg.rank(linalg.dense_to_rows(self.rows))

    def trace(self) -> Scalar:
        t = ZERO
        for i, r in enumerate(self.rows):
            t = t + r[i]
        return t

    def is_parity_preserving(self) -> bool:
        k = self.arity
        for r, row in enumerate(self.rows):
            pr = self.space.total_parity(self.space.unflat(r, k))
            for c, v in enumerate(row):
                if v and self.space.total_parity(self.space.unflat(c, k)) != pr:
                    return False
        return True

    # -- tensor structure ---------------------------------------------------
    def embed(self, total_arity: int, position: int) -> "LegOperator":
        """Act on legs ``position .. position+arity-1`` of ``V^{⊗total_arity}``."""
        j = self.arity
        if position < 1 or position + j - 1 > total_arity:
            raise ArityError(f"position {position} out of range for arity {j} in {total_arity}")
        sp = self.space
        before, after = position - 1, total_arity - position - j + 1
        idx_before = list(sp.multi_indices(before))
        idx_after = list(sp.multi_indices(after))
        local = [(sp.unflat(r, j), [(sp.unflat(c, j), v) for c, v in row]) for r, row in enumerate(self._nonzero_rows)]
        n = sp.dim**total_arity
        rows = [[ZERO] * n for _ in range(n)]
        for a in idx_before:
            for b in idx_after:
                for out_mid, entries in local:
                    r = sp.flat(a + out_mid + b)
                    for in_mid, v in entries:
                        rows[r][sp.flat(a + in_mid + b)] = v
        return LegOperator(sp, total_arity, rows)

    def restrict(self, indices) -> "LegOperator":
        """Block on the sub-basis ``indices`` (1-based) of V, all legs restricted."""
        sub = self.space.restrict(indices)
        k = self.arity
        idxs = list(itertools.product(indices, repeat=k))
        rows = []
        for o in idxs:
            r = self.rows[self.space.flat(o)]
            rows.append([r[self.space.flat(i)] for i in idxs])
        return LegOperator(sub, k, rows)

    # -- other views --------------------------------------------------------
    def to_modular(self, point, prime: int) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=np.int64)
        cache: dict = {}
        for r, row in enumerate(self._nonzero_rows):
            for c, v in row:
                key = id(v)
                if key not in cache:
                    cache[key] = v.evaluate_mod(point, prime)
                out[r, c] = cache[key]
        return out

    def specialize(self, bindings) -> "LegOperator":
        rows = [[v.specialize(bindings) if v else ZERO for v in r] for r in self.rows]
        return LegOperator(self.space, self.arity, rows)

    def to_json(self) -> dict:
        return {
            "parity": list(self.space.parity),
            "arity": self.arity,
            "entries": [[str(v) for v in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data) -> "LegOperator":
        if isinstance(data, str):
            data = json.loads(data)
        space = SuperSpace(tuple(data["parity"]))
        rows = [[parse_scalar(s) for s in r] for r in data["entries"]]
        return cls(space, data["arity"], rows)

    def __repr__(self):
        return f"LegOperator(dim={self.space.dim}, arity={self.arity}, nnz={self.nonzero_count()})"


def permutation_operator(space: SuperSpace, signed: bool = False) -> LegOperator:
    """The flip ``x_i ⊗ x_j -> x_j ⊗ x_i`` (with super sign if ``signed``)."""

    def act(idx):
        i, j = idx
        sign = -1 if signed and space.par(i) and space.par(j) else 1
        return {(j, i): sign}

    return LegOperator.from_action(space, 2, act)
