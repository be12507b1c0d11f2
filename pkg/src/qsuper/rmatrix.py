"""Yang–Baxter data: the multiparameter R-matrix, Hecke sums, closure, projectors, rank."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import linalg
from .scalars import ONE, ZERO, Scalar, p, q, qpow
from .supertensor import LegOperator, SuperSpace


class NotClosedError(ArithmeticError):
    pass


class HeckeSumError(ValueError):
    pass


class RankBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ParameterSet:
    """Antisymmetric sign pattern ``epsilon[i][j]`` plus optional bindings for p_ij.

    ``p`` maps ``(i, j)`` with ``i < j`` to a Scalar; missing pairs stay symbolic.
    """

    epsilon: tuple[tuple[int, ...], ...]
    p: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        d = len(self.epsilon)
        for i in range(d):
            if len(self.epsilon[i]) != d:
                raise ValueError("epsilon must be square")
            for j in range(d):
                if i != j:
                    if self.epsilon[i][j] not in (1, -1):
                        raise ValueError("epsilon entries must be +1 or -1 off the diagonal")
                    if self.epsilon[j][i] != -self.epsilon[i][j]:
                        raise ValueError("epsilon must be antisymmetric")

    @classmethod
    def all_plus(cls, d: int, p=None) -> "ParameterSet":
        eps = tuple(tuple(0 if i == j else (1 if i < j else -1) for j in range(d)) for i in range(d))
        return cls(eps, dict(p or {}))

    @classmethod
    def from_upper(cls, d: int, upper: Mapping[tuple[int, int], int], p=None) -> "ParameterSet":
        """Build from ``{(i, j): ±1}`` for ``i < j`` (1-based); unspecified pairs default to +1."""
        eps = [[0] * d for _ in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                e = upper.get((i + 1, j + 1), 1)
                eps[i][j], eps[j][i] = e, -e
        return cls(tuple(map(tuple, eps)), dict(p or {}))

    @property
    def dim(self) -> int:
        return len(self.epsilon)

    def eps(self, i: int, j: int) -> int:
        """ε_ij for 1-based indices (0 on the diagonal)."""
        return self.epsilon[i - 1][j - 1]

    def pval(self, i: int, j: int) -> Scalar:
        if i == j:
            return ONE
        a, b = min(i, j), max(i, j)
        v = self.p.get((a, b), p(a, b))
        return v if i < j else v.inverse()

    def violations(self) -> list[tuple[int, int, int]]:
        bad = []
        for i, j, k in itertools.combinations(range(1, self.dim + 1), 3):
            if (self.eps(i, k) - self.eps(i, j)) * (self.eps(j, k) - self.eps(i, k)) != 0:
                bad.append((i, j, k))
        return bad

    def is_valid(self) -> bool:
        return not self.violations()


@dataclass
class Closure:
    S: LegOperator
    F: LegOperator
    G: LegOperator


@dataclass
class HeckeSymmetry:
    space: SuperSpace
    R: LegOperator
    q: Scalar
    closure: Optional[Closure] = None
    rank: Optional[int] = None
    params: Optional[ParameterSet] = None

    @property
    def dim(self) -> int:
        return self.space.dim


def build_multiparameter(m: int, n: int, params: ParameterSet | None = None, parity=None) -> HeckeSymmetry:
    """R^{kl}_{ij} from the multiparameter formula with p_ij q_ij = q^{ε_ij}.

    ``parity`` overrides the standard layout (m even basis vectors first).
    """
    space = SuperSpace(tuple(parity)) if parity is not None else SuperSpace.standard(m, n)
    d = space.dim
    if params is None:
        params = ParameterSet.all_plus(d)
    if params.dim != d:
        raise ValueError("parameter set dimension mismatch")
    qq = q()

    def act(idx):
        i, j = idx
        if i == j:
            return {(i, i): qq if space.par(i) == 0 else -ONE}
        pq = qpow(params.eps(i, j))
        denom = ONE + pq
        sign = -1 if space.par(i) and space.par(j) else 1
        return {(i, j): (qq - pq) / denom, (j, i): sign * params.pval(i, j) * (qq + 1) / denom}

    R = LegOperator.from_action(space, 2, act)
    return HeckeSymmetry(space, R, qq, params=params)


def one_parameter_even(d: int) -> HeckeSymmetry:
    """Even multiparameter R on a d-dim even space with every p_ij specialised to 1."""
    params = ParameterSet.all_plus(d, {(i, j): ONE for i, j in itertools.combinations(range(1, d + 1), 2)})
    return build_multiparameter(d, 0, params)


def check_hecke(h: HeckeSymmetry) -> LegOperator:
    """Residual ``(R+1)(R-q)``."""
    R = h.R
    return (R + 1) @ (R - h.q)


def check_ybe(h: HeckeSymmetry) -> LegOperator:
    R1 = h.R.embed(3, 1)
    R2 = h.R.embed(3, 2)
    return R1 @ R2 @ R1 - R2 @ R1 @ R2


# -- closure ------------------------------------------------------------------


def _twist(op: LegOperator):
    """Matrix M[(i,j),(m,n)] = op^{jn}_{im} (0-based pair flattening)."""
    d = op.space.dim
    N = d * d
    M = [[ZERO] * N for _ in range(N)]
    for (j, n) in itertools.product(range(1, d + 1), repeat=2):
        row = op.rows[op.space.flat((j, n))]
        for (i, mm) in itertools.product(range(1, d + 1), repeat=2):
            v = row[op.space.flat((i, mm))]
            if v:
                M[(i - 1) * d + (j - 1)][(mm - 1) * d + (n - 1)] = v
    return M


def _untwist(space: SuperSpace, M) -> LegOperator:
    """Inverse of :func:`_twist`: op^{ac}_{bd} = M[(a,b),(c,d)]."""
    d = space.dim

    def coeff(out, inn):
        a, c = out
        b, dd = inn
        return M[(a - 1) * d + (b - 1)][(c - 1) * d + (dd - 1)]

    return LegOperator.from_function(space, 2, coeff)


def compute_closure(h: HeckeSymmetry) -> Closure:
    """Solve ``R_{im}^{jn} S^{mk}_{nl} = S_{im}^{jn} R^{mk}_{nl} = δ_i^k δ_l^j``.

    Returns S together with the partial traces ``F_i^j = S^{lj}_{li}`` and
    ``G_i^j = S^{jl}_{il}`` as arity-1 operators (``entry((j,), (i,))``).
    """
    space = h.space
    d = space.dim
    try:
        S_twist = linalg.inverse(_twist(h.R))
    except linalg.SingularError as exc:
        raise NotClosedError(f"not closed: {exc}") from None
    S = _untwist(space, S_twist)
    # second equation: sum S^{jn}_{im} R^{mk}_{nl}
    prod = _matmul(_twist(S), _pair_form(h.R))
    N = d * d
    for a in range(N):
        for b in range(N):
            if prod[a][b] != (ONE if a == b else ZERO):
                raise NotClosedError("not closed: second twist equation fails")
    F = LegOperator.from_function(
        space, 1, lambda o, i: sum((S.entry((l, o[0]), (l, i[0])) for l in range(1, d + 1)), ZERO)
    )
    G = LegOperator.from_function(
        space, 1, lambda o, i: sum((S.entry((o[0], l), (i[0], l)) for l in range(1, d + 1)), ZERO)
    )
    return Closure(S, F, G)


def _pair_form(op: LegOperator):
    """Matrix M[(a,b),(c,d)] = op^{ac}_{bd}, the layout inverse to :func:`_untwist`."""
    d = op.space.dim
    N = d * d
    M = [[ZERO] * N for _ in range(N)]
    for (a, c) in itertools.product(range(1, d + 1), repeat=2):
        row = op.rows[op.space.flat((a, c))]
        for (b, e) in itertools.product(range(1, d + 1), repeat=2):
            v = row[op.space.flat((b, e))]
            if v:
                M[(a - 1) * d + (b - 1)][(c - 1) * d + (e - 1)] = v
    return M


def _matmul(A, B):
    n = len(A)
    out = [[ZERO] * len(B[0]) for _ in range(n)]
    for i in range(n):
        for k, a in enumerate(A[i]):
            if not a:
                continue
            Bk = B[k]
            for j, b in enumerate(Bk):
                if b:
                    out[i][j] = out[i][j] + a * b
    return out


def reflection_diagonal_formula(space: SuperSpace) -> list[Scalar]:
    """The printed diagonal ``G_k = -(-1)^{k̂} q^{k_+ - k_-}`` for the standard layout."""
    out = []
    plus = minus = 0
    for k in range(1, space.dim + 1):
        if space.par(k):
            minus += 1
        else:
            plus += 1
        sign = 1 if space.par(k) else -1
        out.append(sign * qpow(plus - minus))
    return out


def f_contraction(h: HeckeSymmetry, closure: Closure | None = None) -> LegOperator:
    """Arity-1 operator ``sum_{i,j} F_j^i R^{jk}_{il}``; identity for closed even R."""
    c = closure or h.closure or compute_closure(h)
    d = h.dim
    rng = range(1, d + 1)

    def coeff(o, i):
        k, l = o[0], i[0]
        return sum((c.F.entry((a,), (b,)) * h.R.entry((b, k), (a, l)) for a in rng for b in rng), ZERO)

    return LegOperator.from_function(h.space, 1, coeff)


def with_closure(h: HeckeSymmetry) -> HeckeSymmetry:
    if h.closure is None:
        h.closure = compute_closure(h)
    return h


# -- Hecke sums ---------------------------------------------------------------


def multiparameter_crossing(m: int, n: int, params: ParameterSet | None = None) -> LegOperator:
    """The block ``P: x_i ⊗ x_j -> p_ij x_j ⊗ x_i`` (i even, j odd) of the multiparameter R.

    Returned as an arity-2 operator on the full (m|n) space, zero off ``V0⊗V1``.
    """
    space = SuperSpace.standard(m, n)
    params = params or ParameterSet.all_plus(m + n)

    def act(idx):
        i, j = idx
        if space.par(i) == 0 and space.par(j) == 1:
            return {(j, i): params.pval(i, j)}
        return {}

    return LegOperator.from_action(space, 2, act)


def _crossing_inverse(P: LegOperator, space: SuperSpace):
    """Inverse of the ``V0⊗V1 -> V1⊗V0`` block, as a map ``V1⊗V0 -> V0⊗V1``."""
    even = [i for i in range(1, space.dim + 1) if space.par(i) == 0]
    odd = [i for i in range(1, space.dim + 1) if space.par(i) == 1]
    cols = [(i, j) for i in even for j in odd]
    rows = [(j, i) for j in odd for i in even]
    block = [[P.entry(r, c) for c in cols] for r in rows]
    try:
        inv = linalg.inverse(block)
    except linalg.SingularError as exc:
        raise HeckeSumError(f"crossing is not invertible: {exc}") from None
    out = LegOperator.zero(space, 2)
    for a, c in enumerate(cols):
        for b, r in enumerate(rows):
            if inv[a][b]:
                out.rows[space.flat(c)][space.flat(r)] = inv[a][b]
    return out


def _pad(h: HeckeSymmetry, space: SuperSpace, offset: int) -> LegOperator:
    """Extend an operator on a block of V by zero."""
    d = h.dim

    def act(idx):
        if any(i <= offset or i > offset + d for i in idx):
            return {}
        local = tuple(i - offset for i in idx)
        return {tuple(o + offset for o in out): v for out, v in h.R.action(local).items()}

    return LegOperator.from_action(space, 2, act)


def eqforp_residuals(Re: HeckeSymmetry, Ro: HeckeSymmetry, P: LegOperator) -> dict:
    """Residuals of ``Q_2Q_1Re_2 = Re_1Q_2Q_1`` and ``Q_1Q_2Ro_1 = Ro_2Q_1Q_2``.

    ``Q = qP^{-1}`` is the crossing ``V1⊗V0 -> V0⊗V1``; scaling does not affect
    either homogeneous equation.
    """
    space = P.space
    m = Re.dim
    W = _crossing_inverse(P, space)
    E, O = _pad(Re, space, 0), _pad(Ro, space, m)
    W1, W2 = W.embed(3, 1), W.embed(3, 2)
    first = W2 @ W1 @ E.embed(3, 2) - E.embed(3, 1) @ W2 @ W1
    second = W1 @ W2 @ O.embed(3, 1) - O.embed(3, 2) @ W1 @ W2
    return {"P2P1Re2=Re1P2P1": first, "P1P2Ro1=Ro2P1P2": second}


def hecke_sum(Re: HeckeSymmetry, Ro: HeckeSymmetry, P: LegOperator) -> HeckeSymmetry:
    """Assemble the block operator with blocks Re, Ro, P, Q = qP^{-1} and (q-1)I.

    ``Re`` lives on the even part (indices 1..m), ``Ro`` on the odd part
    (m+1..m+n).  ``P`` is given on the full space as the block mapping
    ``x_i⊗x_j`` (i even, j odd) into ``V1⊗V0``.
    """
    if any(Re.space.parity) or not all(Ro.space.parity):
        raise HeckeSumError("Re must be on an even space and Ro on an odd space")
    m, n = Re.dim, Ro.dim
    space = SuperSpace.standard(m, n)
    if P.space != space or P.arity != 2:
        raise HeckeSumError("crossing must be an arity-2 operator on the combined space")
    if Re.q != Ro.q:
        raise HeckeSumError("Re and Ro must share q")
    qq = Re.q
    for name, res in eqforp_residuals(Re, Ro, P).items():
        if not res.is_zero():
            raise HeckeSumError(f"crossing violates {name}")
    Q = _crossing_inverse(P, space).scale(qq)
    rows = [list(r) for r in (_pad(Re, space, 0) + _pad(Ro, space, m) + P + Q).rows]
    for j in range(m + 1, m + n + 1):
        for i in range(1, m + 1):
            f = space.flat((j, i))
            rows[f][f] = rows[f][f] + (qq - 1)
    return HeckeSymmetry(space, LegOperator(space, 2, rows), qq)


def restrict_symmetry(h: HeckeSymmetry, indices) -> HeckeSymmetry:
    return HeckeSymmetry(h.space.restrict(indices), h.R.restrict(indices), h.q)


# -- projectors and rank ------------------------------------------------------


def _stacked(h: HeckeSymmetry, k: int, shift: Scalar):
    """Sparse rows of all ``R_i - shift`` on V^{⊗k}, stacked."""
    rows = []
    for i in range(1, k):
        op = h.R.embed(k, i) - shift
        rows.extend(linalg.dense_to_rows(op.rows))
    return rows


def _spectral_projector(h: HeckeSymmetry, k: int, eigen: Scalar) -> LegOperator:
    N = h.dim**k
    if k == 1:
        return LegOperator.identity(h.space, 1)
    rows = _stacked(h, k, eigen)
    reduced, pivots = linalg.rref(rows, order=list(range(N)))
    pivot_set = set(pivots)
    free = [c for c in range(N) if c not in pivot_set]
    # right kernel basis (columns of K)
    K = []
    for f in free:
        vec = {f: ONE}
        for piv, row in zip(pivots, reduced):
            v = row.get(f)
            if v:
                vec[piv] = -v
        K.append(vec)
    # left kernel: rows w with w (R_i - eigen) = 0, i.e. kernel of the transposes
    trows = []
    for i in range(1, k):
        op = h.R.embed(k, i) - eigen
        cols: list[dict] = [dict() for _ in range(N)]
        for r, row in enumerate(op._nonzero_rows):
            for c, v in row:
                cols[c][r] = v
        trows.extend(cols)
    treduced, tpivots = linalg.rref(trows, order=list(range(N)))
    tpset = set(tpivots)
    W = []
    for f in (c for c in range(N) if c not in tpset):
        vec = {f: ONE}
        for piv, row in zip(tpivots, treduced):
            v = row.get(f)
            if v:
                vec[piv] = -v
        W.append(vec)
    if len(W) != len(K):
        raise ArithmeticError("image and kernel are not complementary")
    if not K:
        return LegOperator.zero(h.space, k)
    WK = [[sum((w.get(c, ZERO) * v for c, v in kv.items()), ZERO) for kv in K] for w in W]
    try:
        M = linalg.inverse(WK)
    except linalg.SingularError:
        raise ArithmeticError("image and kernel are not complementary") from None
    # Phi = K M W
    r = len(K)
    MW = []
    for a in range(r):
        acc: dict = {}
        for b in range(r):
            if M[a][b]:
                for c, v in W[b].items():
                    acc[c] = acc.get(c, ZERO) + M[a][b] * v
        MW.append(acc)
    out = [[ZERO] * N for _ in range(N)]
    for a in range(r):
        for row_idx, kv in K[a].items():
            for c, v in MW[a].items():
                if v:
                    out[row_idx][c] = out[row_idx][c] + kv * v
    return LegOperator(h.space, k, out)


def extreme_projectors(h: HeckeSymmetry, k: int) -> tuple[LegOperator, LegOperator]:
    """``(Phi_minus, Phi_plus)`` on V^{⊗k}: spectral projectors for eigenvalue -1 (resp. q) of every R_i."""
    return _spectral_projector(h, k, -ONE), _spectral_projector(h, k, h.q)


def lambda_dimension(h: HeckeSymmetry, k: int) -> int:
    """``dim ∩_i ker(R_i + 1)`` on V^{⊗k}."""
    if k == 0:
        return 1
    if k == 1:
        return h.dim
    return h.dim**k - linalg.rank(_stacked(h, k, -ONE))


def odd_to_even(h: HeckeSymmetry) -> HeckeSymmetry:
    """The operator ``-q R^{-1}``."""
    return HeckeSymmetry(h.space, h.R.invert().scale(-h.q), h.q)


def rank(h: HeckeSymmetry, bound: int | None = None, odd: bool = False) -> int:
    """Top nonvanishing degree of the exterior algebra (of ``-qR^{-1}`` when ``odd``)."""
    target = odd_to_even(h) if odd else h
    bound = bound if bound is not None else h.dim + 1
    for k in range(1, bound + 1):
        if lambda_dimension(target, k) == 0:
            return k - 1
    raise RankBoundExceeded("rank bound exceeded")
