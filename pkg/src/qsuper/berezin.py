"""Quantum determinants, the quantum Berezinian and block calculus.

Matrices are lists of rows; ``M[r][c]`` is the entry with upper index ``r``
and lower index ``c`` (so ``Z[r][c] = z_c^r``).  Entries are any ring
elements supporting ``+``, ``*`` and ``scale`` (:class:`NCPolynomial` or
:class:`~qsuper.ncalg.localize.LocElement`).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

from . import linalg
from .ncalg.localize import LocalizedAlgebra, LocElement, adjoin_inverse
from .ncalg.poly import NCPolynomial
from .ncalg.relations import generate_relations
from .ncalg.rewrite import Presentation
from .rmatrix import (
    HeckeSymmetry,
    compute_closure,
    extreme_projectors,
    rank as hecke_rank,
    restrict_symmetry,
)
from .scalars import ONE, ZERO, Scalar, p, q, qpow

MAX_PERM_SIZE = 4


class OddEntryError(ValueError):
    pass


class EngineInconsistency(RuntimeError):
    pass


# -- permutation sums --------------------------------------------------------


def inversion_coeff(sigma: Sequence[int], idx: Sequence[int], pair: Callable[[int, int], Scalar]) -> Scalar:
    """``Π pair(idx[σ(i)], idx[σ(j)])`` over inversions ``i<j, σ(i)>σ(j)``."""
    c = ONE
    k = len(sigma)
    for i in range(k):
        for j in range(i + 1, k):
            if sigma[i] > sigma[j]:
                c = c * pair(idx[sigma[i]], idx[sigma[j]])
    return c


def minus_p(a: int, b: int) -> Scalar:
    return -p(a, b)


def inv_q(a: int, b: int) -> Scalar:
    return qpow(-1)


def _product(factors):
    out = None
    for f in factors:
        out = f if out is None else out * f
    return out


def _check_size(k: int) -> None:
    if k > MAX_PERM_SIZE:
        raise ValueError(f"permutation sums are capped at size {MAX_PERM_SIZE}")


def perm_det(entry: Callable[[int, int], object], idx: Sequence[int], pair, tau=None, over: str = "upper"):
    """``Σ_σ c(σ)/c(τ) Π_i entry(lower, upper)`` with ``c`` the inversion product of ``pair``.

    ``over="upper"``: lower index ``idx[τ(i)]``, upper ``idx[σ(i)]`` (Z-type).
    ``over="lower"``: upper index ``idx[τ(i)]``, lower ``idx[σ(i)]`` (T-type).
    """
    k = len(idx)
    _check_size(k)
    tau = tuple(range(k)) if tau is None else tuple(tau)
    norm = inversion_coeff(tau, idx, pair).inverse()
    total = None
    for sigma in itertools.permutations(range(k)):
        c = inversion_coeff(sigma, idx, pair) * norm
        if over == "upper":
            term = _product(entry(idx[tau[i]], idx[sigma[i]]) for i in range(k))
        else:
            term = _product(entry(idx[sigma[i]], idx[tau[i]]) for i in range(k))
        term = term.scale(c)
        total = term if total is None else total + term
    return total


def _check_even(entry, idx) -> None:
    for a in idx:
        for b in idx:
            e = entry(a, b)
            par = e.parity() if hasattr(e, "parity") else 0
            if par:
                raise OddEntryError(f"odd entry at ({a},{b})")


def det_even(entry, idx, tau=None):
    """Permutation formula with coefficients ``σ(-p)/τ(-p)``."""
    _check_even(entry, idx)
    return perm_det(entry, idx, minus_p, tau)


def det_odd(entry, idx, theta=None):
    """Permutation formula with coefficients ``σ(q^-1)/θ(q^-1)`` (one-parameter odd determinant)."""
    _check_even(entry, idx)
    return perm_det(entry, idx, inv_q, theta)


def swap_table(pres: Presentation) -> dict:
    """``{(a, b): c}`` for rules ``x[a]*x[b] -> c*x[b]*x[a]`` with ``a > b``."""
    out = {}
    for lhs, rhs in pres.rule_polys():
        ((word, _),) = lhs.terms.items()
        if len(word) != 2 or word[0].lower <= word[1].lower:
            continue
        if len(rhs.terms) == 1:
            ((w2, c),) = rhs.terms.items()
            if w2 == (word[1], word[0]):
                out[(word[0].lower, word[1].lower)] = c
    return out


def coaction_det(entry, idx, table: dict, over: str = "upper", tau=None):
    """Determinant induced by the top component of a quadratic algebra with swap rules ``table``."""

    def pair(a, b):
        c = table.get((a, b))
        if c is None:
            raise ValueError(f"no swap rule for indices ({a},{b})")
        return c

    return perm_det(entry, idx, pair, tau, over)


# -- projector formula ------------------------------------------------------


def det_projector(entry, h_block: HeckeSymmetry, idx: Sequence[int], r: Optional[int] = None,
                  eigen: str = "minus", prefactor: Optional[Scalar] = None):
    """``c · Σ F_J^I Φ_K^J M_I^K`` over multi-indices of length r.

    ``h_block`` acts on the block's own basis ``1..len(idx)``; ``idx`` maps it
    to global indices.  With ``prefactor=None`` the even case uses
    ``q^{r(r+1)/2}`` and the odd case the value making the counit equal 1.
    Returns ``(det, counit_before_prefactor)``.
    """
    k = len(idx)
    if r is None:
        r = hecke_rank(h_block) if eigen == "minus" else k
    if r != k:
        raise ValueError(f"rank {r} does not match block size {k}")
    closure = h_block.closure or compute_closure(h_block)
    F = closure.F
    phi_minus, phi_plus = extreme_projectors(h_block, r)
    Phi = phi_minus if eigen == "minus" else phi_plus
    multi = list(itertools.product(range(1, k + 1), repeat=r))
    Fm = {}
    for I in multi:
        for J in multi:
            c = ONE
            for i, j in zip(I, J):
                c = c * F.entry((i,), (j,))
                if not c:
                    break
            if c:
                Fm[(I, J)] = c
    M = {}
    for (I, J), f in Fm.items():
        for K in multi:
            v = Phi.entry(J, K)
            if v:
                M[(I, K)] = M.get((I, K), ZERO) + f * v
    trace = sum((M.get((I, I), ZERO) for I in multi), ZERO)
    if prefactor is None:
        prefactor = qpow(r * (r + 1) // 2) if eigen == "minus" else trace.inverse()
    total = None
    for (I, K), c in M.items():
        if not c:
            continue
        term = _product(entry(idx[i - 1], idx[kk - 1]) for i, kk in zip(I, K)).scale(c * prefactor)
        total = term if total is None else total + term
    return total, trace


# -- adjugate ---------------------------------------------------------------


def _normal_words_with_content(pres: Presentation, length: int, lowers, uppers) -> list:
    from collections import Counter

    gens = pres.generators
    lo, up = Counter(lowers), Counter(uppers)
    out = []

    def rec(prefix):
        if len(prefix) == length:
            out.append(prefix)
            return
        for k, g in enumerate(gens):
            if g.family == "z" and lo[g.lower] and up[g.upper]:
                w = prefix + (k,)
                if not pres.is_normal(w[-pres.max_rule_length:]):
                    continue
                lo[g.lower] -= 1
                up[g.upper] -= 1
                rec(w)
                lo[g.lower] += 1
                up[g.upper] += 1

    rec(())
    return out


def adjugate_solve(pres: Presentation, idx: Sequence[int], det: NCPolynomial, sides=("L", "R")):
    """Solve ``Σ_k a_k^j b_i^k = det·δ_i^j`` (side L) and/or ``Σ_k b_k^j a_i^k = det·δ_i^j`` (side R).

    b is searched in the span of normal words with the expected index content.
    Returns ``Bm`` with ``Bm[k][i] = b_i^k`` (positions within ``idx``), or
    raises :class:`EngineInconsistency` when no common solution exists.
    """
    k = len(idx)
    detn = pres.nf(pres.to_internal(det))
    gen = {(g.lower, g.upper): pres.rank[g] for g in pres.generators if g.family == "z"}
    if k == 1:
        a = {(gen[(idx[0], idx[0])],): ONE}
        if detn != a:
            raise EngineInconsistency("1x1 determinant differs from the entry")
        return [[NCPolynomial.unit()]]
    unknowns = []
    cand = {}
    for r in range(k):  # b_i^k with k=idx[r] upper, i=idx[c] lower
        for c in range(k):
            lowers = [x for x in idx if x != idx[r]]
            uppers = [x for x in idx if x != idx[c]]
            words = _normal_words_with_content(pres, k - 1, lowers, uppers)
            cand[(r, c)] = words
            unknowns.extend((r, c, w) for w in words)
    eqs = {}
    rhs = {}

    def add_eq(key, var, poly):
        for w, c in poly.items():
            row = eqs.setdefault((key, w), {})
            row[var] = row.get(var, ZERO) + c

    for j in range(k):
        for i in range(k):
            for kk in range(k):
                a_left = {(gen[(idx[kk], idx[j])],): ONE}  # a_k^j
                a_right = {(gen[(idx[i], idx[kk])],): ONE}  # a_i^k
                if "L" in sides:
                    for w in cand[(kk, i)]:  # b_i^k
                        add_eq(("L", j, i), (kk, i, w), pres.nf_mul(a_left, {w: ONE}))
                if "R" in sides:
                    for w in cand[(j, kk)]:  # b_k^j
                        add_eq(("R", j, i), (j, kk, w), pres.nf_mul({w: ONE}, a_right))
            if i == j:
                for side in sides:
                    for w, c in detn.items():
                        rhs[((side, j, i), w)] = c
                        eqs.setdefault(((side, j, i), w), {})
    keys = list(eqs)
    sol = linalg.solve([eqs[kk] for kk in keys], [rhs.get(kk, ZERO) for kk in keys], unknowns)
    if sol is None:
        raise EngineInconsistency(f"adjugate system ({'+'.join(sides)}) is inconsistent")
    Bm = [[NCPolynomial.zero() for _ in range(k)] for _ in range(k)]
    for (r, c, w), v in sol.items():
        if v:
            Bm[r][c] = Bm[r][c] + pres.from_internal({w: v})
    return Bm


def adjugate_det(pres: Presentation, idx: Sequence[int], side: str = "R"):
    """Determinant found by the adjugate linear solve, with det itself unknown.

    Solves ``A·B = D·I`` (side R) or ``B·A = D·I`` (side L) with D in the
    span of normal words using every row and column index once, normalised
    by ``ε(D) = 1``.  Returns ``(D, B, unique)`` where ``unique`` says that D
    is the only solution.
    """
    k = len(idx)
    gen = {(g.lower, g.upper): pres.rank[g] for g in pres.generators if g.family == "z"}
    if k == 1:
        return pres.from_internal({(gen[(idx[0], idx[0])],): ONE}), [[NCPolynomial.unit()]], True
    dwords = _normal_words_with_content(pres, k, idx, idx)
    dvars = [("D", w) for w in dwords]
    unknowns = []
    cand = {}
    for r in range(k):
        for c in range(k):
            words = _normal_words_with_content(pres, k - 1, [x for x in idx if x != idx[r]],
                                               [x for x in idx if x != idx[c]])
            cand[(r, c)] = words
            unknowns.extend((r, c, w) for w in words)
    eqs: dict = {}
    for j in range(k):
        for i in range(k):
            key = (j, i)
            for kk in range(k):
                if side == "R":  # Σ_k a_k^j b_i^k
                    a = {(gen[(idx[kk], idx[j])],): ONE}
                    for w in cand[(kk, i)]:
                        for w2, c in pres.nf_mul(a, {w: ONE}).items():
                            row = eqs.setdefault((key, w2), {})
                            row[(kk, i, w)] = row.get((kk, i, w), ZERO) + c
                else:  # Σ_k b_k^j a_i^k
                    a = {(gen[(idx[i], idx[kk])],): ONE}
                    for w in cand[(j, kk)]:
                        for w2, c in pres.nf_mul({w: ONE}, a).items():
                            row = eqs.setdefault((key, w2), {})
                            row[(j, kk, w)] = row.get((j, kk, w), ZERO) + c
            if i == j:
                for w in dwords:
                    row = eqs.setdefault((key, w), {})
                    row[("D", w)] = row.get(("D", w), ZERO) - ONE
    rows = list(eqs.values())
    rhs = [ZERO] * len(rows)
    diag = tuple(sorted(gen[(x, x)] for x in idx))
    norm = {("D", w): ONE for w in dwords if tuple(sorted(w)) == diag and
            all(pres.generators[g].lower == pres.generators[g].upper for g in w)}
    rows.append(norm)
    rhs.append(ONE)
    order = unknowns + dvars
    sol = linalg.solve(rows, rhs, order)
    if sol is None:
        raise EngineInconsistency("adjugate system with unknown determinant is inconsistent")
    reduced, pivots = linalg.rref(rows, order=order)
    pivset = set(pivots)
    unique = all(v in pivset for v in dvars) and all(
        set(row) == {p} for p, row in zip(pivots, reduced) if p[0] == "D")
    D = pres.from_internal({w: v for (tag, w), v in ((k2, sol.get(k2, ZERO)) for k2 in dvars) if v})
    Bm = [[NCPolynomial.zero() for _ in range(k)] for _ in range(k)]
    for key, v in sol.items():
        if key[0] != "D" and v:
            r, c, w = key
            Bm[r][c] = Bm[r][c] + pres.from_internal({w: v})
    return D, Bm, unique


def determinant_triple(pres: Presentation, h_block: HeckeSymmetry, idx: Sequence[int]) -> dict:
    """Permutation, projector and adjugate determinants of an even block, compared in E."""
    perm = [det_even(lambda lo, up: NCPolynomial.gen(pres.resolve("z", (lo, up))), idx, tau)
            for tau in itertools.permutations(range(len(idx)))]
    proj, counit_raw = det_projector(lambda lo, up: NCPolynomial.gen(pres.resolve("z", (lo, up))),
                                     h_block, idx, r=len(idx), eigen="minus")
    out = {"tau_independent": all(pres.is_zero(p - perm[0]) for p in perm[1:]),
           "projector_equals_permutation": pres.is_zero(proj - perm[0]),
           "projector_counit": str(counit_raw),
           "projector_counit_expected": str(qpow(-len(idx) * (len(idx) + 1) // 2))}
    for side in ("R", "L"):
        D, _, unique = adjugate_det(pres, idx, side)
        out[f"adjugate_{side}_equals_permutation"] = pres.is_zero(D - perm[0])
        out[f"adjugate_{side}_unique"] = unique
    return out


def adjugate_pair(pres: Presentation, idx: Sequence[int], det: NCPolynomial):
    """``(B_right, B_left, common)``: ``A·B_right = det·I``, ``B_left·A = det·I``.

    ``common`` reports whether a single matrix solves both equations.
    """
    try:
        Bm = adjugate_solve(pres, idx, det, ("L", "R"))
        return Bm, Bm, True
    except EngineInconsistency:
        return adjugate_solve(pres, idx, det, ("L",)), adjugate_solve(pres, idx, det, ("R",)), False


# -- matrix helpers ---------------------------------------------------------


def matmul(X, Y, zero):
    rows, inner, cols = len(X), len(Y), len(Y[0]) if Y else 0
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            acc = zero
            for k in range(inner):
                acc = acc + X[r][k] * Y[k][c]
            row.append(acc)
        out.append(row)
    return out


def matadd(X, Y, sign=1):
    return [[x + (y if sign == 1 else -y) for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)]


def matneg(X):
    return [[-x for x in row] for row in X]


def identity_matrix(k, one, zero):
    return [[one if r == c else zero for c in range(k)] for r in range(k)]


# -- block matrix -----------------------------------------------------------


@dataclass
class BlockMatrix:
    """Standard-format blocks of ``Z`` with entries in an algebra."""

    m: int
    n: int
    A: list
    B: list
    C: list
    D: list

    @classmethod
    def split(cls, M, m: int, n: int) -> "BlockMatrix":
        top, bot = M[:m], M[m:]
        return cls(m, n, [r[:m] for r in top], [r[m:] for r in top], [r[:m] for r in bot], [r[m:] for r in bot])

    def assemble(self) -> list:
        return [a + b for a, b in zip(self.A, self.B)] + [c + d for c, d in zip(self.C, self.D)]


def z_matrix(pres: Presentation, d: int, wrap=None) -> list:
    """``Z[r][c] = z_c^r`` as NCPolynomials (or wrapped)."""
    wrap = wrap or NCPolynomial.gen
    return [[wrap(pres.resolve("z", (c, r))) for c in range(1, d + 1)] for r in range(1, d + 1)]


class BlockCalculus:
    """Block inverse, Schur complements and determinants of Z inside ``L = E[(det A·det D)^-1]``."""

    def __init__(self, h: HeckeSymmetry, E: Optional[Presentation] = None, degree_bound: int = 8):
        self.h = h
        self.m, self.n = h.space.m, h.space.n
        if not h.space.is_standard:
            raise ValueError("block calculus needs the standard format")
        self.E = E or generate_relations(h, "bialgebra_E", degree_bound=degree_bound)
        m, n = self.m, self.n
        self.even = list(range(1, m + 1))
        self.odd = list(range(m + 1, m + n + 1))
        self.S = generate_relations(h, "sym_S")
        self.sym_table = swap_table(self.S)
        self.Lam = generate_relations(h, "ext_Lambda")
        self.ext_table = swap_table(self.Lam)
        self.det_A = self.zdet_even() if m else NCPolynomial.unit()
        self.det_D = self.zdet_odd() if n else NCPolynomial.unit()
        self.L: LocalizedAlgebra = adjoin_inverse(self.E, self.det_A * self.det_D)

    # -- E-level data -------------------------------------------------------
    def zentry(self, lower: int, upper: int) -> NCPolynomial:
        return NCPolynomial.gen(self.E.resolve("z", (lower, upper)))

    def zdet_even(self, tau=None) -> NCPolynomial:
        return det_even(self.zentry, self.even, tau)

    def zdet_odd(self, theta=None) -> NCPolynomial:
        """Determinant of the D block read off the odd part of S (finite there)."""
        return coaction_det(self.zentry, self.odd, self.sym_table, tau=theta)

    def loc(self, e) -> LocElement:
        if isinstance(e, LocElement):
            return e
        return self.L.from_poly(NCPolynomial.coerce(e))

    def block(self, rows, cols) -> list:
        return [[self.loc(self.zentry(c, r)) for c in cols] for r in rows]

    @cached_property
    def A(self):
        return self.block(self.even, self.even)

    @cached_property
    def B(self):
        return self.block(self.even, self.odd)

    @cached_property
    def C(self):
        return self.block(self.odd, self.even)

    @cached_property
    def D(self):
        return self.block(self.odd, self.odd)

    @cached_property
    def adj_A_pair(self):
        return adjugate_pair(self.E, self.even, self.det_A)

    @cached_property
    def adj_D_pair(self):
        return adjugate_pair(self.E, self.odd, self.det_D)

    @property
    def adj_A(self):
        return self.adj_A_pair[0]

    @property
    def adj_D(self):
        return self.adj_D_pair[0]

    # -- inverses in L ------------------------------------------------------
    @cached_property
    def det_A_inv(self) -> LocElement:
        return self.loc(self.det_D) * self.L.ubar()

    @cached_property
    def det_D_inv(self) -> LocElement:
        return self.L.ubar() * self.loc(self.det_A)

    @cached_property
    def A_inv(self):
        return self.simplify([[self.loc(b) * self.det_A_inv for b in row] for row in self.adj_A])

    @cached_property
    def D_inv(self):
        return self.simplify([[self.loc(b) * self.det_D_inv for b in row] for row in self.adj_D])

    def zero(self):
        return self.L.zero()

    def one(self):
        return self.L.one()

    def simplify(self, M):
        return [[self.L.canonical(e) for e in row] for row in M]

    def mm(self, *mats):
        # canonicalise after each product, otherwise ū-powers pile up
        out = mats[0]
        for M in mats[1:]:
            out = self.simplify(matmul(out, M, self.zero()))
        return out

    @cached_property
    def H(self):
        """Schur complement ``D − C A^-1 B``."""
        return matadd(self.D, self.mm(self.C, self.A_inv, self.B), -1)

    @cached_property
    def H_upper(self):
        """``A − B D^-1 C``."""
        return matadd(self.A, self.mm(self.B, self.D_inv, self.C), -1)

    @cached_property
    def K(self):
        return self.mm(self.C, self.A_inv, self.B, self.D_inv)

    @cached_property
    def H_inv(self):
        """``D^-1 Σ_{i≤mn} K^i`` (finite since K is nilpotent)."""
        n = self.n
        I = identity_matrix(n, self.one(), self.zero())
        total, power = I, I
        for _ in range(self.m * self.n):
            power = self.mm(power, self.K)
            total = matadd(total, power)
        return self.mm(self.D_inv, total)

    @cached_property
    def inverse_blocks(self) -> BlockMatrix:
        m, n = self.m, self.n
        if not n:  # purely even: Z^-1 = A^-1
            return BlockMatrix(m, 0, self.A_inv, [[] for _ in range(m)], [], [])
        if not m:
            return BlockMatrix(0, n, [], [], [[] for _ in range(n)], self.D_inv)
        Ai, Hi = self.A_inv, self.H_inv
        AiB = self.mm(Ai, self.B)
        CAi = self.mm(self.C, Ai)
        X = matadd(Ai, self.mm(AiB, Hi, CAi))
        Y = matneg(self.mm(AiB, Hi))
        U = matneg(self.mm(Hi, CAi))
        return BlockMatrix(self.m, self.n, X, Y, U, Hi)

    @cached_property
    def Z(self):
        return BlockMatrix(self.m, self.n, self.A, self.B, self.C, self.D).assemble()

    @cached_property
    def Z_inv(self):
        return self.inverse_blocks.assemble()

    def t_value(self, lower: int, upper: int) -> LocElement:
        """``t_lower^upper = (-1)^{lower(upper+1)} (Z^-1)[upper][lower]`` (parities)."""
        par = self.h.space.par
        v = self.Z_inv[upper - 1][lower - 1]
        return -v if (par(lower) * (par(upper) + 1)) % 2 else v

    def tentry(self, lower: int, upper: int) -> LocElement:
        return self.t_value(lower, upper)

    # -- determinants -------------------------------------------------------
    def ber(self, tau=None, theta=None, odd_weight: str = "printed") -> LocElement:
        """The permutation formula: det of the A block times the t-block factor.

        ``odd_weight="printed"`` weights the t-block by ``θ(-p)/ν(-p)``;
        ``"dual"`` uses ``ν(-p)/θ(-p)``, the S^∨ swap coefficients.  They agree
        when n = 1.
        """
        if odd_weight not in ("printed", "dual"):
            raise ValueError(f"unknown odd weight {odd_weight!r}")
        m = self.m
        left = self.loc(self.zdet_even(tau)) if m else self.one()
        if not self.n:
            return left
        theta = tuple(range(self.n)) if theta is None else tuple(theta)
        idx = self.odd
        norm = inversion_coeff(theta, idx, minus_p)
        right = None
        for nu in itertools.permutations(range(self.n)):
            c = norm / inversion_coeff(nu, idx, minus_p)
            if odd_weight == "dual":
                c = c.inverse()
            term = _product(self.tentry(idx[nu[i]], idx[theta[i]]) for i in range(self.n)).scale(c)
            right = term if right is None else right + term
        return left * right

    def det_V_coaction(self, theta=None) -> LocElement:
        """Determinant of the t-block read off the odd part of S^∨."""
        table = swap_table(generate_relations(self.h, "sym_dual"))
        return coaction_det(self.tentry, self.odd, table, over="lower", tau=theta)

    @cached_property
    def ext_dual_table(self) -> dict:
        return swap_table(generate_relations(self.h, "ext_dual"))

    def det_X(self, tau=None, form: str = "dual") -> LocElement:
        """Determinant of the even t-block.

        ``form="dual"`` reads it off the top of Λ^∨ (T-type, summed over the
        lower index); ``"printed"`` uses the ``σ(-p)/τ(-p)`` weights over the
        upper index.  Only the first agrees with S(det A) for symbolic p.
        """
        if form == "printed":
            return perm_det(self.tentry, self.even, minus_p, tau)
        if form != "dual":
            raise ValueError(f"unknown form {form!r}")
        return coaction_det(self.tentry, self.even, self.ext_dual_table, over="lower", tau=tau)


# -- reports ----------------------------------------------------------------


@dataclass
class CheckRecord:
    name: str
    anchor: str
    status: str  # pass | fail | info
    residual: str = ""
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)
    required: bool = True  # a failing required check makes the run fail

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "required": self.required,
            "residual": self.residual,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CheckRecord":
        return cls(d["name"], d["anchor"], d["status"], d.get("residual", ""), d.get("seconds", 0.0),
                   dict(d.get("detail", {})), d.get("required", True))


def residual_record(name: str, anchor: str, residual, started: float, info: bool = False, detail=None) -> CheckRecord:
    if isinstance(residual, list):
        bad = [str(r) for r in residual if not r.is_zero()]
        status = "pass" if not bad else "fail"
        text = "0" if not bad else "; ".join(bad[:3])
    else:
        status = "pass" if residual.is_zero() else "fail"
        text = str(residual)
    if info:
        status = "info"
    if len(text) > 400:
        text = text[:400] + "..."
    return CheckRecord(name, anchor, status, text, time.perf_counter() - started, detail or {})


def matrix_residual(M, one, zero) -> list:
    k = len(M)
    return [M[r][c] - (one if r == c else zero) for r in range(k) for c in range(k)]


SUITES = {
    "qtber1": "Ber Z = det A · det(D − C A^-1 B)^-1",
    "isdet": "(Ber Z)^-1 = det D · det(A − B D^-1 C)^-1",
    "lemisdet": "S(det A) = det X",
    "commute-detA-detV": "det A · det V = det V · det A",
    "pro43": "Ber Z = det A · det V with det V from the projector formula",
    "invdet": "det(A^-1) · det A = 1",
    "cor2": "Ber Z = det(A^-1) · det(D − C A^-1 B) (informational)",
}


def identity_suite(name: str, bc: BlockCalculus, envelope=None, odd_weight: str = "printed") -> CheckRecord:
    """Residual of one named identity in ``bc``'s localisation."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    started = time.perf_counter()
    anchor = SUITES[name]
    m, n = bc.m, bc.n
    ber = bc.ber(odd_weight=odd_weight)
    if name == "qtber1":
        detH = bc.loc(coaction_det(lambda lo, up: bc.H[bc.odd.index(up)][bc.odd.index(lo)], bc.odd, bc.sym_table)) \
            if n else bc.one()
        return residual_record(name, anchor, ber * detH - bc.loc(bc.det_A), started)
    if name == "isdet":
        detX = det_even(lambda lo, up: bc.H_upper[bc.even.index(up)][bc.even.index(lo)], bc.even) if m else bc.one()
        return residual_record(name, anchor, ber * bc.loc(bc.det_D) - detX, started)
    if name == "lemisdet":
        from .hopf import antipode

        env = envelope
        if env is None:
            raise ValueError("lemisdet needs the Hopf envelope")
        lhs = antipode(env, bc.det_A)
        res = [lhs - bc.det_X(tau) for tau in itertools.permutations(range(m))] if m else [lhs - bc.one()]
        rec = residual_record(name, anchor, res, started)
        if m:
            rec.detail["printed_form_zero"] = all((lhs - bc.det_X(tau, "printed")).is_zero()
                                                  for tau in itertools.permutations(range(m)))
        return rec
    if name == "commute-detA-detV":
        dA = bc.loc(bc.det_A)
        dV = _det_V_sdet(bc, odd_weight)
        return residual_record(name, anchor, dA * dV - dV * dA, started)
    if name == "pro43":
        if not n:
            return residual_record(name, anchor, ber - bc.loc(bc.det_A), started)
        h_odd = restrict_symmetry(bc.h, bc.odd)
        dV, trace = det_projector(lambda lo, up: bc.tentry(lo, up), h_odd, bc.odd, r=n, eigen="plus")
        rec = residual_record(name, anchor, ber - bc.loc(bc.det_A) * dV, started)
        rec.detail["projector_trace"] = str(trace)
        return rec
    if name == "invdet":
        if not m:
            return residual_record(name, anchor, bc.one() - bc.one(), started)
        table = bc.ext_dual_table
        Ai = bc.A_inv
        d_inv = coaction_det(lambda lo, up: Ai[bc.even.index(up)][bc.even.index(lo)], bc.even, table, over="lower")
        return residual_record(name, anchor, [d_inv * bc.loc(bc.det_A) - bc.one(),
                                              bc.loc(bc.det_A) * d_inv - bc.one()], started)
    if name == "cor2":
        table = bc.ext_dual_table
        Ai = bc.A_inv
        d_inv = coaction_det(lambda lo, up: Ai[bc.even.index(up)][bc.even.index(lo)], bc.even, table, over="lower") \
            if m else bc.one()
        detH = bc.loc(coaction_det(lambda lo, up: bc.H[bc.odd.index(up)][bc.odd.index(lo)], bc.odd, bc.sym_table)) \
            if n else bc.one()
        return residual_record(name, anchor, ber - d_inv * detH, started, info=True)
    raise AssertionError(name)


def _det_V_sdet(bc: BlockCalculus, odd_weight: str = "printed") -> LocElement:
    """The t-block factor of the permutation formula for Ber."""
    idx = bc.odd
    if not idx:
        return bc.one()
    right = None
    for nu in itertools.permutations(range(bc.n)):
        c = inversion_coeff(nu, idx, minus_p)
        if odd_weight == "printed":
            c = c.inverse()
        term = _product(bc.tentry(idx[nu[i]], idx[i]) for i in range(bc.n)).scale(c)
        right = term if right is None else right + term
    return right


def k_nilpotency(bc: BlockCalculus) -> dict:
    """Entrywise products of mn+1 K-factors and rs+1 B- and C-factors, reduced."""
    m, n = bc.m, bc.n
    out = {}
    K = bc.K
    entries = [K[r][c] for r in range(n) for c in range(n)]
    bad = 0
    total = 0
    for combo in itertools.product(range(len(entries)), repeat=m * n + 1):
        total += 1
        prod = _product(entries[i] for i in combo)
        if not prod.is_zero():
            bad += 1
    out["K"] = {"factors": m * n + 1, "products": total, "nonzero": bad}
    E = bc.E
    for name, rows, cols in (("B", bc.even, bc.odd), ("C", bc.odd, bc.even)):
        gens = [(E.rank[E.resolve("z", (c, r))],) for r in rows for c in cols]
        bad = 0
        total = 0
        for combo in itertools.product(gens, repeat=m * n + 1):
            total += 1
            w = sum(combo, ())
            if E.nf({w: ONE}):
                bad += 1
        out[name] = {"factors": m * n + 1, "products": total, "nonzero": bad}
    return out


def block_inverse_residuals(bc: BlockCalculus) -> dict:
    Z, Zi = bc.Z, bc.Z_inv
    one, zero = bc.one(), bc.zero()
    right = matrix_residual(matmul(Z, Zi, zero), one, zero)
    left = matrix_residual(matmul(Zi, Z, zero), one, zero)
    return {"Z*Zinv": right, "Zinv*Z": left}


def schur_residuals(bc: BlockCalculus, side: str = "lower") -> list:
    """``R_o H_1 H_2 − H_1 H_2 R_o`` (lower) or the ``R_e`` analogue for ``A − B D^-1 C``."""
    if side == "lower":
        idx, M = bc.odd, bc.H
    else:
        idx, M = bc.even, bc.H_upper
    R = bc.h.R
    par = bc.h.space.par
    out = []
    pos = {g: i for i, g in enumerate(idx)}

    def ent(lower, upper):
        return M[pos[upper]][pos[lower]]

    # quantum-matrix relation in the pattern of the defining relations
    for a, b, i, j in itertools.product(idx, repeat=4):
        acc = bc.zero()
        for pp, s in itertools.product(idx, repeat=2):
            c = R.entry((a, b), (pp, s))
            if c:
                sign = -1 if (par(s) * (par(i) + par(pp))) % 2 else 1
                acc = acc + (ent(i, pp) * ent(j, s)).scale(c * sign)
        for qq, nn in itertools.product(idx, repeat=2):
            c = R.entry((qq, nn), (i, j))
            if c:
                sign = -1 if (par(b) * (par(qq) + par(a))) % 2 else 1
                acc = acc - (ent(qq, a) * ent(nn, b)).scale(c * sign)
        out.append(acc)
    return out


# -- block relations ----------------------------------------------------------


def block_relations(E: Presentation, h: HeckeSymmetry) -> dict:
    """The block form of the defining relations, one residual count per line.

    Matrices act on index pairs: ``(X_1Y_2)^{kl}_{ij} = X^k_i Y^l_j``,
    ``(O·T)^{kl}_{ij} = Σ O^{kl}_{ps} T^{ps}_{ij}`` and ``(T·O)`` likewise.
    ``P^{ji}_{ij} = p_ij`` for i even, j odd.
    """
    par = h.space.par
    d = h.dim
    ev = [i for i in range(1, d + 1) if not par(i)]
    od = [i for i in range(1, d + 1) if par(i)]
    qq = q()

    def zp(lo, up):
        return NCPolynomial.gen(E.resolve("z", (lo, up)))

    def pair_prod(rows1, cols1, rows2, cols2):
        return {(k, l, i, j): zp(i, k) * zp(j, l)
                for k in rows1 for i in cols1 for l in rows2 for j in cols2}

    def R_op(idx):
        return {(k, l, i, j): h.R.entry((k, l), (i, j))
                for k, l, i, j in itertools.product(idx, repeat=4) if h.R.entry((k, l), (i, j))}

    P = {(j, i, i, j): p(i, j) for i in ev for j in od}
    Pinv = {(i, j, j, i): p(i, j).inverse() for i in ev for j in od}
    Re, Ro = R_op(ev), R_op(od)

    def left(O, T):
        out: dict = {}
        for (k, l, pp, s), c in O.items():
            for (p2, s2, i, j), v in T.items():
                if (p2, s2) == (pp, s):
                    key = (k, l, i, j)
                    out[key] = out.get(key, NCPolynomial.zero()) + v.scale(c)
        return out

    def right(T, O):
        out: dict = {}
        for (k, l, qn, nn), v in T.items():
            for (q2, n2, i, j), c in O.items():
                if (q2, n2) == (qn, nn):
                    key = (k, l, i, j)
                    out[key] = out.get(key, NCPolynomial.zero()) + v.scale(c)
        return out

    def lin(*terms):
        out: dict = {}
        for c, T in terms:
            for key, v in T.items():
                out[key] = out.get(key, NCPolynomial.zero()) + v.scale(c)
        return out

    A1A2 = pair_prod(ev, ev, ev, ev)
    B1B2 = pair_prod(ev, od, ev, od)
    C1C2 = pair_prod(od, ev, od, ev)
    D1D2 = pair_prod(od, od, od, od)
    A1B2 = pair_prod(ev, ev, ev, od)
    B1A2 = pair_prod(ev, od, ev, ev)
    A1C2 = pair_prod(ev, ev, od, ev)
    C1A2 = pair_prod(od, ev, ev, ev)
    C1D2 = pair_prod(od, ev, od, od)
    D1C2 = pair_prod(od, od, od, ev)
    B1D2 = pair_prod(ev, od, od, od)
    D1B2 = pair_prod(od, od, ev, od)
    A1D2 = pair_prod(ev, ev, od, od)
    D1A2 = pair_prod(od, od, ev, ev)
    B1C2 = pair_prod(ev, od, od, ev)
    C1B2 = pair_prod(od, ev, ev, od)
    one = ONE
    lines = {
        "ReA1A2=A1A2Re": lin((one, left(Re, A1A2)), (-one, right(A1A2, Re))),
        "ReB1B2=B1B2Ro": lin((one, left(Re, B1B2)), (-one, right(B1B2, Ro))),
        "C1C2Re=RoC1C2": lin((one, right(C1C2, Re)), (-one, left(Ro, C1C2))),
        "RoD1D2=D1D2Ro": lin((one, left(Ro, D1D2)), (-one, right(D1D2, Ro))),
        "ReA1B2=B1A2P": lin((one, left(Re, A1B2)), (-one, right(B1A2, P))),
        "A1C2Re=qP^-1C1A2": lin((one, right(A1C2, Re)), (-qq, left(Pinv, C1A2))),
        "RoC1D2=-D1C2P": lin((one, left(Ro, C1D2)), (one, right(D1C2, P))),
        "-B1D2Ro=qP^-1D1B2": lin((-one, right(B1D2, Ro)), (-qq, left(Pinv, D1B2))),
        "qA1D2P^-1-qP^-1D1A2=(q-1)B1C2": lin((qq, right(A1D2, Pinv)), (-qq, left(Pinv, D1A2)),
                                             (-(qq - 1), B1C2)),
        "B1C2P=-qP^-1C1B2": lin((one, right(B1C2, P)), (qq, left(Pinv, C1B2))),
    }
    out = {}
    for name, entries in lines.items():
        bad = sum(1 for v in entries.values() if not E.is_zero(v))
        out[name] = {"entries": len(entries), "nonzero": bad}
    return out
