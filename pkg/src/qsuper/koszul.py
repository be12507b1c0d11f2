"""The Koszul complex ``K^{k,l} = Λ_k ⊗ S^∨_l`` and its cohomology."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .ncalg.relations import generate_relations
from .ncalg.rewrite import Presentation
from .rmatrix import HeckeSymmetry, check_hecke, check_ybe
from .scalars import ONE, ZERO
from .supertensor import LegOperator


class WindowTooSmall(ValueError):
    pass


def dual_operator(h: HeckeSymmetry) -> LegOperator:
    """``R^*`` with ``R^*(ξ^i⊗ξ^j) = ξ^k⊗ξ^l R^{ji}_{lk}``."""
    R = h.R
    return LegOperator.from_function(h.space, 2, lambda o, i: R.entry((i[1], i[0]), (o[1], o[0])))


@dataclass
class DualData:
    h: HeckeSymmetry
    R_star: LegOperator
    Lambda_dual: Presentation
    S_dual: Presentation

    @property
    def hecke_residual_zero(self) -> bool:
        return check_hecke(HeckeSymmetry(self.h.space, self.R_star, self.h.q)).is_zero()

    @property
    def ybe_residual_zero(self) -> bool:
        return check_ybe(HeckeSymmetry(self.h.space, self.R_star, self.h.q)).is_zero()

    def double_dual_is_identity(self) -> bool:
        hs = HeckeSymmetry(self.h.space, self.R_star, self.h.q)
        return dual_operator(hs) == self.h.R


def build_dual(h: HeckeSymmetry, degree_bound: int = 4) -> DualData:
    return DualData(
        h,
        dual_operator(h),
        generate_relations(h, "ext_dual", degree_bound),
        generate_relations(h, "sym_dual", degree_bound),
    )


@dataclass
class GradedPiece:
    kind: str  # Lambda | SymDual
    degree: int
    basis: list  # internal normal words

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class CohomologyEntry:
    k: int
    l: int
    dim: int
    rank_in: int
    rank_out: int

    @property
    def cohomology(self) -> int:
        return self.dim - self.rank_in - self.rank_out

    def to_json(self) -> dict:
        return {"k": self.k, "l": self.l, "dim": self.dim, "rank_in": self.rank_in,
                "rank_out": self.rank_out, "cohomology": self.cohomology}


@dataclass
class ComplexReport:
    m: int
    n: int
    shift: int  # the diagonal l - k = shift; n - m is the distinguished one
    window: int  # k + l <= window
    entries: list = field(default_factory=list)
    d_squared_zero: bool = True
    representative_outside_image: Optional[bool] = None
    representative_is_cocycle: Optional[bool] = None
    euler_consistent: bool = True

    @property
    def distinguished(self) -> bool:
        return self.shift == self.n - self.m

    def dims(self) -> dict:
        return {(e.k, e.l): e.cohomology for e in self.entries}

    @property
    def concentrated(self) -> bool:
        """Cohomology is 1 at (m, n) and 0 elsewhere (distinguished diagonal) or 0 everywhere."""
        for e in self.entries:
            want = 1 if self.distinguished and (e.k, e.l) == (self.m, self.n) else 0
            if e.cohomology != want:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "shift": self.shift, "window": self.window,
            "distinguished": self.distinguished,
            "entries": [e.to_json() for e in self.entries],
            "d_squared_zero": self.d_squared_zero,
            "representative_is_cocycle": self.representative_is_cocycle,
            "representative_outside_image": self.representative_outside_image,
            "euler_consistent": self.euler_consistent,
            "concentrated": self.concentrated,
        }


class KoszulComplex:
    def __init__(self, h: HeckeSymmetry, window: Optional[int] = None):
        self.h = h
        self.m = h.space.m
        self.n = h.space.n
        self.d = h.dim
        self.window = 2 * self.d if window is None else window
        bound = self.window + 2
        self.Lam = generate_relations(h, "ext_Lambda", bound)
        self.Sd = generate_relations(h, "sym_dual", bound)
        self._x = [self.Lam.rank[self.Lam.resolve("x", (i,))] for i in range(1, self.d + 1)]
        self._xi = [self.Sd.rank[self.Sd.resolve("xi", (i,))] for i in range(1, self.d + 1)]
        self._pieces: dict = {}
        self._maps: dict = {}

    def piece(self, kind: str, degree: int) -> GradedPiece:
        key = (kind, degree)
        if key not in self._pieces:
            pres = self.Lam if kind == "Lambda" else self.Sd
            self._pieces[key] = GradedPiece(kind, degree, pres.normal_words(degree))
        return self._pieces[key]

    def basis(self, k: int, l: int) -> list:
        if k < 0 or l < 0:
            return []
        return [(a, b) for a in self.piece("Lambda", k).basis for b in self.piece("SymDual", l).basis]

    def dim(self, k: int, l: int) -> int:
        if k < 0 or l < 0:
            return 0
        return self.piece("Lambda", k).dim * self.piece("SymDual", l).dim

    def apply(self, vec: dict) -> dict:
        """``D(w⊗v) = Σ_i w x_i ⊗ ξ^i v`` on a vector ``{(w, v): c}``."""
        out: dict = {}
        for (w, v), c in vec.items():
            for i in range(self.d):
                left = self.Lam.nf({w + (self._x[i],): ONE})
                if not left:
                    continue
                right = self.Sd.nf({(self._xi[i],) + v: ONE})
                for a, ca in left.items():
                    for b, cb in right.items():
                        key = (a, b)
                        val = out.get(key, ZERO) + c * ca * cb
                        if val:
                            out[key] = val
                        else:
                            out.pop(key, None)
        return out

    def differential(self, k: int, l: int) -> list:
        """Columns of D: K^{k,l} → K^{k+1,l+1} as sparse dicts keyed by target basis pairs."""
        key = (k, l)
        if key not in self._maps:
            self._maps[key] = [self.apply({b: ONE}) for b in self.basis(k, l)]
        return self._maps[key]

    def rank(self, k: int, l: int) -> int:
        if k < 0 or l < 0 or not self.dim(k, l) or not self.dim(k + 1, l + 1):
            return 0
        return linalg.rank(self.differential(k, l))

    def d_squared(self, k: int, l: int) -> bool:
        for col in self.differential(k, l):
            if self.apply(col):
                return False
        return True

    def representative(self) -> dict:
        """``x_1⋯x_m ξ^{m+1}⋯ξ^{m+n}`` in K^{m,n}, in normal form coordinates."""
        xs = tuple(self._x[: self.m])
        xis = tuple(self._xi[self.m:])
        a = self.Lam.nf({xs: ONE})
        b = self.Sd.nf({xis: ONE})
        return {(wa, wb): ca * cb for wa, ca in a.items() for wb, cb in b.items()}

    def cohomology(self, shift: Optional[int] = None) -> ComplexReport:
        """Cohomology along the diagonal ``l - k = shift`` inside ``k + l <= window``.

        The default is the distinguished diagonal ``shift = n - m``.
        """
        if shift is None:
            shift = self.n - self.m
        if self.window < self.m + self.n + 2:
            raise WindowTooSmall("window must contain the cell after (m, n)")
        rep = ComplexReport(self.m, self.n, shift, self.window)
        off = shift
        cells = [(k, k + off) for k in range(0, self.window + 1) if k + off >= 0 and 2 * k + off <= self.window]
        ranks = {}
        for k, l in cells:
            ranks[(k, l)] = self.rank(k, l)
            ranks.setdefault((k - 1, l - 1), self.rank(k - 1, l - 1))
        for k, l in cells:
            rep.entries.append(CohomologyEntry(k, l, self.dim(k, l), ranks[(k - 1, l - 1)], ranks[(k, l)]))
            if (k + 1) + (l + 1) <= self.window and not self.d_squared(k, l):
                rep.d_squared_zero = False
        # Euler characteristic over the cells: Σ(-1)^k dim = Σ(-1)^k H + boundary ranks
        chi_dims = sum((-1) ** e.k * e.dim for e in rep.entries)
        chi_h = sum((-1) ** e.k * e.cohomology for e in rep.entries)
        first, last = rep.entries[0], rep.entries[-1]
        boundary = (-1) ** first.k * first.rank_in + (-1) ** last.k * last.rank_out
        rep.euler_consistent = chi_dims == chi_h + boundary
        if rep.distinguished:
            vec = self.representative()
            rep.representative_is_cocycle = not self.apply(vec)
            image = self.differential(self.m - 1, self.n - 1) if self.m and self.n else []
            r0 = linalg.rank(image) if image else 0
            rep.representative_outside_image = bool(vec) and linalg.rank(list(image) + [vec]) > r0
        return rep

    def modular_rank(self, k: int, l: int, prime: int = 2**31 - 1, seed: int = 0) -> int:
        """Rank of D after specialising q and p at a random point mod ``prime``."""
        from ._kernels import rank_mod

        tgt = {b: i for i, b in enumerate(self.basis(k + 1, l + 1))}
        cols = self.differential(k, l)
        if not cols or not tgt:
            return 0
        rng = random.Random(seed)
        from .scalars import VARIABLES

        point = tuple(rng.randrange(1, prime) for _ in VARIABLES)
        rows = [[0] * len(cols) for _ in tgt]
        for j, col in enumerate(cols):
            for key, v in col.items():
                rows[tgt[key]][j] = v.evaluate_mod(point, prime)
        return rank_mod(rows, prime)


def complex_report(h: HeckeSymmetry, window: Optional[int] = None, shifts=None) -> list[ComplexReport]:
    kc = KoszulComplex(h, window)
    if shifts is None:
        shifts = [kc.n - kc.m]
    return [kc.cohomology(s) for s in shifts]
