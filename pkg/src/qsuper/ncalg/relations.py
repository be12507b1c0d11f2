"""Quadratic relations attached to a Hecke symmetry."""

from __future__ import annotations

import itertools
from math import comb

from ..rmatrix import HeckeSymmetry
from ..scalars import ONE, ZERO
from .poly import GeneratorSymbol, NCPolynomial
from .rewrite import from_relations

KINDS = ("bialgebra_E", "hopf_H", "sym_S", "ext_Lambda", "sym_dual", "ext_dual")

# block rank for the z generators: D < C < B < A
_BLOCK_RANK = {(1, 1): 0, (1, 0): 1, (0, 1): 2, (0, 0): 3}


def z_generators(h: HeckeSymmetry, family: str = "z") -> list[GeneratorSymbol]:
    """z_i^j in the order D < C < B < A, rows (upper index) then columns (lower index)."""
    par = h.space.par
    d = h.dim
    gens = []
    for upper, lower in itertools.product(range(1, d + 1), repeat=2):
        gens.append(GeneratorSymbol(family, lower, upper, (par(lower) + par(upper)) % 2))
    gens.sort(key=lambda g: (_BLOCK_RANK[(par(g.upper), par(g.lower))], g.upper, g.lower))
    return gens


def x_generators(h: HeckeSymmetry, family: str = "x") -> list[GeneratorSymbol]:
    return [GeneratorSymbol(family, i, 0, h.space.par(i)) for i in range(1, h.dim + 1)]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def e_relations(h: HeckeSymmetry, family: str = "z") -> list[NCPolynomial]:
    """``(-1)^{s(i+p)} R^{kl}_{ps} z^p_i z^s_j - (-1)^{l(q+k)} z^k_q z^l_n R^{qn}_{ij}``."""
    d, par, R = h.dim, h.space.par, h.R
    gen = {(g.lower, g.upper): g for g in z_generators(h, family)}
    nz_out = {}  # (k,l) -> [(p,s,coeff)] with R^{kl}_{ps} != 0
    for (k, l) in itertools.product(range(1, d + 1), repeat=2):
        nz_out[(k, l)] = [
            (p, s, R.entry((k, l), (p, s))) for p, s in itertools.product(range(1, d + 1), repeat=2)
            if R.entry((k, l), (p, s))
        ]
    rels = []
    for k, l, i, j in itertools.product(range(1, d + 1), repeat=4):
        terms: dict = {}

        def add(w, c):
            v = terms.get(w, ZERO) + c
            if v:
                terms[w] = v
            else:
                terms.pop(w, None)

        for p, s, c in nz_out[(k, l)]:
            add((gen[(i, p)], gen[(j, s)]), _sign(par(s) * (par(i) + par(p))) * c)
        for q, n in itertools.product(range(1, d + 1), repeat=2):
            c = R.entry((q, n), (i, j))
            if c:
                add((gen[(q, k)], gen[(n, l)]), -_sign(par(l) * (par(q) + par(k))) * c)
        if terms:
            rels.append(NCPolynomial._raw(terms))
    return rels


def quadratic_relations(h: HeckeSymmetry, kind: str) -> tuple[list[GeneratorSymbol], list[NCPolynomial]]:
    d, R, qq = h.dim, h.R, h.q
    if kind in ("sym_S", "ext_Lambda"):
        gens = x_generators(h, "x")
        shift = -qq if kind == "sym_S" else ONE
        rels = []
        for k, l in itertools.product(range(1, d + 1), repeat=2):
            terms: dict = {}
            for i, j in itertools.product(range(1, d + 1), repeat=2):
                c = R.entry((i, j), (k, l))
                if c:
                    terms[(gens[i - 1], gens[j - 1])] = c
            w = (gens[k - 1], gens[l - 1])
            terms[w] = terms.get(w, ZERO) + shift
            rels.append(NCPolynomial(terms))
        return gens, rels
    if kind in ("sym_dual", "ext_dual"):
        gens = x_generators(h, "xi")
        shift = -qq if kind == "sym_dual" else ONE
        rels = []
        for i, j in itertools.product(range(1, d + 1), repeat=2):
            terms = {}
            for k, l in itertools.product(range(1, d + 1), repeat=2):
                c = R.entry((j, i), (l, k))
                if c:
                    terms[(gens[k - 1], gens[l - 1])] = c
            w = (gens[i - 1], gens[j - 1])
            terms[w] = terms.get(w, ZERO) + shift
            rels.append(NCPolynomial(terms))
        return gens, rels
    if kind == "bialgebra_E":
        return z_generators(h), e_relations(h)
    raise ValueError(f"unknown relation kind {kind!r}")


def operator_rank(h: HeckeSymmetry, kind: str) -> int:
    """Rank of the operator whose image the relations span."""
    if kind in ("sym_S", "sym_dual"):
        return (h.R - h.q).rank()
    if kind in ("ext_Lambda", "ext_dual"):
        return (h.R + 1).rank()
    raise ValueError(kind)


def generate_relations(h: HeckeSymmetry, kind: str, degree_bound: int = 4, complete: bool = True):
    """Presentation for one of :data:`KINDS`.

    ``hopf_H`` returns the Hopf envelope realised as a localisation of E
    (see :mod:`qsuper.hopf`).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown relation kind {kind!r}")
    if kind == "hopf_H":
        from ..hopf import HopfEnvelope

        return HopfEnvelope.build(h, degree_bound=degree_bound)
    gens, rels = quadratic_relations(h, kind)
    pres = from_relations(gens, rels, degree_bound, name=kind, complete=complete)
    return pres


def classical_hilbert(m: int, n: int, k: int) -> int:
    """Degree-k dimension of the free supercommutative algebra on m²+n² even and 2mn odd generators."""
    even, odd = m * m + n * n, 2 * m * n
    return sum(comb(odd, j) * comb(even + k - j - 1, k - j) if even else comb(odd, j) * (k == j)
               for j in range(0, min(odd, k) + 1))


def classical_exterior(m: int, n: int, k: int) -> int:
    """Degree-k dimension of the super exterior algebra on m even and n odd vectors."""
    return sum(comb(m, j) * comb(n + k - j - 1, k - j) if n else comb(m, j) * (k == j)
               for j in range(0, min(m, k) + 1))
