"""Coalgebra and Hopf structure maps.

Elements are handled formally, as noncommutative polynomials in the
symbols ``z[i,j]`` and ``t[i,j]`` (plus the inverse symbol ``ubar``).  They
are evaluated in the localisation ``L = E[ū]`` built by
:class:`~qsuper.berezin.BlockCalculus`, where ``t`` is the block inverse.
Tensor powers of ``L`` are compared factor by factor after lifting every
factor in one slot to a common ū-power.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

from .berezin import BlockCalculus, det_even, inversion_coeff, minus_p
from .ncalg.localize import LocElement, _add_into
from .ncalg.poly import GeneratorSymbol, NCPolynomial, aux, format_poly, make_builder
from .ncalg.relations import e_relations
from .rmatrix import HeckeSymmetry, compute_closure
from ._expr import parse_expression
from .scalars import ONE, ZERO, Scalar

UBAR = aux("ubar")


class UnregisteredGenerator(ValueError):
    """Raised when a structure map meets an auxiliary symbol it has no rule for."""


class ClosureMissing(ValueError):
    pass


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# -- formal tensors ---------------------------------------------------------


class FormalTensor:
    """Sum of pure tensors of words in the free algebra on z, t, ubar."""

    def __init__(self, arity: int, terms: Optional[dict] = None):
        self.arity = arity
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            if c:
                self.terms[k] = c

    @classmethod
    def pure(cls, factors: Iterable[NCPolynomial], c=ONE) -> "FormalTensor":
        factors = list(factors)
        out = cls(len(factors), {tuple(() for _ in factors): c})
        for pos, f in enumerate(factors):
            out = out._expand(pos, f)
        return out

    def _expand(self, pos: int, f: NCPolynomial) -> "FormalTensor":
        out: dict = {}
        for key, c in self.terms.items():
            for w, d in f.terms.items():
                k2 = key[:pos] + (key[pos] + w,) + key[pos + 1:]
                _add_into(out, {k2: c * d})
        return FormalTensor(self.arity, out)

    def __add__(self, other: "FormalTensor") -> "FormalTensor":
        out = dict(self.terms)
        _add_into(out, other.terms)
        return FormalTensor(self.arity, out)

    def __neg__(self):
        return FormalTensor(self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FormalTensor":
        return FormalTensor(self.arity, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "FormalTensor") -> "FormalTensor":
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        out: dict = {}
        for ka, ca in self.terms.items():
            pa = [_wpar(w) for w in ka]
            for kb, cb in other.terms.items():
                # (a1⊗a2)(b1⊗b2) = (-1)^{|a2||b1|} a1b1⊗a2b2
                s = 0
                for i in range(self.arity):
                    if pa[i]:
                        s += sum(_wpar(kb[j]) for j in range(i))
                key = tuple(x + y for x, y in zip(ka, kb))
                _add_into(out, {key: ca * cb * _sign(s)})
        return FormalTensor(self.arity, out)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalTensor):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.terms.items():
            body = " ⊗ ".join(format_poly(NCPolynomial({w: ONE})) for w in key)
            parts.append(f"({c})*[{body}]")
        return " + ".join(parts)


def _wpar(w: tuple) -> int:
    return sum(g.parity for g in w) % 2


def apply_at(ft: FormalTensor, pos: int, f: Callable[[NCPolynomial], FormalTensor]) -> FormalTensor:
    """Replace slot ``pos`` by the tensor ``f(slot)`` (``f`` even)."""
    out = None
    for key, c in ft.terms.items():
        img = f(NCPolynomial({key[pos]: ONE}))
        for ikey, ic in img.terms.items():
            # Δ is even and slots stay in place, so no Koszul sign
            new = key[:pos] + ikey + key[pos + 1:]
            piece = FormalTensor(ft.arity + img.arity - 1, {new: c * ic})
            out = piece if out is None else out + piece
    return out if out is not None else FormalTensor(ft.arity + 1)


# -- the envelope -----------------------------------------------------------


@dataclass
class AxiomRecord:
    name: str
    generator: str
    ok: bool
    residual: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "generator": self.generator, "ok": self.ok, "residual": self.residual}


SIGN_READINGS = {
    # exponent of -1 in S(t_i^j) = ± G_j z_i^j G_i^-1, as a function of parities
    "(k+i)j": lambda i, j: (j + i) * j,
    "i(j+1)": lambda i, j: i * (j + 1),
    "j(i+1)": lambda i, j: j * (i + 1),
    "none": lambda i, j: 0,
}


class HopfEnvelope:
    """``H`` realised as ``L = E[ū]`` with ``t`` the entries of ``Z^-1``."""

    def __init__(self, h: HeckeSymmetry, degree_bound: int = 8, E=None, sign_reading: Optional[str] = None):
        self.h = h
        self.degree_bound = degree_bound
        self.calc = BlockCalculus(h, E, degree_bound)
        self.L = self.calc.L
        self.E = self.calc.E
        self.d = h.dim
        self.par = h.space.par
        self._sign_reading = sign_reading

    @classmethod
    def build(cls, h: HeckeSymmetry, degree_bound: int = 8) -> "HopfEnvelope":
        return cls(h, degree_bound)

    # -- symbols ------------------------------------------------------------
    def z(self, lower: int, upper: int) -> GeneratorSymbol:
        return GeneratorSymbol("z", lower, upper, (self.par(lower) + self.par(upper)) % 2)

    def t(self, lower: int, upper: int) -> GeneratorSymbol:
        return GeneratorSymbol("t", lower, upper, (self.par(lower) + self.par(upper)) % 2)

    def zp(self, lower, upper) -> NCPolynomial:
        return NCPolynomial.gen(self.z(lower, upper))

    def tp(self, lower, upper) -> NCPolynomial:
        return NCPolynomial.gen(self.t(lower, upper))

    def generators(self) -> list:
        idx = range(1, self.d + 1)
        return [self.z(i, j) for i in idx for j in idx] + [self.t(i, j) for i in idx for j in idx]

    def _resolve(self, name, indices, pos=None):
        if name in ("z", "t") and len(indices) == 2 and all(1 <= k <= self.d for k in indices):
            return (self.z if name == "z" else self.t)(*indices)
        if name == "ubar" and not indices:
            return UBAR
        return None

    def parse(self, text: str) -> NCPolynomial:
        return parse_expression(text, make_builder(self._resolve))

    # -- evaluation in L ----------------------------------------------------
    @cached_property
    def _images(self) -> dict:
        out = {}
        for g in self.generators():
            if g.family == "z":
                out[g] = self.calc.loc(NCPolynomial.gen(g))
            else:
                out[g] = self.calc.tentry(g.lower, g.upper)
        out[UBAR] = self.L.ubar()
        return out

    def value(self, g: GeneratorSymbol) -> LocElement:
        try:
            return self._images[g]
        except KeyError:
            raise UnregisteredGenerator(f"no value for generator {g}") from None

    def evaluate(self, e) -> LocElement:
        if isinstance(e, LocElement):
            return e
        e = NCPolynomial.coerce(e)
        total = self.L.zero()
        for w, c in e.terms.items():
            acc = self.L.one()
            for g in w:
                acc = acc * self.value(g)
            total = total + acc.scale(c)
        return total

    def reduce(self, e) -> str:
        if isinstance(e, str):
            e = self.parse(e)
        return self.L.format(self.evaluate(e))

    def is_zero(self, e) -> bool:
        return self.evaluate(e).is_zero()

    # -- tensor evaluation --------------------------------------------------
    def evaluate_tensor(self, ft: FormalTensor) -> dict:
        """Coordinates of ``ft`` in ``E^{⊗k}``, every slot lifted to a common ū-power."""
        rows = []
        for key, c in ft.terms.items():
            vals = [self.evaluate(NCPolynomial({w: ONE})) for w in key]
            rows.append((c, vals))
        Ks = [max((v[i].K for _, v in rows), default=0) for i in range(ft.arity)]
        out: dict = {}
        for c, vals in rows:
            parts = [self.L._lift(v.x, Ks[i] - v.K) for i, v in enumerate(vals)]
            for combo in itertools.product(*(p.items() for p in parts)):
                coeff = c
                for _, cc in combo:
                    coeff = coeff * cc
                _add_into(out, {tuple(w for w, _ in combo): coeff})
        return out

    def tensor_is_zero(self, ft: FormalTensor) -> bool:
        return not self.evaluate_tensor(ft)

    # -- structure maps -----------------------------------------------------
    def coproduct_gen(self, g: GeneratorSymbol) -> FormalTensor:
        if g.family == "z":
            i, j = g.lower, g.upper
            terms = {((self.z(k, j),), (self.z(i, k),)): ONE for k in range(1, self.d + 1)}
            return FormalTensor(2, terms)
        if g.family == "t":
            i, j = g.lower, g.upper
            terms = {((self.t(i, k),), (self.t(k, j),)): ONE for k in range(1, self.d + 1)}
            return FormalTensor(2, terms)
        raise UnregisteredGenerator(f"unregistered aux generator {g}")

    def coproduct(self, e) -> FormalTensor:
        e = NCPolynomial.coerce(e)
        out = FormalTensor(2)
        for w, c in e.terms.items():
            acc = FormalTensor(2, {((), ()): c})
            for g in w:
                acc = acc * self.coproduct_gen(g)
            out = out + acc
        return out

    def counit_gen(self, g: GeneratorSymbol) -> Scalar:
        if g.family in ("z", "t"):
            return ONE if g.lower == g.upper else ZERO
        if g == UBAR:
            # ε(u) = 1 since u = det A · det D
            return ONE
        raise UnregisteredGenerator(f"unregistered aux generator {g}")

    def counit(self, e) -> Scalar:
        if isinstance(e, LocElement):
            total = ZERO
            for w, c in e.x.items():
                total = total + c * self._counit_word(tuple(self.E.generators[k] for k in w))
            return total
        e = NCPolynomial.coerce(e)
        return sum((c * self._counit_word(w) for w, c in e.terms.items()), ZERO)

    def _counit_word(self, w) -> Scalar:
        c = ONE
        for g in w:
            c = c * self.counit_gen(g)
            if not c:
                break
        return c

    @cached_property
    def G(self) -> list:
        closure = self.h.closure or compute_closure(self.h)
        if closure is None:
            raise ClosureMissing("closure data missing")
        return [closure.G.entry((k,), (k,)) for k in range(1, self.d + 1)]

    @property
    def sign_reading(self) -> str:
        if self._sign_reading is None:
            self._sign_reading = self.choose_sign_reading()
        return self._sign_reading

    def antipode_gen(self, g: GeneratorSymbol, reading: Optional[str] = None) -> NCPolynomial:
        i, j = g.lower, g.upper
        if g.family == "z":
            return NCPolynomial.gen(self.t(i, j)).scale(Scalar.from_int(_sign(self.par(i) * (self.par(j) + 1))))
        if g.family == "t":
            reading = reading or self.sign_reading
            e = SIGN_READINGS[reading](self.par(i), self.par(j))
            c = self.G[j - 1] / self.G[i - 1] * _sign(e)
            return NCPolynomial.gen(self.z(i, j)).scale(c)
        raise UnregisteredGenerator(f"unregistered aux generator {g}")

    def antipode(self, e, reading: Optional[str] = None) -> NCPolynomial:
        """Super anti-homomorphism: ``S(ab) = (-1)^{|a||b|} S(b) S(a)``."""
        e = NCPolynomial.coerce(e)
        out = NCPolynomial.zero()
        for w, c in e.terms.items():
            acc = NCPolynomial.unit(c)
            seen = 0  # parity of the letters already processed
            for g in w:
                s = _sign(seen * g.parity)
                acc = (self.antipode_gen(g, reading) * acc).scale(Scalar.from_int(s))
                seen = (seen + g.parity) % 2
            out = out + acc
        return out

    def multiply(self, ft: FormalTensor) -> NCPolynomial:
        out = NCPolynomial.zero()
        for key, c in ft.terms.items():
            w = ()
            for part in key:
                w = w + part
            out = out + NCPolynomial({w: c})
        return out

    def antipode_axiom(self, g: GeneratorSymbol, reading: Optional[str] = None) -> tuple[LocElement, LocElement]:
        """``m(S⊗id)Δg − ε(g)`` and ``m(id⊗S)Δg − ε(g)`` evaluated in L."""
        D = self.coproduct_gen(g)
        left = right = NCPolynomial.zero()
        for (a, b), c in D.terms.items():
            A, B = NCPolynomial({a: ONE}), NCPolynomial({b: ONE})
            left = left + (self.antipode(A, reading) * B).scale(c)
            right = right + (A * self.antipode(B, reading)).scale(c)
        eps = self.counit_gen(g)
        one = NCPolynomial.unit(eps) if eps else NCPolynomial.zero()
        return self.evaluate(left - one), self.evaluate(right - one)

    def choose_sign_reading(self) -> str:
        """First reading of the S(t) sign that satisfies the antipode axiom on all t generators."""
        ts = [g for g in self.generators() if g.family == "t"]
        for name in SIGN_READINGS:
            if all(a.is_zero() and b.is_zero() for g in ts for a, b in [self.antipode_axiom(g, name)]):
                return name
        raise ArithmeticError("no sign reading satisfies the antipode axiom")

    def is_group_like(self, e) -> tuple[bool, dict]:
        e = NCPolynomial.coerce(e)
        if not e:
            raise ValueError("zero element")
        diff = self.coproduct(e) - FormalTensor.pure([e, e])
        coords = self.evaluate_tensor(diff)
        eps = self.counit(e)
        ok = not coords and eps == ONE
        return ok, {"delta_terms": len(coords), "counit": str(eps)}

    # -- defining relations of H ---------------------------------------------
    def srelations(self) -> list:
        """``Σ_k (-1)^{i(k+1)} z^j_k t_i^k − δ`` and ``Σ_k (-1)^{k(j+1)} t^j_k z_i^k − δ``."""
        p, d = self.par, self.d
        out = []
        for i, j in itertools.product(range(1, d + 1), repeat=2):
            delta = NCPolynomial.unit() if i == j else NCPolynomial.zero()
            a = b = NCPolynomial.zero()
            for k in range(1, d + 1):
                a = a + (self.zp(k, j) * self.tp(i, k)).scale(Scalar.from_int(_sign(p(i) * (p(k) + 1))))
                b = b + (self.tp(k, j) * self.zp(i, k)).scale(Scalar.from_int(_sign(p(k) * (p(j) + 1))))
            out.append(((i, j, "zt"), a - delta))
            out.append(((i, j, "tz"), b - delta))
        return out

    def ztrelations(self) -> list:
        """``(-1)^{k(i+j)} R^{pj}_{ql} z_j^i t_k^l = (-1)^{m(n+p)} t_n^p z_q^m R^{ni}_{mk}``."""
        p, d, R = self.par, self.d, self.h.R
        rng = range(1, d + 1)
        out = []
        for i, pp, q, k in itertools.product(rng, repeat=4):
            acc = NCPolynomial.zero()
            for j, l in itertools.product(rng, repeat=2):
                c = R.entry((pp, j), (q, l))
                if c:
                    acc = acc + (self.zp(j, i) * self.tp(k, l)).scale(c * _sign(p(k) * (p(i) + p(j))))
            for m, n in itertools.product(rng, repeat=2):
                c = R.entry((n, i), (m, k))
                if c:
                    acc = acc - (self.tp(n, pp) * self.zp(q, m)).scale(c * _sign(p(m) * (p(n) + p(pp))))
            if acc:
                out.append(((i, pp, q, k), acc))
        return out

    def ttrelations(self) -> list:
        """``(-1)^{s(i+p)} R^{kl}_{ps} t^s_j t^p_i = (-1)^{l(q+k)} t^l_n t^k_q R^{qn}_{ij}``."""
        p, d, R = self.par, self.d, self.h.R
        rng = range(1, d + 1)
        out = []
        for k, l, i, j in itertools.product(rng, repeat=4):
            acc = NCPolynomial.zero()
            for pp, s in itertools.product(rng, repeat=2):
                c = R.entry((k, l), (pp, s))
                if c:
                    acc = acc + (self.tp(j, s) * self.tp(i, pp)).scale(c * _sign(p(s) * (p(i) + p(pp))))
            for q, n in itertools.product(rng, repeat=2):
                c = R.entry((q, n), (i, j))
                if c:
                    acc = acc - (self.tp(n, l) * self.tp(q, k)).scale(c * _sign(p(l) * (p(q) + p(k))))
            if acc:
                out.append(((k, l, i, j), acc))
        return out

    def zrelations(self) -> list:
        return [((n,), r) for n, r in enumerate(e_relations(self.h))]

    def relation_residuals(self, group: str) -> dict:
        """Nonzero evaluated relations of one group (``z``, ``s``, ``zt``, ``tt``)."""
        rels = {"z": self.zrelations, "s": self.srelations, "zt": self.ztrelations, "tt": self.ttrelations}[group]()
        bad = {}
        for key, r in rels:
            v = self.evaluate(r)
            if not v.is_zero():
                bad[key] = self.L.format(v)
        return {"checked": len(rels), "nonzero": bad}

    # -- Berezinian ------------------------------------------------------------
    def ber_formal(self, tau=None, theta=None, odd_weight: str = "printed") -> NCPolynomial:
        """Permutation formula for Ber in the formal z, t symbols."""
        m = self.calc.m
        n = self.calc.n
        even, odd = self.calc.even, self.calc.odd
        left = det_even(lambda lo, up: self.zp(lo, up), even, tau) if m else NCPolynomial.unit()
        if not n:
            return left
        theta = tuple(range(n)) if theta is None else tuple(theta)
        norm = inversion_coeff(theta, odd, minus_p)
        right = NCPolynomial.zero()
        for nu in itertools.permutations(range(n)):
            c = norm / inversion_coeff(nu, odd, minus_p)
            if odd_weight == "dual":
                c = c.inverse()
            term = NCPolynomial.unit()
            for a in range(n):
                term = term * self.tp(odd[nu[a]], odd[theta[a]])
            right = right + term.scale(c)
        return left * right


def tensor_power_zero(env: HopfEnvelope, ft: FormalTensor) -> bool:
    return env.tensor_is_zero(ft)


def coassociativity(env: HopfEnvelope, g: GeneratorSymbol) -> bool:
    D = env.coproduct_gen(g)
    left = apply_at(D, 0, env.coproduct)
    right = apply_at(D, 1, env.coproduct)
    return env.tensor_is_zero(left - right)


def counit_axiom(env: HopfEnvelope, g: GeneratorSymbol) -> tuple[bool, bool]:
    """``(ε⊗id)Δg = g = (id⊗ε)Δg``, checked on the formal side."""
    D = env.coproduct_gen(g)
    lhs = rhs = NCPolynomial.zero()
    for (a, b), c in D.terms.items():
        lhs = lhs + NCPolynomial({b: c}).scale(env._counit_word(a))
        rhs = rhs + NCPolynomial({a: c}).scale(env._counit_word(b))
    gp = NCPolynomial.gen(g)
    return env.evaluate(lhs - gp).is_zero(), env.evaluate(rhs - gp).is_zero()


def hopf_axioms(env: HopfEnvelope) -> list[AxiomRecord]:
    out = []
    for g in env.generators():
        out.append(AxiomRecord("coassociativity", str(g), coassociativity(env, g)))
        a, b = counit_axiom(env, g)
        out.append(AxiomRecord("counit", str(g), a and b))
        s1, s2 = env.antipode_axiom(g)
        ok = s1.is_zero() and s2.is_zero()
        out.append(AxiomRecord("antipode", str(g), ok, "" if ok else f"{s1} | {s2}"))
    return out


def antipode(env: HopfEnvelope, e) -> LocElement:
    """``S(e)`` evaluated in L."""
    return env.evaluate(env.antipode(e))


def coproduct(env: HopfEnvelope, e) -> FormalTensor:
    return env.coproduct(e)


def counit(env: HopfEnvelope, e) -> Scalar:
    return env.counit(e)


def is_group_like(env: HopfEnvelope, e) -> tuple[bool, dict]:
    return env.is_group_like(e)
