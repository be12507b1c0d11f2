"""Localisation of a completed presentation at a quasi-central element.

Elements of ``L = E[ū]`` are stored as ``x·ū^K`` with ``x`` in normal form.
The commutation rule used to move ū to the right is

    ū·e = e'·ū − ū·r·ū,      e' = μ(e)·e,   r = nf(u·e') − nf(e·u),

where μ is multiplicative on words and is discovered per generator from the
lowest odd-weight part of ``g·u`` and ``u·g``.  When ``u`` is exactly
quasi-central, r = 0 and this is the usual rule ``ū·g = μ_g·g·ū``.  Otherwise
r lies strictly higher in the filtration by number of odd letters (the
defining rules never lower it), so the recursion stops.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable, Optional

from .. import linalg
from .._expr import Builder, parse_expression
from ..scalars import ONE, ZERO, Scalar, _scalar_atom, format_scalar
from .poly import GeneratorSymbol, NCPolynomial, UnknownGenerator, _format_coeff, aux
from .rewrite import Presentation, word_key


class QuasiCentralityError(ValueError):
    pass


class FiltrationError(RuntimeError):
    pass


def _add_into(out: dict, d: dict, c=ONE) -> dict:
    for w, v in d.items():
        nv = out.get(w)
        nv = c * v if nv is None else nv + c * v
        if nv:
            out[w] = nv
        else:
            del out[w]
    return out


class LocElement:
    """``x·ū^K`` with ``x`` an internal normal-form dict of the base presentation."""

    __slots__ = ("alg", "x", "K")

    def __init__(self, alg: "LocalizedAlgebra", x: dict, K: int = 0):
        self.alg = alg
        self.x = x
        self.K = K if x else 0

    # arithmetic
    def _coerce(self, other) -> "LocElement":
        if isinstance(other, LocElement):
            return other
        if isinstance(other, (NCPolynomial, GeneratorSymbol)):
            return self.alg.from_poly(NCPolynomial.coerce(other))
        return self.alg.scalar(Scalar.coerce(other))

    def __add__(self, other):
        other = self._coerce(other)
        K = max(self.K, other.K)
        x = dict(self.alg._lift(self.x, K - self.K))
        _add_into(x, self.alg._lift(other.x, K - other.K))
        return LocElement(self.alg, x, K)

    __radd__ = __add__

    def __neg__(self):
        return LocElement(self.alg, {w: -c for w, c in self.x.items()}, self.K)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "LocElement":
        c = Scalar.coerce(c)
        if not c:
            return LocElement(self.alg, {}, 0)
        return LocElement(self.alg, {w: c * v for w, v in self.x.items()}, self.K)

    def __mul__(self, other):
        if not isinstance(other, (LocElement, NCPolynomial, GeneratorSymbol)):
            return self.scale(other)
        return self.alg.mul(self, self._coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (NCPolynomial, GeneratorSymbol)):
            return self.alg.mul(self._coerce(other), self)
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.x

    def __bool__(self):
        return bool(self.x)

    def __eq__(self, other):
        try:
            return (self - self._coerce(other)).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def parity(self) -> Optional[int]:
        ps = {sum(self.alg.base.generators[k].parity for k in w) % 2 for w in self.x}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def __str__(self):
        return self.alg.format(self)

    def __repr__(self):
        return f"LocElement({self.alg.format(self)!r})"


class LocalizedAlgebra:
    """``base[ū]`` with ``ū`` a two-sided inverse of ``u``."""

    def __init__(self, base: Presentation, u, name: str = "ubar", max_depth: int = 64):
        if base.certificate is None or not base.certificate.clean:
            raise ValueError("base presentation needs a clean confluence certificate")
        self.base = base
        self.name = name
        self.symbol = aux(name)
        u = base.parse(u) if isinstance(u, str) else NCPolynomial.coerce(u)
        self.u_poly = u
        self.u = base.nf(base.to_internal(u))
        if not self.u:
            raise QuasiCentralityError("cannot invert zero")
        self.max_depth = max_depth
        self._weight = [g.parity for g in base.generators]
        self._upow = {0: {(): ONE}, 1: self.u}
        self._move_memo: dict = {}
        self._u_images: dict = {}
        self.mu = self._discover()

    # -- set up -------------------------------------------------------------
    def weight(self, w: tuple) -> int:
        return sum(self._weight[k] for k in w)

    def _discover(self) -> dict:
        mu = {}
        base = self.base
        for k, g in enumerate(base.generators):
            gen = {(k,): ONE}
            gu = base.nf_mul(gen, self.u)
            ug = base.nf_mul(self.u, gen)
            ws = [self.weight(w) for w in itertools.chain(gu, ug)]
            if not ws:
                raise QuasiCentralityError(f"element is not quasi-central: u*{g} and {g}*u vanish")
            low = min(ws)
            lg = {w: c for w, c in gu.items() if self.weight(w) == low}
            lu = {w: c for w, c in ug.items() if self.weight(w) == low}
            if not lg or not lu:
                raise QuasiCentralityError(f"element is not quasi-central: fails for generator {g}")
            w0 = max(lu, key=word_key)
            lam = lg.get(w0, ZERO) / lu[w0]
            if not lam:
                raise QuasiCentralityError(f"commutation scalar vanishes for generator {g}")
            if set(lg) != set(lu) or any(lg[w] != lam * lu[w] for w in lu):
                raise QuasiCentralityError(f"element is not quasi-central: fails for generator {g}")
            mu[k] = lam
        return mu

    @property
    def exact(self) -> bool:
        """True when ``ū·g = μ_g·g·ū`` holds exactly for every generator."""
        return all(self.exact_for(g) for g in self.base.generators)

    def commutation_scalars(self) -> dict:
        """``{generator: λ_g}`` with ``u·g ≡ λ_g·g·u`` modulo higher odd weight."""
        return {g: self.mu[k].inverse() for k, g in enumerate(self.base.generators)}

    # -- core rules ---------------------------------------------------------
    def upow(self, k: int) -> dict:
        hit = self._upow.get(k)
        if hit is None:
            hit = self.base.nf_mul(self.upow(k - 1), self.u)
            self._upow[k] = hit
        return hit

    def _lift(self, x: dict, k: int) -> dict:
        """``x·u^k``, used to rewrite ``x·ū^K`` as ``(x·u^k)·ū^(K+k)``."""
        if k == 0 or not x:
            return x
        return self.base.nf_mul(x, self.upow(k))

    def _move_word(self, w: tuple, depth: int = 0) -> dict:
        """``ū·w = Σ_j y_j·ū^j`` as ``{j: y_j}``."""
        hit = self._move_memo.get(w)
        if hit is not None:
            return hit
        if depth > self.max_depth:
            raise FiltrationError("commutation recursion did not terminate")
        c = ONE
        for k in w:
            c = c * self.mu[k]
        base = self.base
        shifted = {w: c}
        r = base.nf_mul(self.u, shifted)
        _add_into(r, base.nf_mul({w: ONE}, self.u), -ONE)
        out: dict = {1: shifted}
        if r:
            wt = self.weight(w) + min(self.weight(v) for v in self.u)
            if any(self.weight(v) <= wt for v in r):
                raise FiltrationError(f"correction term does not raise the odd weight at {base._text(w)}")
            for j, y in self._move(r, depth + 1).items():
                dst = out.setdefault(j + 1, {})
                _add_into(dst, y, -ONE)
                if not dst:
                    del out[j + 1]
        self._move_memo[w] = out
        return out

    def _move(self, x: dict, depth: int = 0) -> dict:
        out: dict = {}
        for w, c in x.items():
            for j, y in self._move_word(w, depth).items():
                dst = out.setdefault(j, {})
                _add_into(dst, y, c)
                if not dst:
                    del out[j]
        return out

    def _ubar_times(self, K: int, x: dict) -> dict:
        """``ū^K·x`` as ``{j: y_j}``."""
        parts = {0: x}
        for _ in range(K):
            nxt: dict = {}
            for j, y in parts.items():
                for jj, yy in self._move(y).items():
                    dst = nxt.setdefault(j + jj, {})
                    _add_into(dst, yy)
                    if not dst:
                        del nxt[j + jj]
            parts = nxt
        return parts

    # -- element API --------------------------------------------------------
    def element(self, x: dict, K: int = 0) -> LocElement:
        return LocElement(self, x, K)

    def one(self) -> LocElement:
        return LocElement(self, {(): ONE}, 0)

    def zero(self) -> LocElement:
        return LocElement(self, {}, 0)

    def scalar(self, c) -> LocElement:
        c = Scalar.coerce(c)
        return LocElement(self, {(): c} if c else {}, 0)

    def ubar(self) -> LocElement:
        return LocElement(self, {(): ONE}, 1)

    def from_poly(self, poly: NCPolynomial) -> LocElement:
        """Image of a polynomial in the base generators and ū."""
        out = self.zero()
        for w, c in poly.terms.items():
            acc = self.scalar(c)
            run: list = []
            for g in w:
                if g == self.symbol:
                    if run:
                        acc = acc * LocElement(self, self.base.nf({tuple(self.base.rank[s] for s in run): ONE}), 0)
                        run = []
                    acc = acc * self.ubar()
                else:
                    run.append(g)
            if run:
                acc = acc * LocElement(self, self.base.nf({tuple(self.base.rank[s] for s in run): ONE}), 0)
            out = out + acc
        return out

    def gen(self, g: GeneratorSymbol) -> LocElement:
        return LocElement(self, self.base.nf({(self.base.rank[g],): ONE}), 0)

    def mul(self, a: LocElement, b: LocElement) -> LocElement:
        if not a.x or not b.x:
            return self.zero()
        parts = self._ubar_times(a.K, b.x) if a.K else {0: b.x}
        J = max(parts) + b.K
        out: dict = {}
        for j, y in parts.items():
            prod = self.base.nf_mul(a.x, y)
            _add_into(out, self._lift(prod, J - j - b.K))
        return LocElement(self, out, J)

    # -- canonical form -----------------------------------------------------
    def _content(self, w: tuple):
        gens = self.base.generators
        return (tuple(sorted(gens[k].lower for k in w)), tuple(sorted(gens[k].upper for k in w)),
                tuple(sorted(gens[k].name for k in w)))

    def _words_with_content(self, length: int, content) -> list:
        """Normal words of the given length and multiset content."""
        gens = self.base.generators
        lowers, uppers, names = (Counter(c) for c in content)
        out = []

        def rec(prefix, lo, up, nm):
            if len(prefix) == length:
                out.append(prefix)
                return
            for k, g in enumerate(gens):
                if lo[g.lower] and up[g.upper] and nm[g.name]:
                    w = prefix + (k,)
                    if not self.base.is_normal(w[-self.base.max_rule_length:]):
                        continue
                    lo[g.lower] -= 1
                    up[g.upper] -= 1
                    nm[g.name] -= 1
                    rec(w, lo, up, nm)
                    lo[g.lower] += 1
                    up[g.upper] += 1
                    nm[g.name] += 1

        rec((), lowers, uppers, names)
        return out

    def divide_right(self, x: dict) -> Optional[dict]:
        """``y`` with ``nf(y·u) = x``, or None."""
        contents = {self._content(w) for w in self.u}
        if len(contents) != 1 or len({len(w) for w in self.u}) != 1:
            return None
        (uc,) = contents
        du = len(next(iter(self.u)))
        blocks: dict = {}
        for w, c in x.items():
            blocks.setdefault((len(w), self._content(w)), {})[w] = c
        y: dict = {}
        for (length, content), part in blocks.items():
            if length < du:
                return None
            rest = []
            for have, need in zip(content, uc):
                cnt = Counter(have)
                cnt.subtract(Counter(need))
                if any(v < 0 for v in cnt.values()):
                    return None
                rest.append(tuple(sorted(cnt.elements())))
            cands = self._words_with_content(length - du, tuple(rest))
            if not cands:
                return None
            cols = {}
            for v in cands:
                img = self._u_images.get(v)
                if img is None:
                    img = self._u_images[v] = self.base.nf_mul({v: ONE}, self.u)
                cols[v] = img
            eqs: dict = {}
            for v, img in cols.items():
                for w, c in img.items():
                    eqs.setdefault(w, {})[v] = c
            for w in part:
                eqs.setdefault(w, {})
            rows = list(eqs.values())
            rhs = [part.get(w, ZERO) for w in eqs]
            sol = linalg.solve(rows, rhs, list(cands))
            if sol is None:
                return None
            for v, c in sol.items():
                if c:
                    y[v] = c
        return y

    def canonical(self, a: LocElement) -> LocElement:
        """Same element with the smallest possible ū-exponent."""
        x, K = a.x, a.K
        while K > 0 and x:
            y = self.divide_right(x)
            if y is None:
                break
            x, K = y, K - 1
        return LocElement(self, x, K)

    # -- text ---------------------------------------------------------------
    def format(self, a: LocElement, canonical: bool = True) -> str:
        if canonical:
            a = self.canonical(a)
        if not a.x:
            return "0"
        tail = "" if a.K == 0 else (self.name if a.K == 1 else f"{self.name}^{a.K}")
        parts = []
        for w, c in sorted(a.x.items(), key=lambda kv: word_key(kv[0]), reverse=True):
            sign, body = _format_coeff(c)
            letters = [self.base._text(w)] if w else []
            if tail:
                letters.append(tail)
            word = "*".join(letters)
            if not word:
                text = body or "1"
            elif body:
                text = f"{body}*{word}"
            else:
                text = word
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def make_builder(self, extra: Optional[Callable] = None) -> Builder:
        """Expression builder; ``extra(name, indices)`` may supply further atoms."""

        def atom(name, indices, pos):
            if name in ("q", "p"):
                return self.scalar(_scalar_atom(name, indices, pos))
            if name == self.name and not indices:
                return self.ubar()
            if extra is not None:
                hit = extra(name, indices)
                if hit is not None:
                    return hit
            g = self.base.resolve(name, indices)
            if g is None:
                label = f"{name}[{','.join(map(str, indices))}]" if indices else name
                raise UnknownGenerator(f"unknown generator {label}", pos)
            return self.gen(g)

        def div(a, b):
            s = b.x.get(()) if b.K == 0 and set(b.x) <= {()} else None
            if s is None:
                raise ValueError("can only divide by scalars")
            return a.scale(s.inverse())

        return Builder(
            number=lambda n: self.scalar(Scalar.from_int(n)),
            atom=atom,
            div=div,
            power=lambda a, k: a**k,
        )

    def parse(self, text: str, extra: Optional[Callable] = None) -> LocElement:
        return parse_expression(text, self.make_builder(extra))

    def to_json(self) -> dict:
        inv = self.commutation_scalars()
        return {
            "base": self.base.name,
            "aux": self.name,
            "inverse_of": self.base.format(self.base.from_internal(self.u)),
            "rules": [f"{self.name}*u -> 1", f"u*{self.name} -> 1"] + [
                f"{self.name}*{g} -> ({format_scalar(inv[g].inverse())})*{g}*{self.name}"
                + ("" if self.exact_for(g) else f" - {self.name}*r[{g}]*{self.name}")
                for g in self.base.generators
            ],
        }

    def exact_for(self, g: GeneratorSymbol) -> bool:
        return set(self._move_word((self.base.rank[g],))) == {1}


def adjoin_inverse(base: Presentation, u, name: str = "ubar") -> LocalizedAlgebra:
    """Localise ``base`` at ``u``; see :class:`LocalizedAlgebra`."""
    return LocalizedAlgebra(base, u, name)
