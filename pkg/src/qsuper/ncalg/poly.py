"""Generator symbols and noncommutative polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .._expr import Builder, ParseError, parse_expression
from ..scalars import ONE, ZERO, Scalar, _scalar_atom, format_scalar

FAMILIES = ("z", "t", "x", "xi", "aux")
_FAMILY_RANK = {f: k for k, f in enumerate(FAMILIES)}


@dataclass(frozen=True, order=False)
class GeneratorSymbol:
    """``z``/``t`` carry (lower, upper) indices: ``z[i,j]`` is z_i^j.

    ``x`` and ``xi`` use ``lower`` only (``xi[i]`` is ξ^i).  ``aux`` symbols
    are identified by ``name``.
    """

    family: str
    lower: int = 0
    upper: int = 0
    parity: int = 0
    name: str = ""

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"unknown family {self.family!r}")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")

    @property
    def sort_key(self):
        return (_FAMILY_RANK[self.family], self.name, self.lower, self.upper)

    def __str__(self):
        if self.family in ("z", "t"):
            return f"{self.family}[{self.lower},{self.upper}]"
        if self.family in ("x", "xi"):
            return f"{self.family}[{self.lower}]"
        return self.name

    __repr__ = __str__


def z(lower: int, upper: int, parity_of: Callable[[int], int]) -> GeneratorSymbol:
    return GeneratorSymbol("z", lower, upper, (parity_of(lower) + parity_of(upper)) % 2)


def t(lower: int, upper: int, parity_of: Callable[[int], int]) -> GeneratorSymbol:
    return GeneratorSymbol("t", lower, upper, (parity_of(lower) + parity_of(upper)) % 2)


def aux(name: str, parity: int = 0) -> GeneratorSymbol:
    return GeneratorSymbol("aux", parity=parity, name=name)


Word = tuple  # tuple[GeneratorSymbol, ...]


def word_parity(w: Iterable[GeneratorSymbol]) -> int:
    return sum(g.parity for g in w) % 2


class NCPolynomial:
    """Finite linear combination of words; no zero coefficients are stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    self.terms[tuple(w)] = c

    # -- constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict) -> "NCPolynomial":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def unit(cls, c=ONE) -> "NCPolynomial":
        return cls({(): c})

    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls._raw({})

    @classmethod
    def gen(cls, g: GeneratorSymbol) -> "NCPolynomial":
        return cls._raw({(g,): ONE})

    @classmethod
    def word(cls, w, c=ONE) -> "NCPolynomial":
        return cls({tuple(w): c})

    @classmethod
    def coerce(cls, x) -> "NCPolynomial":
        if isinstance(x, NCPolynomial):
            return x
        if isinstance(x, GeneratorSymbol):
            return cls.gen(x)
        return cls.unit(Scalar.coerce(x))

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def generators(self) -> set:
        return {g for w in self.terms for g in w}

    def scalar_value(self) -> Optional[Scalar]:
        """The coefficient if this is a pure scalar, else None."""
        if not self.terms:
            return ZERO
        if set(self.terms) == {()}:
            return self.terms[()]
        return None

    def parity(self) -> Optional[int]:
        """Common parity of all terms, or None when mixed (zero counts as even)."""
        ps = {word_parity(w) for w in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "NCPolynomial":
        other = NCPolynomial.coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPolynomial":
        return self + (-NCPolynomial.coerce(other))

    def __rsub__(self, other) -> "NCPolynomial":
        return NCPolynomial.coerce(other) - self

    def scale(self, c) -> "NCPolynomial":
        c = Scalar.coerce(c)
        if not c:
            return NCPolynomial.zero()
        return NCPolynomial._raw({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPolynomial":
        if not isinstance(other, (NCPolynomial, GeneratorSymbol)):
            return self.scale(other)
        other = NCPolynomial.coerce(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w)
                c = c1 * c2
                v = c if v is None else v + c
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NCPolynomial._raw(out)

    def __rmul__(self, other) -> "NCPolynomial":
        if isinstance(other, GeneratorSymbol):
            return NCPolynomial.gen(other) * self
        return self.scale(other)

    def __pow__(self, k: int) -> "NCPolynomial":
        if k < 0:
            s = self.scalar_value()
            if s is None:
                raise ValueError("negative powers need an invertible scalar")
            return NCPolynomial.unit(s**k)
        out = NCPolynomial.unit()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = NCPolynomial.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def map_words(self, f: Callable[[tuple], "NCPolynomial"]) -> "NCPolynomial":
        out = NCPolynomial.zero()
        for w, c in self.terms.items():
            out = out + f(w).scale(c)
        return out

    def substitute(self, images: Mapping[GeneratorSymbol, "NCPolynomial"]) -> "NCPolynomial":
        """Algebra homomorphism extension of ``g -> images.get(g, g)``."""

        def img(w):
            out = NCPolynomial.unit()
            for g in w:
                out = out * images.get(g, NCPolynomial.gen(g))
            return out

        return self.map_words(img)

    # -- text ---------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-len(kv[0]), [g.sort_key for g in kv[0]]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"NCPolynomial({format_poly(self)!r})"


def _format_coeff(c: Scalar) -> tuple[str, str]:
    """(sign, body) for a coefficient; body is '' for +-1."""
    text = format_scalar(c)
    if len(c.num) == 1 and len(c.den) == 1 and "/" not in text:
        if text.startswith("-"):
            return "-", ("" if text == "-1" else text[1:])
        return "+", ("" if text == "1" else text)
    return "+", f"({text})"


def format_poly(poly: NCPolynomial, order=None) -> str:
    items = order(poly) if order else poly.sorted_terms()
    if not items:
        return "0"
    parts = []
    for w, c in items:
        sign, body = _format_coeff(c)
        word = "*".join(str(g) for g in w)
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


class UnknownGenerator(ParseError):
    pass


def make_builder(resolve: Callable[[str, tuple, int], Optional[GeneratorSymbol]]) -> Builder:
    """Builder for algebra expressions; ``resolve`` maps an atom to a generator or None."""

    def atom(name, indices, pos):
        if name in ("q", "p"):
            return NCPolynomial.unit(_scalar_atom(name, indices, pos))
        g = resolve(name, indices, pos)
        if g is None:
            label = f"{name}[{','.join(map(str, indices))}]" if indices else name
            raise UnknownGenerator(f"unknown generator {label}", pos)
        return NCPolynomial.gen(g)

    def div(a, b):
        s = b.scalar_value()
        if s is None:
            raise ValueError("can only divide by scalars")
        return a.scale(s.inverse())

    def power(a, k):
        return a**k

    return Builder(number=lambda n: NCPolynomial.unit(Scalar.from_int(n)), atom=atom, div=div, power=power)


def parse(text: str, resolve: Callable[[str, tuple, int], Optional[GeneratorSymbol]]) -> NCPolynomial:
    return parse_expression(text, make_builder(resolve))
