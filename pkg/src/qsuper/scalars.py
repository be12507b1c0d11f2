"""Exact coefficients: rational functions in ``q`` and the multiparameters ``p[i,j]``.

Every coefficient in the package is a :class:`Scalar`.  A scalar is stored as
a reduced fraction of two integer polynomials in the variables ``q`` and
``p[i,j]`` (``i < j``).  Laurent monomials are ordinary fractions whose
denominator is a monomial; ``p[j,i]`` with ``j > i`` is read as ``p[i,j]^-1``.

The representation is canonical (numerator and denominator coprime, integer
content absorbed, denominator with positive leading coefficient), so two
scalars are equal exactly when their stored polynomials are equal.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence, Union

import flint

from ._expr import Builder, ParseError, parse_expression

MAX_DIM = 6
MAX_EXPONENT = 2**31 - 1

PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(1, MAX_DIM + 1), 2))
VARIABLES: tuple[str, ...] = ("q",) + tuple(f"p[{i},{j}]" for i, j in PAIRS)
_FLINT_NAMES = ("q",) + tuple(f"p_{i}_{j}" for i, j in PAIRS)
_CTX = flint.fmpz_mpoly_ctx.get(_FLINT_NAMES, "deglex")
_GENS = _CTX.gens()
_ZERO_POLY = _CTX.from_dict({})
_ONE_POLY = _CTX.constant(1)
_VAR_INDEX = {name: k for k, name in enumerate(VARIABLES)}


def _poly_is_monomial(f) -> bool:
    return len(f) == 1


class Scalar:
    """Immutable element of Q(q, p[i,j])."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = _ONE_POLY
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "Scalar":
        return cls(_CTX.constant(int(n)), _ONE_POLY, _canonical=True)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "Scalar":
        f = Fraction(f)
        return cls(_CTX.constant(f.numerator), _CTX.constant(f.denominator), _canonical=True)

    @classmethod
    def coerce(cls, x: "ScalarLike") -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, bool):
            raise TypeError("cannot coerce bool to Scalar")
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_laurent_monomial(self) -> bool:
        return _poly_is_monomial(self.num) and _poly_is_monomial(self.den)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def variables(self) -> set[str]:
        used = set()
        for poly in (self.num, self.den):
            for exps in poly.monoms():
                used.update(VARIABLES[k] for k, e in enumerate(exps) if e)
        return used

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return Scalar(self.num + other.num, _ONE_POLY, _canonical=True)
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return Scalar(self.num * other.num, _ONE_POLY, _canonical=True)
        # cross-cancel keeps intermediate sizes small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num, other.den) if g1.is_one() else (self.num / g1, other.den / g1)
        n2, d1 = (other.num, self.den) if g2.is_one() else (other.num / g2, self.den / g2)
        return Scalar(*_normalize_sign(n1 * n2, d1 * d2), _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("zero divisor")
        return Scalar(*_normalize_sign(self.den, self.num), _canonical=True)

    def __truediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        if abs(k) > MAX_EXPONENT:
            raise OverflowError("exponent out of range")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        num, den = self.num**k, self.den**k
        _check_degrees(num)
        _check_degrees(den)
        return Scalar(num, den, _canonical=True)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except (TypeError, ParseError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num.terms()), tuple(self.den.terms())))
        return self._hash

    # -- evaluation ---------------------------------------------------------
    def specialize(self, bindings: Mapping[str, "ScalarLike"]) -> "Scalar":
        """Substitute values for variables (keys ``'q'`` or ``'p[i,j]'``)."""
        values = {}
        for name, value in bindings.items():
            key = _canonical_variable(name)
            value = Scalar.coerce(value)
            if value.is_zero():
                raise ValueError(f"cannot bind {name} to zero")
            values[_VAR_INDEX[key]] = value
        num = _substitute(self.num, values)
        den = _substitute(self.den, values)
        if den.is_zero():
            raise ZeroDivisionError("pole")
        return num / den

    def evaluate_mod(self, point: Sequence[int], prime: int) -> int:
        """Image in GF(prime) at integer values for (q, p[1,2], p[1,3], ...)."""
        return _eval_mod(self.num, self.den, tuple(point), prime)

    # -- text ---------------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


ScalarLike = Union[Scalar, int, Fraction, str]


def _maybe(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Scalar.coerce(x)
    return NotImplemented


def _check_degrees(poly) -> None:
    if poly.is_zero():
        return
    if max(poly.degrees()) > MAX_EXPONENT:
        raise OverflowError("exponent out of range")


def _normalize_sign(num, den):
    if den.leading_coefficient() < 0:
        return -num, -den
    return num, den


def _canonicalize(num, den):
    if den.is_zero():
        raise ZeroDivisionError("zero divisor")
    if num.is_zero():
        return _ZERO_POLY, _ONE_POLY
    if not den.is_one():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    return _normalize_sign(num, den)


def _eval_mod(num, den, point, prime):
    full = tuple(point) + (1,) * (len(VARIABLES) - len(point))
    n = int(num(*full)) % prime
    d = int(den(*full)) % prime
    if d == 0:
        raise ZeroDivisionError("pole at evaluation point")
    return n * pow(d, prime - 2, prime) % prime


def _substitute(poly, values: dict[int, Scalar]) -> Scalar:
    total = ZERO
    for exps, coeff in poly.terms():
        term_exps = list(exps)
        factor = ONE
        for k, value in values.items():
            e = term_exps[k]
            if e:
                factor = factor * value**e
                term_exps[k] = 0
        mono = _CTX.from_dict({tuple(term_exps): int(coeff)})
        total = total + Scalar(mono, _ONE_POLY, _canonical=True) * factor
    return total


def _canonical_variable(name: str) -> str:
    name = name.replace(" ", "")
    if name in _VAR_INDEX:
        return name
    s = parse_scalar(name)
    for key in VARIABLES:
        if s == variable(key):
            return key
    raise KeyError(f"unknown variable {name!r}")


# -- named elements ---------------------------------------------------------

ZERO = Scalar(_ZERO_POLY, _ONE_POLY, _canonical=True)
ONE = Scalar(_ONE_POLY, _ONE_POLY, _canonical=True)


def variable(name: str) -> Scalar:
    return Scalar(_GENS[_VAR_INDEX[name]], _ONE_POLY, _canonical=True)


def q() -> Scalar:
    return _Q


_Q = Scalar(_GENS[0], _ONE_POLY, _canonical=True)


@lru_cache(maxsize=None)
def p(i: int, j: int) -> Scalar:
    """The multiparameter p_ij, with p_ji = p_ij^-1 and p_ii = 1."""
    if i == j:
        return ONE
    a, b = min(i, j), max(i, j)
    if not (1 <= a and b <= MAX_DIM):
        raise ValueError(f"p[{i},{j}] outside supported dimension {MAX_DIM}")
    base = variable(f"p[{a},{b}]")
    return base if i < j else base.inverse()


def qpow(k: int) -> Scalar:
    return _Q**k


# -- text form --------------------------------------------------------------


def _format_monomial(exps: Sequence[int]) -> str:
    parts = []
    for k, e in enumerate(exps):
        if e == 0:
            continue
        parts.append(VARIABLES[k] if e == 1 else f"{VARIABLES[k]}^{e}")
    return "*".join(parts)


def _format_terms(terms) -> str:
    """terms: iterable of (exponent tuple, Fraction)."""
    out = []
    for exps, c in terms:
        mono = _format_monomial(exps)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{a}*{mono}"
        else:
            body = str(a)
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def format_scalar(s: Scalar) -> str:
    if s.is_zero():
        return "0"
    if _poly_is_monomial(s.den):
        ((dexps, dc),) = list(s.den.terms())
        terms = [
            (tuple(a - b for a, b in zip(exps, dexps)), Fraction(int(c), int(dc)))
            for exps, c in s.num.terms()
        ]
        return _format_terms(terms)
    num = _format_terms((e, Fraction(int(c))) for e, c in s.num.terms())
    den = _format_terms((e, Fraction(int(c))) for e, c in s.den.terms())
    return f"({num})/({den})"


def _scalar_atom(name: str, indices: tuple, pos: int) -> Scalar:
    if name == "q" and not indices:
        return _Q
    if name == "p" and len(indices) == 2:
        i, j = indices
        if i == j:
            return ONE
        if min(i, j) < 1 or max(i, j) > MAX_DIM:
            raise ParseError(f"p index out of range {indices}", pos)
        return p(i, j)
    raise ParseError(f"unknown scalar symbol {name}{list(indices) if indices else ''}", pos)


SCALAR_BUILDER = Builder(number=Scalar.from_int, atom=_scalar_atom)


def parse_scalar(text: str) -> Scalar:
    """Parse the text form, e.g. ``"(q^2 - 1)/(q + p[1,2])"`` or ``"3/4*q^-1"``."""
    return parse_expression(text, SCALAR_BUILDER)


def random_point(rng, prime: int, nvars: int = len(VARIABLES)) -> tuple[int, ...]:
    """Random nonzero evaluation point in GF(prime) for modular specialisation."""
    return tuple(rng.randrange(2, prime - 1) for _ in range(nvars))
