"""Rewriting engine: oriented rules, normal forms, overlap completion, Hilbert counts.

Internally words are tuples of generator ranks (ints); the monomial order is
degree first, then lexicographic on ranks (a higher rank is a bigger letter).
"""

from __future__ import annotations

import itertools
import json
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .. import linalg
from ..scalars import ONE, ZERO
from .poly import GeneratorSymbol, NCPolynomial, format_poly, parse

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class OrientationError(ValueError):
    pass


class DegreeBoundError(ValueError):
    pass


class CompletionError(RuntimeError):
    pass


class DirtyCertificate(RuntimeError):
    pass


def word_key(w: tuple):
    return (len(w), w)


@dataclass
class Certificate:
    """Outcome of overlap checking.

    ``global_`` is set when every ambiguity of the final rule set has length
    at most ``degree_bound``; then all of them were resolved and the diamond
    lemma gives confluence in every degree.
    """

    degree_bound: int = 0
    checked: int = 0
    resolved: int = 0
    derived: list = field(default_factory=list)  # (degree, lhs text)
    unresolved: list = field(default_factory=list)  # (degree, overlap text, residue text)
    global_: bool = False

    @property
    def clean(self) -> bool:
        return not self.unresolved

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "checked": self.checked,
            "resolved": self.resolved,
            "derived": [list(x) for x in self.derived],
            "unresolved": [list(x) for x in self.unresolved],
            "global": self.global_,
        }

    @classmethod
    def from_json(cls, d) -> "Certificate":
        return cls(
            d["degree_bound"], d["checked"], d["resolved"],
            [tuple(x) for x in d["derived"]], [tuple(x) for x in d["unresolved"]], d["global"],
        )


class Presentation:
    """Generators plus oriented rewrite rules ``lhs -> rhs``."""

    def __init__(self, generators: Sequence[GeneratorSymbol], rules=(), degree_bound: int = 4, name: str = ""):
        self.generators = list(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generators")
        self.rank = {g: k for k, g in enumerate(self.generators)}
        self.name = name
        self.degree_bound = degree_bound
        self.rules: list[tuple[tuple, tuple]] = []  # (lhs, ((word, coeff), ...))
        self.certificate: Optional[Certificate] = None
        self.relation_rank: Optional[int] = None
        self._lookup = {}
        for g in self.generators:
            if g.family == "aux":
                self._lookup[(g.name, ())] = g
            elif g.family in ("z", "t"):
                self._lookup[(g.family, (g.lower, g.upper))] = g
            else:
                self._lookup[(g.family, (g.lower,))] = g
        for lhs, rhs in rules:
            self._add_rule(self.to_word(lhs), self.to_internal(rhs))
        self._reset()

    # -- conversion ---------------------------------------------------------
    def to_word(self, w) -> tuple:
        if isinstance(w, NCPolynomial):
            (w,) = w.terms
        return tuple(self.rank[g] for g in w)

    def from_word(self, w: tuple) -> tuple:
        return tuple(self.generators[k] for k in w)

    def to_internal(self, poly: NCPolynomial) -> dict:
        out: dict = {}
        for w, c in NCPolynomial.coerce(poly).terms.items():
            try:
                key = tuple(self.rank[g] for g in w)
            except KeyError as exc:
                raise ValueError(f"unknown generator {exc.args[0]}") from None
            out[key] = c
        return out

    def from_internal(self, d: dict) -> NCPolynomial:
        gens = self.generators
        return NCPolynomial._raw({tuple(gens[k] for k in w): c for w, c in d.items() if c})

    def resolve(self, name: str, indices: tuple, pos: int = 0):
        return self._lookup.get((name, tuple(indices)))

    def parse(self, text: str) -> NCPolynomial:
        return parse(text, self.resolve)

    def format(self, poly: NCPolynomial) -> str:
        def order(p):
            return sorted(p.terms.items(), key=lambda kv: word_key(self.to_word(kv[0])), reverse=True)

        return format_poly(poly, order)

    def is_odd(self, k: int) -> bool:
        return bool(self.generators[k].parity)

    # -- rules --------------------------------------------------------------
    def _add_rule(self, lhs: tuple, rhs: dict) -> None:
        if not lhs:
            raise OrientationError("relation reduces to a nonzero scalar")
        for w in rhs:
            if word_key(w) >= word_key(lhs):
                raise OrientationError(f"rule does not decrease the order: {lhs}")
        self.rules.append((lhs, tuple((w, c) for w, c in rhs.items() if c)))

    def _reset(self) -> None:
        self._table: dict = {}
        for lhs, rhs in self.rules:
            self._table.setdefault(lhs, rhs)
        self._lens = sorted({len(l) for l in self._table})
        self._memo: dict = {}

    def rule_polys(self) -> list[tuple[NCPolynomial, NCPolynomial]]:
        return [
            (self.from_internal({lhs: ONE}), self.from_internal(dict(rhs))) for lhs, rhs in self.rules
        ]

    @property
    def max_rule_length(self) -> int:
        return max(self._lens, default=0)

    # -- reduction ----------------------------------------------------------
    def _append(self, u: tuple, g: int) -> dict:
        """Normal form of ``u·g`` for a normal word ``u``."""
        key = u + (g,)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        table = self._table
        for L in self._lens:
            if L > len(key):
                break
            rhs = table.get(key[-L:])
            if rhs is not None:
                prefix = key[:-L]
                out: dict = {}
                for w, c in rhs:
                    for ww, cc in self._concat({prefix: ONE}, w).items():
                        v = out.get(ww)
                        v = c * cc if v is None else v + c * cc
                        if v:
                            out[ww] = v
                        else:
                            del out[ww]
                self._memo[key] = out
                return out
        out = {key: ONE}
        self._memo[key] = out
        return out

    def _concat(self, poly: dict, w: tuple) -> dict:
        """Normal form of ``poly · w`` for ``poly`` in normal form."""
        for g in w:
            nxt: dict = {}
            for u, c in poly.items():
                for ww, cc in self._append(u, g).items():
                    v = nxt.get(ww)
                    v = c * cc if v is None else v + c * cc
                    if v:
                        nxt[ww] = v
                    else:
                        del nxt[ww]
            poly = nxt
            if not poly:
                break
        return poly

    def _check_degree(self, deg: int) -> None:
        cert = self.certificate
        if cert is not None and cert.global_:
            return
        if deg > self.degree_bound:
            raise DegreeBoundError(f"degree {deg} exceeds the bound {self.degree_bound}")

    def nf(self, d: dict, check: bool = True) -> dict:
        """Normal form of an internal polynomial."""
        out: dict = {}
        for w, c in d.items():
            if check:
                self._check_degree(len(w))
            for ww, cc in self._concat({(): ONE}, w).items():
                v = out.get(ww)
                v = c * cc if v is None else v + c * cc
                if v:
                    out[ww] = v
                else:
                    del out[ww]
        return out

    def nf_mul(self, a: dict, b: dict) -> dict:
        """Normal form of ``a·b`` for ``a``, ``b`` in normal form."""
        out: dict = {}
        for w, c in b.items():
            part = self._concat(a, w)
            for ww, cc in part.items():
                v = out.get(ww)
                v = c * cc if v is None else v + c * cc
                if v:
                    out[ww] = v
                else:
                    del out[ww]
        return out

    def reduce(self, e) -> NCPolynomial:
        if isinstance(e, str):
            e = self.parse(e)
        return self.from_internal(self.nf(self.to_internal(e)))

    def is_zero(self, e) -> bool:
        return self.reduce(e).is_zero()

    def is_normal(self, w: tuple) -> bool:
        for end in range(1, len(w) + 1):
            for L in self._lens:
                if L > end:
                    break
                if w[end - L:end] in self._table:
                    return False
        return True

    # -- ambiguities --------------------------------------------------------
    def _ambiguities(self, rules=None):
        """Yield ``(word, left_result, right_result)`` for overlaps and inclusions."""
        rules = self.rules if rules is None else rules
        for (l1, r1), (l2, r2) in itertools.product(rules, repeat=2):
            # overlap: suffix of l1 equals prefix of l2
            for o in range(1, min(len(l1), len(l2))):
                if l1[-o:] == l2[:o]:
                    yield l1 + l2[o:], (r1, (), l2[o:]), (r2, l1[:-o], ())
            # inclusion of l2 in l1
            if (l1, r1) != (l2, r2) and len(l2) <= len(l1):
                for s in range(len(l1) - len(l2) + 1):
                    if l1[s:s + len(l2)] == l2:
                        yield l1, (r1, (), ()), (r2, l1[:s], l1[s + len(l2):])

    def _eval_side(self, side) -> dict:
        rhs, pre, post = side
        out: dict = {}
        for w, c in rhs:
            for ww, cc in self._concat(self._concat({(): ONE}, pre), w + post).items():
                v = out.get(ww)
                v = c * cc if v is None else v + c * cc
                if v:
                    out[ww] = v
                else:
                    del out[ww]
        return out

    def _residue(self, left, right) -> dict:
        a, b = self._eval_side(left), self._eval_side(right)
        for w, c in b.items():
            v = a.get(w, ZERO) - c
            if v:
                a[w] = v
            else:
                a.pop(w, None)
        return a

    def _text(self, w: tuple) -> str:
        return "*".join(str(self.generators[k]) for k in w) or "1"

    def check_confluence(self, degree_bound: Optional[int] = None) -> Certificate:
        """Resolve every ambiguity up to the bound without adding rules."""
        bound = self.degree_bound if degree_bound is None else degree_bound
        cert = Certificate(degree_bound=bound)
        longest = 0
        for word, left, right in self._ambiguities():
            longest = max(longest, len(word))
            if len(word) > bound:
                continue
            cert.checked += 1
            res = self._residue(left, right)
            if res:
                cert.unresolved.append((len(word), self._text(word), self.format(self.from_internal(res))))
            else:
                cert.resolved += 1
        cert.global_ = cert.clean and longest <= bound
        return cert

    def complete(self, degree_bound: Optional[int] = None, max_rules: int = 100000) -> "Presentation":
        """Bergman completion up to ``degree_bound`` (in place; returns self).

        Ambiguities are processed by increasing word length; residues of one
        length are interreduced together and added as new rules.
        """
        bound = self.degree_bound if degree_bound is None else degree_bound
        self.degree_bound = bound
        derived = []
        done: set = set()
        while True:
            pending: dict = {}
            for word, left, right in self._ambiguities():
                key = (word, left[1], left[2], right[1], right[2])
                if len(word) <= bound and key not in done:
                    pending.setdefault(len(word), []).append((key, left, right))
            if not pending:
                break
            deg = min(pending)
            residues = []
            for key, left, right in pending[deg]:
                done.add(key)
                res = self._residue(left, right)
                if res:
                    residues.append(res)
            if residues:
                new = _orient(residues)
                for lhs, rhs in new:
                    self._add_rule(lhs, rhs)
                    derived.append((len(lhs), self._text(lhs)))
                self._interreduce()
                if len(self.rules) > max_rules:
                    raise CompletionError("rule limit exceeded")
        cert = self.check_confluence(bound)
        cert.derived = derived
        self.certificate = cert
        return self

    def _interreduce(self) -> None:
        """Drop rules whose lhs contains another lhs; renormalise right-hand sides.

        A dropped rule's relation is reduced by the remaining rules and
        re-oriented if it does not vanish.
        """
        while True:
            lhs_list = [l for l, _ in self.rules]
            keep, dropped, seen = [], [], set()
            for lhs, rhs in sorted(self.rules, key=lambda r: word_key(r[0])):
                if lhs in seen or any(
                    other != lhs and _contains(lhs, other) for other in lhs_list
                ):
                    dropped.append((lhs, rhs))
                    continue
                keep.append((lhs, rhs))
                seen.add(lhs)
            self.rules = keep
            self._reset()
            residues = []
            for lhs, rhs in dropped:
                rel = {lhs: ONE}
                for w, c in rhs:
                    rel[w] = rel.get(w, ZERO) - c
                red = self.nf(rel, check=False)
                if red:
                    residues.append(red)
            if not residues:
                break
            for lhs, rhs in _orient(residues):
                self._add_rule(lhs, rhs)
            self._reset()
        self.rules = [(lhs, tuple(self.nf(dict(rhs), check=False).items())) for lhs, rhs in self.rules]
        self._reset()

    # -- counting -----------------------------------------------------------
    def normal_words(self, k: int, alphabet: Optional[Iterable[int]] = None) -> list[tuple]:
        letters = list(range(len(self.generators))) if alphabet is None else sorted(alphabet)
        words = [()]
        for _ in range(k):
            nxt = []
            for u in words:
                for g in letters:
                    w = u + (g,)
                    if not any(L <= len(w) and w[-L:] in self._table for L in self._lens):
                        nxt.append(w)
            words = nxt
        return words

    def hilbert(self, k: int, strict: bool = True) -> int:
        """Number of normal words of degree k."""
        cert = self.certificate
        if strict:
            if cert is None or not cert.clean:
                raise DirtyCertificate("confluence certificate is missing or dirty")
            if k > cert.degree_bound and not cert.global_:
                raise DegreeBoundError(f"degree {k} exceeds the bound {cert.degree_bound}")
        s = max(self.max_rule_length - 1, 0)
        n = len(self.generators)
        states = {(): 1}
        for _ in range(k):
            nxt: dict = {}
            for st, cnt in states.items():
                for g in range(n):
                    w = st + (g,)
                    if any(L <= len(w) and w[-L:] in self._table for L in self._lens):
                        continue
                    key = w[-s:] if s else ()
                    nxt[key] = nxt.get(key, 0) + cnt
            states = nxt
        return sum(states.values())

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": [{"symbol": str(g), "parity": g.parity} for g in self.generators],
            "degree_bound": self.degree_bound,
            "rules": [
                {"lhs": self._text(lhs), "rhs": self.format(self.from_internal(dict(rhs)))}
                for lhs, rhs in self.rules
            ],
            "certificate": self.certificate.to_json() if self.certificate else None,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data) -> "Presentation":
        if isinstance(data, str):
            data = json.loads(data)
        gens = []
        for entry in data["generators"]:
            gens.append(_symbol_from_text(entry["symbol"], entry["parity"]))
        pres = cls(gens, (), data["degree_bound"], data.get("name", ""))
        for r in data["rules"]:
            lhs = pres.parse(r["lhs"])
            rhs = pres.parse(r["rhs"])
            pres._add_rule(pres.to_word(lhs), pres.to_internal(rhs))
        pres._reset()
        if data.get("certificate"):
            pres.certificate = Certificate.from_json(data["certificate"])
        return pres

    def __repr__(self):
        return f"Presentation({self.name!r}, generators={len(self.generators)}, rules={len(self.rules)})"


def _contains(word: tuple, sub: tuple) -> bool:
    n = len(sub)
    return n <= len(word) and any(word[s:s + n] == sub for s in range(len(word) - n + 1))


def _symbol_from_text(text: str, parity: int) -> GeneratorSymbol:
    if "[" in text:
        fam, rest = text.split("[", 1)
        idx = tuple(int(s) for s in rest.rstrip("]").split(","))
        if fam in ("z", "t"):
            return GeneratorSymbol(fam, idx[0], idx[1], parity)
        return GeneratorSymbol(fam, idx[0], 0, parity)
    return GeneratorSymbol("aux", parity=parity, name=text)


def _orient(relations: list[dict]) -> list[tuple[tuple, dict]]:
    """Row-reduce internal relations with words ordered from largest to smallest."""
    cols = set()
    for r in relations:
        cols.update(r)
    order = sorted(cols, key=word_key, reverse=True)
    reduced, pivots = linalg.rref(relations, order=order)
    out = []
    for lhs, row in zip(pivots, reduced):
        rhs = {w: -c for w, c in row.items() if w != lhs}
        out.append((lhs, rhs))
    return out


def from_relations(
    generators: Sequence[GeneratorSymbol],
    relations: Iterable[NCPolynomial],
    degree_bound: int = 4,
    name: str = "",
    complete: bool = True,
) -> Presentation:
    """Orient relations by Gaussian elimination (leading word = largest word) and complete."""
    pres = Presentation(generators, (), degree_bound, name)
    internal = [pres.to_internal(r) for r in relations]
    internal = [r for r in internal if r]
    rules = _orient(internal)
    pres.relation_rank = len(rules)
    for lhs, rhs in rules:
        pres._add_rule(lhs, rhs)
    pres._reset()
    if complete:
        pres.complete(degree_bound)
    return pres
