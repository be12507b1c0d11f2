"""Command line front end: configuration, suite orchestration and JSON reports.

Examples::

    qsuper check-rmatrix --m 2 --n 1
    qsuper verify --m 1 --n 1 --suite qtber1 --suite isdet --out report.json
    qsuper reduce --m 1 --n 1 "z[1,2]*z[1,2]" --expect-zero
    qsuper hilbert --m 2 --n 1 --degree-bound 4
    qsuper koszul --m 1 --n 1
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

from . import __version__
from ._expr import ParseError
from .berezin import (
    SUITES as BER_SUITES,
    BlockCalculus,
    CheckRecord,
    block_inverse_residuals,
    block_relations,
    determinant_triple,
    identity_suite,
    k_nilpotency,
    residual_record,
    schur_residuals,
)
from .ncalg.relations import KINDS, classical_exterior, classical_hilbert, generate_relations
from .rmatrix import (
    ParameterSet,
    build_multiparameter,
    check_hecke,
    check_ybe,
    compute_closure,
    reflection_diagonal_formula,
    restrict_symmetry,
)
from .scalars import ONE, Scalar, format_scalar, parse_scalar, qpow

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


# -- configuration ------------------------------------------------------------

_BIND = re.compile(r"^\s*p\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=(.+)$")
_EPS = re.compile(r"^\s*e(?:ps)?\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*([+-]?1)\s*$")


@dataclass
class RunConfig:
    m: int
    n: int
    epsilon: object = "all-plus"  # preset name or a full ±1 matrix
    bindings: dict = field(default_factory=dict)  # "p[i,j]" -> expression text
    degree_bound: int = 8
    suites: list = field(default_factory=lambda: ["all"])
    window: Optional[int] = None
    shifts: Optional[list] = None  # Koszul diagonals l - k; None means n - m
    out: Optional[str] = None
    timings: bool = True

    @property
    def d(self) -> int:
        return self.m + self.n

    @property
    def symbolic(self) -> bool:
        return not self.bindings

    def validate(self) -> None:
        if self.m < 0 or self.n < 0 or self.d < 1:
            raise ConfigError("need m, n >= 0 and m + n >= 1")
        if self.degree_bound < 2:
            raise ConfigError("degree bound must be at least 2")
        if isinstance(self.epsilon, str):
            if self.epsilon != "all-plus":
                raise ConfigError(f"unknown epsilon preset {self.epsilon!r}")
        elif len(self.epsilon) != self.d:
            raise ConfigError(f"epsilon must be {self.d}x{self.d}")
        names = expand_suites(self.suites)
        if any(SUITE_REGISTRY[s].needs_bound for s in names) and self.degree_bound < 2 * self.d:
            raise ConfigError(f"degree bound must be >= 2(m+n) = {2 * self.d} for Berezinian and Hopf suites")
        self.params()

    def params(self) -> ParameterSet:
        try:
            if self.epsilon == "all-plus":
                ps = ParameterSet.all_plus(self.d)
            else:
                ps = ParameterSet(tuple(tuple(int(x) for x in row) for row in self.epsilon))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        values = {}
        for key, text in self.bindings.items():
            i, j = parse_pair(key)
            if not (1 <= i <= self.d and 1 <= j <= self.d) or i == j:
                raise ConfigError(f"binding {key} out of range")
            try:
                v = parse_scalar(text)
            except ParseError as exc:
                raise ConfigError(f"cannot parse binding {key}={text}: {exc}") from exc
            if v.is_zero():
                raise ConfigError(f"binding {key} must be nonzero")
            if i < j:
                values[(i, j)] = v
            else:
                values[(j, i)] = v.inverse()
        return ParameterSet(ps.epsilon, values)

    def to_json(self) -> dict:
        eps = self.epsilon if isinstance(self.epsilon, str) else [list(r) for r in self.epsilon]
        return {"m": self.m, "n": self.n, "epsilon": eps, "bindings": dict(sorted(self.bindings.items())),
                "degree_bound": self.degree_bound, "suites": list(self.suites), "window": self.window,
                "shifts": self.shifts, "mode": "symbolic" if self.symbolic else "specialized"}

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        eps = d.get("epsilon", "all-plus")
        if not isinstance(eps, str):
            eps = tuple(tuple(r) for r in eps)
        return cls(d["m"], d["n"], eps, dict(d.get("bindings", {})), d.get("degree_bound", 8),
                   list(d.get("suites", ["all"])), d.get("window"), d.get("shifts"))


def parse_pair(key: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*p\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*", key)
    if not m:
        raise ConfigError(f"expected p[i,j], got {key!r}")
    return int(m.group(1)), int(m.group(2))


def parse_binding(text: str) -> tuple[str, str]:
    m = _BIND.match(text)
    if not m:
        raise ConfigError(f"expected p[i,j]=EXPR, got {text!r}")
    return f"p[{m.group(1)},{m.group(2)}]", m.group(3).strip()


def parse_epsilon(values: list[str], d: int):
    """``all-plus``, a JSON matrix, or entries ``e[i,j]=±1`` (other pairs default to +1)."""
    if not values or values == ["all-plus"]:
        return "all-plus"
    if len(values) == 1 and values[0].lstrip().startswith("["):
        try:
            return tuple(tuple(int(x) for x in row) for row in json.loads(values[0]))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad epsilon matrix: {exc}") from exc
    upper = {}
    for v in values:
        for part in v.split(";"):
            if not part.strip():
                continue
            m = _EPS.match(part)
            if not m:
                raise ConfigError(f"expected e[i,j]=±1, got {part!r}")
            i, j, e = int(m.group(1)), int(m.group(2)), int(m.group(3))
            if not (1 <= i <= d and 1 <= j <= d) or i == j:
                raise ConfigError(f"epsilon entry {part!r} out of range")
            if i > j:
                i, j, e = j, i, -e
            upper[(i, j)] = e
    return ParameterSet.from_upper(d, upper).epsilon


# -- engine context -------------------------------------------------------------


class Context:
    """Lazily built objects shared by the suites of one run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.params = config.params()

    @cached_property
    def h(self):
        return build_multiparameter(self.config.m, self.config.n, self.params)

    @cached_property
    def closure(self):
        return compute_closure(self.h)

    @cached_property
    def E(self):
        return generate_relations(self.h, "bialgebra_E", self.config.degree_bound)

    @cached_property
    def calc(self) -> BlockCalculus:
        return self.envelope.calc

    @cached_property
    def envelope(self):
        from .hopf import HopfEnvelope

        return HopfEnvelope(self.h, self.config.degree_bound, E=self.E)

    @cached_property
    def complex(self):
        from .koszul import KoszulComplex

        return KoszulComplex(self.h, self.config.window)

    def engine_metadata(self) -> dict:
        from . import _kernels

        meta = {"version": __version__, "kernels": _kernels.BACKEND}
        if "E" in self.__dict__:
            cert = self.E.certificate
            meta["rule_count"] = len(self.E.rules)
            meta["certificate_clean"] = bool(cert and cert.clean)
        return meta


# -- suites -------------------------------------------------------------------


@dataclass
class Suite:
    anchor: str
    run: Callable[[Context], CheckRecord]
    required: bool = True
    needs_bound: bool = False


def _record(name, anchor, ok: bool, started, residual="", detail=None, info=False) -> CheckRecord:
    status = "info" if info else ("pass" if ok else "fail")
    return CheckRecord(name, anchor, status, residual or ("0" if ok else ""), time.perf_counter() - started,
                       detail or {})


def _hecke(ctx):
    t = time.perf_counter()
    return residual_record("hecke", SUITE_REGISTRY["hecke"].anchor, check_hecke(ctx.h), t)


def _ybe(ctx):
    t = time.perf_counter()
    rec = residual_record("ybe", SUITE_REGISTRY["ybe"].anchor, check_ybe(ctx.h), t)
    rec.detail["epsilon_violations"] = [list(v) for v in ctx.params.violations()]
    return rec


def _diag(G):
    return [G.entry((k,), (k,)) for k in range(1, G.space.dim + 1)]


def _closure(ctx):
    t = time.perf_counter()
    G = ctx.closure.G
    d = ctx.h.dim
    diagonal = all(not G.entry((i,), (j,)) for i in range(1, d + 1) for j in range(1, d + 1) if i != j)
    return _record("closure", SUITE_REGISTRY["closure"].anchor, diagonal, t,
                   detail={"G": [format_scalar(x) for x in _diag(G)]})


def _g_formula(ctx):
    t = time.perf_counter()
    got = _diag(ctx.closure.G)
    want = reflection_diagonal_formula(ctx.h.space)
    ok = all(a == b for a, b in zip(got, want))
    residual = "; ".join(f"G[{k + 1}]: {format_scalar(a)} vs {format_scalar(b)}"
                         for k, (a, b) in enumerate(zip(got, want)) if a != b)
    return _record("g-formula", SUITE_REGISTRY["g-formula"].anchor, ok, t, residual,
                   {"computed": [format_scalar(x) for x in got], "formula": [format_scalar(x) for x in want]})


def q_bracket(k: int) -> Scalar:
    """``(q^k - 1)/(q - 1)`` for any integer k."""
    return (qpow(k) - ONE) / (qpow(1) - ONE) if k else Scalar.from_int(0)


def _trace_g(ctx):
    t = time.perf_counter()
    tr = ctx.closure.G.trace()
    want = -q_bracket(ctx.config.n - ctx.config.m)
    return _record("trace-g", SUITE_REGISTRY["trace-g"].anchor, tr == want, t, format_scalar(tr - want),
                   {"trace": format_scalar(tr), "expected": format_scalar(want)})


def _confluence(ctx):
    t = time.perf_counter()
    cert = ctx.E.check_confluence()
    return _record("confluence", SUITE_REGISTRY["confluence"].anchor, cert.clean, t, detail=cert.to_json())


def _hilbert(ctx):
    t = time.perf_counter()
    rows = hilbert_table(ctx.E, "bialgebra_E", ctx.config.m, ctx.config.n, min(4, ctx.config.degree_bound))
    ok = all(r["match"] for r in rows)
    bad = [r for r in rows if not r["match"]]
    residual = "" if ok else f"first mismatch at degree {bad[0]['degree']}"
    return _record("hilbert", SUITE_REGISTRY["hilbert"].anchor, ok, t, residual, {"table": rows})


def _det_triple(ctx):
    t = time.perf_counter()
    even = list(range(1, ctx.config.m + 1))
    if not even:
        return _record("det-triple", SUITE_REGISTRY["det-triple"].anchor, True, t, "no even block", info=True)
    out = determinant_triple(ctx.E, restrict_symmetry(ctx.h, even), even)
    ok = all(v for k, v in out.items() if isinstance(v, bool)) and \
        out["projector_counit"] == out["projector_counit_expected"]
    return _record("det-triple", SUITE_REGISTRY["det-triple"].anchor, ok, t, detail=out)


def _identity(name):
    def run(ctx):
        return identity_suite(name, ctx.calc, ctx.envelope)
    return run


def _nilpotency(ctx):
    t = time.perf_counter()
    out = k_nilpotency(ctx.calc)
    ok = all(v["nonzero"] == 0 for v in out.values())
    return _record("nilpotency", SUITE_REGISTRY["nilpotency"].anchor, ok, t, detail=out)


def _block_inverse(ctx):
    t = time.perf_counter()
    res = block_inverse_residuals(ctx.calc)
    return residual_record("block-inverse", SUITE_REGISTRY["block-inverse"].anchor,
                           res["Z*Zinv"] + res["Zinv*Z"], t)


def _schur(ctx):
    t = time.perf_counter()
    res = []
    if ctx.config.n:
        res += schur_residuals(ctx.calc, "lower")
    if ctx.config.m:
        res += schur_residuals(ctx.calc, "upper")
    return residual_record("schur", SUITE_REGISTRY["schur"].anchor, res, t)


def _block_relations(ctx):
    t = time.perf_counter()
    out = block_relations(ctx.E, ctx.h)
    ok = all(v["nonzero"] == 0 for v in out.values())
    return _record("block-relations", SUITE_REGISTRY["block-relations"].anchor, ok, t,
                   detail={k: v["nonzero"] for k, v in out.items()})


def _hopf_axioms(ctx):
    from .hopf import hopf_axioms

    t = time.perf_counter()
    recs = hopf_axioms(ctx.envelope)
    bad = [f"{r.name}({r.generator})" for r in recs if not r.ok]
    return _record("hopf-axioms", SUITE_REGISTRY["hopf-axioms"].anchor, not bad, t, "; ".join(bad),
                   {"checked": len(recs), "sign_reading": ctx.envelope.sign_reading})


def _hopf_relations(ctx):
    t = time.perf_counter()
    res = {g: ctx.envelope.relation_residuals(g) for g in ("z", "s", "zt", "tt")}
    bad = {g: len(r["nonzero"]) for g, r in res.items()}
    return _record("hopf-relations", SUITE_REGISTRY["hopf-relations"].anchor, not any(bad.values()), t,
                   detail={"checked": {g: r["checked"] for g, r in res.items()}, "nonzero": bad})


def _ber_group_like(ctx):
    t = time.perf_counter()
    ok, detail = ctx.envelope.is_group_like(ctx.envelope.ber_formal())
    return _record("ber-group-like", SUITE_REGISTRY["ber-group-like"].anchor, ok, t, detail=detail)


def _koszul(ctx):
    t = time.perf_counter()
    rep = ctx.complex.cohomology()
    ok = rep.concentrated and rep.d_squared_zero and bool(rep.representative_is_cocycle) \
        and bool(rep.representative_outside_image)
    return _record("koszul", SUITE_REGISTRY["koszul"].anchor, ok, t, detail=rep.to_json())


def _koszul_dual(ctx):
    from .koszul import build_dual

    t = time.perf_counter()
    dd = build_dual(ctx.h, 3)
    out = {"hecke": dd.hecke_residual_zero, "ybe": dd.ybe_residual_zero, "double_dual": dd.double_dual_is_identity()}
    return _record("koszul-dual", SUITE_REGISTRY["koszul-dual"].anchor, all(out.values()), t, detail=out)


SUITE_REGISTRY: dict[str, Suite] = {
    "hecke": Suite("(R - q)(R + 1) = 0", _hecke),
    "ybe": Suite("R12 R23 R12 = R23 R12 R23", _ybe),
    "closure": Suite("closure of R exists with diagonal G", _closure),
    "g-formula": Suite("G_k = -(-1)^k q^(k+ - k-)", _g_formula, required=False),
    "trace-g": Suite("Tr G = -[n - m]_q", _trace_g),
    "confluence": Suite("rewriting system for E is confluent", _confluence),
    "hilbert": Suite("dim E_k equals the classical supercommutative count", _hilbert),
    "det-triple": Suite("permutation, projector and adjugate determinants agree", _det_triple),
    "nilpotency": Suite("products of mn+1 entries of K, B or C vanish", _nilpotency, needs_bound=True),
    "block-inverse": Suite("Z Z^-1 = Z^-1 Z = I", _block_inverse, needs_bound=True),
    "schur": Suite("Schur complements satisfy the block RTT relations", _schur, needs_bound=True),
    "block-relations": Suite("block form of the defining relations", _block_relations),
    "hopf-axioms": Suite("coassociativity, counit and antipode on the generators", _hopf_axioms, needs_bound=True),
    "hopf-relations": Suite("defining relations of the Hopf envelope", _hopf_relations, needs_bound=True),
    "ber-group-like": Suite("Delta(Ber) = Ber (x) Ber, eps(Ber) = 1", _ber_group_like, needs_bound=True),
    "koszul": Suite("Koszul cohomology is one-dimensional at (m, n)", _koszul),
    "koszul-dual": Suite("R* is a Hecke symmetry and R** = R", _koszul_dual),
}
for _name, _anchor in BER_SUITES.items():
    SUITE_REGISTRY[_name] = Suite(_anchor, _identity(_name), required=_name != "cor2", needs_bound=True)

RMATRIX_SUITES = ["hecke", "ybe", "closure", "g-formula", "trace-g"]


def expand_suites(names) -> list[str]:
    out = []
    for s in names:
        if s == "all":
            out.extend(SUITE_REGISTRY)
        elif s in SUITE_REGISTRY:
            out.append(s)
        else:
            raise ConfigError(f"unknown suite {s!r}; known: {', '.join(sorted(SUITE_REGISTRY))}")
    return sorted(set(out))


# -- reports ------------------------------------------------------------------


@dataclass
class SuiteReport:
    config: dict
    checks: list  # CheckRecord, sorted by name
    engine: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(c.status == "fail" and c.required for c in self.checks)

    def to_json(self, timings: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = c.to_json()
            if not timings:
                d["seconds"] = 0.0
            checks.append(d)
        return {"config": self.config, "checks": checks, "engine": self.engine, "ok": self.ok}

    @classmethod
    def from_json(cls, d: dict) -> "SuiteReport":
        return cls(d["config"], [CheckRecord.from_json(c) for c in d["checks"]], dict(d.get("engine", {})))

    def summary(self) -> str:
        lines = [f"{c.status.upper():4s} {c.name}{'' if c.required else ' (not required)'}"
                 f"  [{c.seconds:.2f}s]" for c in self.checks]
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def run_check(name: str, ctx: Context) -> CheckRecord:
    suite = SUITE_REGISTRY[name]
    started = time.perf_counter()
    try:
        rec = suite.run(ctx)
    except Exception as exc:  # engine errors become failed checks
        rec = CheckRecord(name, suite.anchor, "fail", f"{type(exc).__name__}: {exc}",
                          time.perf_counter() - started)
    rec.name = name
    rec.required = suite.required
    return rec


def run(config: RunConfig) -> SuiteReport:
    """Run the selected suites and return the report (also written to ``config.out``)."""
    config.validate()
    ctx = Context(config)
    names = expand_suites(config.suites)
    checks = sorted((run_check(s, ctx) for s in names), key=lambda c: c.name)
    report = SuiteReport(config.to_json(), checks, ctx.engine_metadata())
    if config.out:
        write_json(config.out, report.to_json(config.timings))
    return report


def write_json(path: str, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- hilbert / reduce helpers -------------------------------------------------------

REFERENCE = {
    "bialgebra_E": classical_hilbert,
    "ext_Lambda": classical_exterior,
    "ext_dual": classical_exterior,
    "sym_S": lambda m, n, k: classical_exterior(n, m, k),
    "sym_dual": lambda m, n, k: classical_exterior(n, m, k),
}


def hilbert_table(pres, kind: str, m: int, n: int, max_degree: int) -> list[dict]:
    ref = REFERENCE[kind]
    rows = []
    for k in range(max_degree + 1):
        got = pres.hilbert(k)
        want = ref(m, n, k)
        rows.append({"degree": k, "count": got, "classical": want, "match": got == want})
    return rows


ALGEBRA_ALIASES = {
    "E": "bialgebra_E", "H": "hopf_H", "S": "sym_S", "Lambda": "ext_Lambda",
    "Sdual": "sym_dual", "Lambdadual": "ext_dual",
}


def algebra_kind(name: str) -> str:
    kind = ALGEBRA_ALIASES.get(name, name)
    if kind not in KINDS:
        raise ConfigError(f"unknown algebra {name!r}")
    return kind


# -- argument parsing ---------------------------------------------------------------


def _common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--m", type=int, required=True, help="even dimension")
    ap.add_argument("--n", type=int, required=True, help="odd dimension")
    ap.add_argument("--epsilon", action="append", default=[],
                    help="'all-plus', a JSON matrix, or entries e[i,j]=±1 (repeatable)")
    ap.add_argument("--bind", action="append", default=[], metavar="p[i,j]=EXPR",
                    help="specialise a parameter (repeatable)")
    ap.add_argument("--degree-bound", type=int, default=8)
    ap.add_argument("--out", metavar="FILE.json", help="write the JSON report here")
    ap.add_argument("--no-timings", action="store_true", help="zero wall times in the JSON report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsuper", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-rmatrix", help="Hecke, braid and closure checks for R")
    _common(p)

    p = sub.add_parser("build-algebra", help="build and certify a presentation")
    _common(p)
    p.add_argument("--algebra", default="E", help="E, S, Lambda, Sdual, Lambdadual or H")
    p.add_argument("--save-presentation", metavar="FILE.json")

    p = sub.add_parser("verify", help="run identity suites")
    _common(p)
    p.add_argument("--suite", action="append", default=[], metavar="NAME", help="suite name or 'all' (repeatable)")
    p.add_argument("--list", action="store_true", help="list suites and exit")

    p = sub.add_parser("reduce", help="print the normal form of an expression")
    _common(p)
    p.add_argument("expression")
    p.add_argument("--algebra", default="E")
    p.add_argument("--expect-zero", action="store_true", help="exit 1 unless the expression reduces to 0")

    p = sub.add_parser("hilbert", help="normal word counts against the classical counts")
    _common(p)
    p.add_argument("--algebra", default="E")

    p = sub.add_parser("koszul", help="cohomology of the Koszul complex")
    _common(p)
    p.add_argument("--window", type=int, help="k + l <= window (default 2(m+n))")
    p.add_argument("--shift", type=int, action="append", default=[],
                   help="diagonal l - k = SHIFT (repeatable, default n - m)")
    return ap


def config_from_args(args, suites=None) -> RunConfig:
    d = args.m + args.n
    bindings = dict(parse_binding(b) for b in args.bind)
    cfg = RunConfig(
        m=args.m, n=args.n, epsilon=parse_epsilon(args.epsilon, d) if d > 0 else "all-plus",
        bindings=bindings, degree_bound=args.degree_bound, suites=suites or ["all"],
        window=getattr(args, "window", None), shifts=getattr(args, "shift", None) or None,
        out=args.out, timings=not args.no_timings,
    )
    cfg.validate()
    return cfg


def _emit(data: dict, out: Optional[str]) -> None:
    if out:
        write_json(out, data)


def cmd_report(cfg: RunConfig) -> int:
    report = run(cfg)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_build(args, cfg: RunConfig) -> int:
    kind = algebra_kind(args.algebra)
    ctx = Context(cfg)
    started = time.perf_counter()
    pres = generate_relations(ctx.h, kind, cfg.degree_bound)
    data = {"config": cfg.to_json(), "algebra": kind}
    if kind == "hopf_H":
        data["localisation"] = pres.L.to_json()
        ok = True
    else:
        cert = pres.check_confluence()
        data.update(generators=len(pres.generators), rules=len(pres.rules), certificate=cert.to_json())
        ok = cert.clean
        if args.save_presentation:
            with open(args.save_presentation, "w") as fh:
                fh.write(pres.dumps())
    if cfg.timings:
        data["seconds"] = round(time.perf_counter() - started, 3)
    _emit(data, cfg.out)
    print(json.dumps({k: v for k, v in data.items() if k not in ("config", "localisation")}, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args, cfg: RunConfig) -> int:
    kind = algebra_kind(args.algebra)
    ctx = Context(cfg)
    try:
        if kind == "hopf_H":
            env = ctx.envelope
            value = env.evaluate(env.parse(args.expression))
            text = env.L.format(value)
            zero = value.is_zero()
        else:
            pres = ctx.E if kind == "bialgebra_E" else generate_relations(ctx.h, kind, cfg.degree_bound)
            nf = pres.reduce(pres.parse(args.expression))
            text = pres.format(nf)
            zero = nf.is_zero()
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(text)
    _emit({"config": cfg.to_json(), "algebra": kind, "expression": args.expression, "normal_form": text,
           "is_zero": zero}, cfg.out)
    if args.expect_zero and not zero:
        return EXIT_FAIL
    return EXIT_OK


def cmd_hilbert(args, cfg: RunConfig) -> int:
    kind = algebra_kind(args.algebra)
    if kind not in REFERENCE:
        raise ConfigError(f"no classical reference for {kind}")
    ctx = Context(cfg)
    pres = ctx.E if kind == "bialgebra_E" else generate_relations(ctx.h, kind, cfg.degree_bound)
    cert = pres.check_confluence()
    if not cert.clean:
        print("dirty confluence certificate", file=sys.stderr)
        return EXIT_FAIL
    rows = hilbert_table(pres, kind, cfg.m, cfg.n, cfg.degree_bound)
    print(f"{'degree':>6} {'count':>8} {'classical':>10}  match")
    for r in rows:
        print(f"{r['degree']:>6} {r['count']:>8} {r['classical']:>10}  {'yes' if r['match'] else 'NO'}")
    bad = [r["degree"] for r in rows if not r["match"]]
    if bad:
        print(f"first mismatch at degree {bad[0]}")
    _emit({"config": cfg.to_json(), "algebra": kind, "table": rows,
           "first_mismatch": bad[0] if bad else None}, cfg.out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_koszul(args, cfg: RunConfig) -> int:
    from .koszul import WindowTooSmall

    ctx = Context(cfg)
    try:
        reports = [ctx.complex.cohomology(s) for s in (cfg.shifts or [cfg.n - cfg.m])]
    except WindowTooSmall as exc:
        raise ConfigError(str(exc)) from exc
    ok = True
    for rep in reports:
        dims = " ".join(f"({e.k},{e.l}):{e.cohomology}" for e in rep.entries)
        print(f"shift {rep.shift}: {dims}  d^2=0: {rep.d_squared_zero}  concentrated: {rep.concentrated}")
        ok = ok and rep.concentrated and rep.d_squared_zero
        if rep.distinguished:
            print(f"representative cocycle: {rep.representative_is_cocycle}  "
                  f"outside image: {rep.representative_outside_image}")
            ok = ok and bool(rep.representative_is_cocycle and rep.representative_outside_image)
    _emit({"config": cfg.to_json(), "reports": [r.to_json() for r in reports]}, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify" and args.list:
        for name in sorted(SUITE_REGISTRY):
            print(f"{name:20s} {SUITE_REGISTRY[name].anchor}")
        return EXIT_OK
    try:
        if args.command == "check-rmatrix":
            return cmd_report(config_from_args(args, RMATRIX_SUITES))
        if args.command == "verify":
            return cmd_report(config_from_args(args, args.suite or ["all"]))
        cfg = config_from_args(args, ["confluence"])
        if args.command == "build-algebra":
            return cmd_build(args, cfg)
        if args.command == "reduce":
            return cmd_reduce(args, cfg)
        if args.command == "hilbert":
            return cmd_hilbert(args, cfg)
        if args.command == "koszul":
            return cmd_koszul(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
