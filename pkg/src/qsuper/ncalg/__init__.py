"""Noncommutative polynomials, rewriting presentations and localisation."""

from .localize import LocalizedAlgebra, LocElement, adjoin_inverse
from .poly import GeneratorSymbol, NCPolynomial, format_poly, parse
from .relations import (
    KINDS,
    classical_exterior,
    classical_hilbert,
    e_relations,
    generate_relations,
    quadratic_relations,
)
from .rewrite import (
    Certificate,
    CompletionError,
    DegreeBoundError,
    DirtyCertificate,
    OrientationError,
    Presentation,
    from_relations,
)

__all__ = [
    "KINDS",
    "Certificate",
    "CompletionError",
    "DegreeBoundError",
    "DirtyCertificate",
    "GeneratorSymbol",
    "LocElement",
    "LocalizedAlgebra",
    "NCPolynomial",
    "OrientationError",
    "Presentation",
    "adjoin_inverse",
    "classical_exterior",
    "classical_hilbert",
    "e_relations",
    "format_poly",
    "from_relations",
    "generate_relations",
    "parse",
    "quadratic_relations",
]
