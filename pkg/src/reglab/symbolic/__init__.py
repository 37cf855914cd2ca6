"""Exact symbolic layer: polynomials, factored field elements, wedges, B2 terms."""

from .poly import LaurentError, MultiPoly, ParseError, parse_poly
from .algebra import (
    B2WedgeElement,
    DecompositionDocument,
    FactoredElement,
    MultiplicativeBasis,
    NotFactorable,
    WedgeElement,
    apply_tau,
    build_xi,
    check_decomposition,
    factor_over_basis,
    load_decomposition,
    wedge_normalize,
)

__all__ = [
    "MultiPoly",
    "parse_poly",
    "ParseError",
    "LaurentError",
    "MultiplicativeBasis",
    "FactoredElement",
    "WedgeElement",
    "B2WedgeElement",
    "NotFactorable",
    "DecompositionDocument",
    "factor_over_basis",
    "wedge_normalize",
    "check_decomposition",
    "apply_tau",
    "build_xi",
    "load_decomposition",
]
