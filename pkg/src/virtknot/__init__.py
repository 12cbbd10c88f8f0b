"""Gauss-diagram toolkit for classical and virtual knots."""

from .diagram import (
    CLOSED,
    LONG,
    CapExceededError,
    Chord,
    DiagramSum,
    GaussCodeError,
    GaussDiagram,
    canonicalize,
    empty_diagram,
    gauss_formula,
    j_map,
    pair,
    parse_gauss_code,
    sub_diagrams,
)
from .polys import LaurentPoly

__all__ = [
    "CLOSED",
    "LONG",
    "CapExceededError",
    "Chord",
    "DiagramSum",
    "GaussCodeError",
    "GaussDiagram",
    "LaurentPoly",
    "canonicalize",
    "empty_diagram",
    "gauss_formula",
    "j_map",
    "pair",
    "parse_gauss_code",
    "sub_diagrams",
]

__version__ = "0.1.0"
