"""Commuting polynomial vector fields and isochronous centers in the plane."""

from .centralizer import CentralizerBasis, centralizer, find_transversal, in_span
from .field import ComplexPoly, VectorField, from_holomorphic, lie_bracket, orthogonal
from .newton_abel import AbelSystem, NewtonSystem, abel_partner, generate_abel
from .parser import ParseError, parse_poly
from .poly2 import Poly2, X, Y, format_poly

__all__ = [
    "AbelSystem", "CentralizerBasis", "ComplexPoly", "NewtonSystem", "ParseError", "Poly2",
    "VectorField", "X", "Y", "abel_partner", "centralizer", "find_transversal", "format_poly",
    "from_holomorphic", "generate_abel", "in_span", "lie_bracket", "orthogonal", "parse_poly",
]
