"""Named systems with their printed commuting partners.

Each entry records where the system comes from in ``source`` so that a
failing check can be traced back to the claim it reproduces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .field import ComplexPoly, VectorField, from_holomorphic, hamiltonian_from_area_preserving
from .field import lie_bracket, orthogonal
from .newton_abel import (abel_partner, damped_family, gen_lienard_isochronous, generate_abel,
                          homogeneous_perturbation)
from .parser import parse_poly
from .poly2 import ONE, X, Y, Poly2

ISOCHRONOUS = "isochronous"
NOT_ISOCHRONOUS = "not_isochronous"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    system: VectorField
    claimed_partner: VectorField | None
    expected: str
    source: str
    center: tuple[float, float] = (0.0, 0.0)


def _vf(p: str, q: str) -> VectorField:
    return VectorField(parse_poly(p), parse_poly(q))


def kolmogorov(a) -> tuple[VectorField, VectorField]:
    """Cubic Kolmogorov family and its partner, parameter ``a``."""
    a = Fraction(a)
    F = VectorField(-Y + X * Y * 2 - X**2 * Y * a, X - X**2 + Y**2 - X * Y**2 * a)
    G = VectorField(X - X**2 + Y**2 - X * Y**2 * a, Y - X * Y * 2 - Y**3 * a)
    return F, G


def alpha_beta(alpha, beta) -> tuple[VectorField, VectorField]:
    """Two-parameter isochronous cubic family and its partner."""
    w = (ONE + X) * Fraction(alpha) + Y * Fraction(beta)
    F = VectorField(-Y - X * Y * 2 + X**2 * w, X + X**2 - Y**2 + X * Y * w)
    G = VectorField(X + X**2 - Y**2 + X * Y * w, Y + X * Y * 2 + Y**2 * w)
    return F, G


def bracket_vanishes_identically(family: Callable[..., tuple[VectorField, VectorField]],
                                 n_params: int, degree: int = 1) -> bool:
    """Exact check that ``[F(t), G(t)] = 0`` for every parameter vector ``t``.

    When both fields have degree <= ``degree`` in each parameter the bracket
    has degree <= ``2 * degree`` in each, and a polynomial of that kind that
    vanishes on a full grid of ``2 * degree + 1`` points per parameter is zero.
    """
    grid = [Fraction(k) for k in range(2 * degree + 1)]
    for params in itertools.product(grid, repeat=n_params):
        F, G = family(*params)
        if not lie_bracket(F, G).is_zero():
            return False
    return True


IZ_ONE_MINUS_Z2 = ComplexPoly(((0, 0), (0, 1), (0, 0), (0, -1)))


def build_catalog() -> list[CatalogEntry]:
    entries = [
        CatalogEntry("example1-a", _vf("-y - 3*x^2*y + y^3", "x + x^3 - 3*x*y^2"),
                     _vf("x + x^3 - 3*x*y^2", "y + 3*x^2*y - y^3"), ISOCHRONOUS, "Example 1"),
        CatalogEntry("example1-b", _vf("-y + x^2*y", "x + x*y^2"),
                     _vf("x - x^3", "y - x^2*y"), ISOCHRONOUS, "Example 1"),
        CatalogEntry("example1-c", _vf("-y + 3*x^2*y", "x - 2*x^3 + 9*x*y^2"),
                     _vf("x - 5*x^3 + 6*x^5", "y - 9*x^2*y + 18*x^4*y"), ISOCHRONOUS, "Example 1"),
        CatalogEntry("example1-d", _vf("-y - 3*x^2*y", "x + 2*x^3 - 9*x*y^2"),
                     _vf("x + 5*x^3 + 6*x^5", "y + 9*x^2*y + 18*x^4*y"), ISOCHRONOUS, "Example 1"),
        CatalogEntry("kukles", _vf("-y", "x + 3*x*y + x^3"),
                     _vf("x + x*y + x^3", "y - x^2 + y^2 - x^4"), ISOCHRONOUS, "Example 2"),
        CatalogEntry("kolmogorov-a1", *kolmogorov(1), ISOCHRONOUS, "Example 3"),
        CatalogEntry("alpha-beta-1-2", *alpha_beta(1, 2), ISOCHRONOUS, "Example 4"),
        CatalogEntry("hamiltonian-x-y+x2", *hamiltonian_from_area_preserving(X, Y + X**2),
                     ISOCHRONOUS, "Example 5"),
        CatalogEntry("devlin", _vf("-y - x^4 + 4*x^2*y^2 + y^4", "x - 4*x^3*y"), None, UNKNOWN,
                     "Devlin's example"),
        CatalogEntry("homog-m1", homogeneous_perturbation(1), None, ISOCHRONOUS,
                     "Homogeneous perturbation, m=1"),
        CatalogEntry("homog-m2", homogeneous_perturbation(2), None, ISOCHRONOUS,
                     "Homogeneous perturbation, m=2"),
        CatalogEntry("lienard-q1-x", gen_lienard_isochronous(X).field, None, ISOCHRONOUS,
                     "Sabatini Lienard class"),
        CatalogEntry("damped-x", damped_family(X), None, NOT_ISOCHRONOUS, "y' = f(x)(1+y) family"),
    ]
    for name, a, h in (("abel-a0-h1", 0, ONE), ("abel-a0-hx", 0, X), ("abel-a1-h0", 1, Poly2())):
        sys, F = generate_abel(a, h)
        entries.append(CatalogEntry(name, F, abel_partner(sys), ISOCHRONOUS, "Polynomial Abel family"))
    hol = from_holomorphic(IZ_ONE_MINUS_Z2)
    entries.append(CatalogEntry("holomorphic-iz(1-z^2)", hol, orthogonal(hol), ISOCHRONOUS,
                                "Holomorphic counterexample, f(z) = iz(1-z^2)"))
    ids = [e.id for e in entries]
    assert len(ids) == len(set(ids)), "duplicate catalog ids"
    return entries


def catalog_by_id(entries: Sequence[CatalogEntry] | None = None) -> dict[str, CatalogEntry]:
    return {e.id: e for e in (build_catalog() if entries is None else entries)}
