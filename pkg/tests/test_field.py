import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fields, small_fractions, sympy_bracket, from_sympy
from isocomm.field import (ComplexPoly, NotAreaPreserving, OriginNotFixed, VectorField, commute,
                           from_holomorphic, hamiltonian_from_area_preserving, is_cauchy_riemann,
                           lie_bracket, orthogonal, transversality_det)
from isocomm.parser import parse_poly
from isocomm.poly2 import X, Y, ZERO, Poly2

ROT = VectorField(-Y, X)
EULER = VectorField(X, Y)
KUKLES = VectorField(-Y, X + X * Y * 3 + X**3)
KUKLES_PARTNER = VectorField(X + X * Y + X**3, Y - X**2 + Y**2 - X**4)
IZ = ComplexPoly(((0, 0), (0, 1), (0, 0), (0, -1)))


def test_rotation_commutes_with_euler():
    assert lie_bracket(ROT, EULER).is_zero()
    assert commute(ROT, EULER)


def test_kukles_pair_commutes():
    assert lie_bracket(KUKLES, KUKLES_PARTNER).is_zero()


def test_bracket_sign_convention():
    # [F, G] = DF.G - DG.F; for F = (-y, x), G = (x, 0): DF.G = (0, x), DG.F = (-y, 0)
    assert lie_bracket(ROT, VectorField(X, ZERO)) == VectorField(Y, X)


@settings(max_examples=100)
@given(fields(3, 4), fields(3, 4))
def test_bracket_matches_sympy(F, G):
    first, second = sympy_bracket(F, G)
    assert lie_bracket(F, G) == VectorField(from_sympy(first), from_sympy(second))


@given(fields())
def test_self_bracket_vanishes(F):
    assert lie_bracket(F, F).is_zero()


def test_cauchy_riemann_examples():
    assert is_cauchy_riemann(from_holomorphic(IZ))
    assert not is_cauchy_riemann(KUKLES)
    assert is_cauchy_riemann(EULER)


def test_orthogonal():
    assert orthogonal(ROT) == EULER
    F = KUKLES
    assert orthogonal(orthogonal(F)) == -F
    H = from_holomorphic(IZ)
    assert lie_bracket(H, orthogonal(H)).is_zero()


def test_transversality_det():
    assert transversality_det(KUKLES, KUKLES) == ZERO
    assert transversality_det(ROT, EULER) == -(Y**2) - X**2
    det = transversality_det(KUKLES, KUKLES_PARTNER)
    assert det.constant_term() == 0 and det != ZERO


def test_from_holomorphic_examples():
    assert from_holomorphic(ComplexPoly(((0, 0), (0, 1)))) == ROT
    assert from_holomorphic(ComplexPoly(((0, 0), (1, 0)))) == EULER
    H = from_holomorphic(IZ)
    assert H == VectorField(-Y + X**2 * Y * 3 - Y**3, X - X**3 + X * Y**2 * 3)


def test_from_holomorphic_matches_complex_arithmetic():
    rng = random.Random(5)
    f = ComplexPoly.from_complex([1 - 2j, (0, Fraction(1, 2)), 3, -1 + 1j, 2j])
    H = from_holomorphic(f)
    for _ in range(20):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        w = f(z)
        assert cmath.isclose(complex(*H.eval(z.real, z.imag)), w, rel_tol=1e-12, abs_tol=1e-12)


def test_from_complex_rejects_inexact():
    with pytest.raises(ValueError):
        ComplexPoly.from_complex([0.5j])


def test_complex_poly_basics():
    f = ComplexPoly(((1, 0), (0, 2), (0, 0), (0, 0)))
    assert f.degree == 1
    assert f.derivative().as_complex() == [2j]
    assert IZ.derivative()(1) == -2j


def test_hamiltonian_examples():
    system, partner = hamiltonian_from_area_preserving(X, Y)
    assert system == ROT and partner == EULER
    system, partner = hamiltonian_from_area_preserving(X, Y + X**2)
    v = Y + X**2
    assert system == VectorField(-v, X + X * v * 2)
    assert partner == VectorField(X, Y - X**2)
    assert lie_bracket(system, partner).is_zero()


def test_hamiltonian_errors():
    with pytest.raises(NotAreaPreserving):
        hamiltonian_from_area_preserving(X * 2, Y)
    with pytest.raises(OriginNotFixed):
        hamiltonian_from_area_preserving(X + 1, Y)


@settings(max_examples=300)
@given(fields(4, 4), fields(4, 4))
def test_antisymmetry(F, G):
    assert lie_bracket(F, G) == -lie_bracket(G, F)


@settings(max_examples=200)
@given(fields(3, 3), fields(3, 3), fields(3, 3), small_fractions, small_fractions)
def test_bilinearity(F1, F2, G, a, b):
    assert lie_bracket(F1 * a + F2 * b, G) == lie_bracket(F1, G) * a + lie_bracket(F2, G) * b


@settings(max_examples=150)
@given(fields(3, 3), fields(3, 3), fields(3, 3))
def test_jacobi(F, G, H):
    total = (lie_bracket(F, lie_bracket(G, H)) + lie_bracket(G, lie_bracket(H, F))
             + lie_bracket(H, lie_bracket(F, G)))
    assert total.is_zero()


complex_coeffs = st.tuples(small_fractions, small_fractions)


@settings(max_examples=150)
@given(st.lists(complex_coeffs, min_size=1, max_size=5))
def test_holomorphic_fields_commute_with_orthogonal(cs):
    F = from_holomorphic(ComplexPoly(tuple(cs)))
    assert is_cauchy_riemann(F)
    assert lie_bracket(F, orthogonal(F)).is_zero()


@settings(max_examples=200)
@given(fields(3, 4))
def test_cauchy_riemann_implies_commutation(F):
    if is_cauchy_riemann(F):
        assert lie_bracket(F, orthogonal(F)).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.lists(small_fractions, max_size=2), st.lists(small_fractions, max_size=2))
def test_area_preserving_perturbations_commute(phi_cs, psi_cs):
    # u -> u + phi(v), then v -> v + psi(u) keeps the Jacobian equal to 1
    phi = Poly2.from_univariate([0, 0] + phi_cs)
    psi = Poly2.from_univariate([0, 0] + psi_cs)
    u = X + _subst_x(phi, Y)
    v = Y + _subst_x(psi, u)
    system, partner = hamiltonian_from_area_preserving(u, v)
    assert lie_bracket(system, partner).is_zero()


def _subst_x(p: Poly2, inner: Poly2) -> Poly2:
    out = ZERO
    for (i, _j), c in p.terms.items():
        out = out + inner**i * c
    return out


def test_field_arithmetic_and_printing():
    F = VectorField(parse_poly("-y"), parse_poly("x + x^3"))
    assert str(F) == "(-y, x + x^3)"
    assert (F - F).is_zero()
    assert F * Fraction(1, 2) + F * Fraction(1, 2) == F
    assert F * X == VectorField(-(X * Y), X**2 + X**4)
    assert F.degree == 3
    assert F.eval(1.0, 2.0) == (-2.0, 2.0)
