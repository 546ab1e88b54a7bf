"""Newton systems ``x' = -y, y' = sum q_k(x) y^k`` and their Abel and Liénard cases.

Abel systems are stored with the factor-3 convention on the linear term::

    y' = q0(x) + 3 q1(x) y + q2(x) y^2 + q3(x) y^3

which keeps the commutation conditions in their natural form::

    q2 q0 = 3 q1^2 - q0' + 1
    q3 q0^2 = q1^3 - q1' q0 + q1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import VectorField
from .poly2 import ONE, X, Y, ZERO, Poly2, Scalar, as_fraction, exact_div


class PreconditionViolated(ValueError):
    pass


class ConditionsNotSatisfied(ValueError):
    pass


class NotOdd(ValueError):
    pass


def _require_univariate(*polys: Poly2) -> None:
    for p in polys:
        if not p.is_univariate():
            raise ValueError(f"{p} is not a polynomial in x alone")


def _y_expansion(coeffs: Sequence[Poly2]) -> Poly2:
    q = ZERO
    for k, c in enumerate(coeffs):
        if c:
            q = q + c * Y**k
    return q


@dataclass(frozen=True)
class NewtonSystem:
    coeffs: tuple[Poly2, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        _require_univariate(*cs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def has_oscillator_linear_part(self) -> bool:
        q0 = self.coeffs[0] if self.coeffs else ZERO
        q1 = self.coeffs[1] if len(self.coeffs) > 1 else ZERO
        return q0.coeff(0) == 0 and q0.coeff(1) == 1 and q1.coeff(0) == 0

    @property
    def field(self) -> VectorField:
        return VectorField(-Y, _y_expansion(self.coeffs))

    @classmethod
    def from_field(cls, F: VectorField) -> "NewtonSystem":
        if F.p != -Y:
            raise ValueError("a Newton system has x' = -y")
        dy = int(F.q.degree_in("y")) if F.q else 0
        return cls(tuple(F.q.coeff_of_y(k) for k in range(dy + 1)))


@dataclass(frozen=True)
class AbelSystem:
    q0: Poly2
    q1: Poly2
    q2: Poly2
    q3: Poly2

    def __post_init__(self):
        _require_univariate(self.q0, self.q1, self.q2, self.q3)

    @property
    def rhs(self) -> Poly2:
        return self.q0 + self.q1 * 3 * Y + self.q2 * Y**2 + self.q3 * Y**3

    @property
    def field(self) -> VectorField:
        return VectorField(-Y, self.rhs)

    def to_newton(self) -> NewtonSystem:
        return NewtonSystem((self.q0, self.q1 * 3, self.q2, self.q3))

    @classmethod
    def from_newton(cls, ns: NewtonSystem) -> "AbelSystem":
        if ns.n > 3:
            raise ValueError("more than cubic in y")
        cs = list(ns.coeffs) + [ZERO] * (4 - len(ns.coeffs))
        return cls(cs[0], cs[1] / 3, cs[2], cs[3])

    @classmethod
    def from_field(cls, F: VectorField) -> "AbelSystem":
        return cls.from_newton(NewtonSystem.from_field(F))


def s_from_r(q: Poly2, r: Poly2) -> Poly2:
    """Second component forced by the first bracket equation when ``p = -y``."""
    return Y * r.diff("x") - q * r.diff("y")


def newton_commutator_residual(q: Poly2, r: Poly2) -> Poly2:
    """Second bracket component of ``(-y, q)`` and ``(r, s_from_r(q, r))``.

    Written out as
    ``q_x (r - y r_y) + (y q_y - q) r_x + y^2 r_xx - 2 y q r_xy + q^2 r_yy``.
    """
    q_x, q_y = q.diff("x"), q.diff("y")
    r_x, r_y = r.diff("x"), r.diff("y")
    return (q_x * (r - Y * r_y) + (Y * q_y - q) * r_x + Y**2 * r_x.diff("x")
            - Y * q * r_x.diff("y") * 2 + q**2 * r_y.diff("y"))


def abel_residuals(sys: AbelSystem) -> tuple[Poly2, Poly2]:
    q0, q1, q2, q3 = sys.q0, sys.q1, sys.q2, sys.q3
    r1 = q2 * q0 - (q1**2 * 3 - q0.diff("x") + 1)
    r2 = q3 * q0**2 - (q1**3 - q1.diff("x") * q0 + q1)
    return r1, r2


def check_abel_conditions(sys: AbelSystem) -> tuple[bool, Poly2, Poly2]:
    r1, r2 = abel_residuals(sys)
    return (not r1 and not r2), r1, r2


def _check_initial_data(q0: Poly2, q1: Poly2) -> None:
    if q0.coeff(0) != 0 or q0.coeff(1) != 1 or q1.coeff(0) != 0:
        raise PreconditionViolated("need q0(0) = 0, q0'(0) = 1, q1(0) = 0")


def solve_q2_q3(q0: Poly2, q1: Poly2) -> tuple[Poly2, Poly2] | None:
    """Solve the two commutation conditions for ``q2, q3``; ``None`` if not polynomial."""
    _require_univariate(q0, q1)
    _check_initial_data(q0, q1)
    q2 = exact_div(q1**2 * 3 - q0.diff("x") + 1, q0)
    if q2 is None:
        return None
    q3 = exact_div(q1**3 - q1.diff("x") * q0 + q1, q0**2)
    if q3 is None:
        return None
    return q2, q3


def abel_coefficients(a: Scalar, h: Poly2) -> AbelSystem:
    """Coefficient form of the polynomial Abel family with parameters ``a`` and ``h(x)``."""
    _require_univariate(h)
    a = as_fraction(a)
    q0 = X + X**3 * (a * a)
    q1 = X * a + q0 * h
    q2 = X * h * (6 * a) + q0 * h**2 * 3
    q3 = X * h**2 * (3 * a) + q0 * h**3 - h.diff("x")
    return AbelSystem(q0, q1, q2, q3)


def generate_abel(a: Scalar, h: Poly2) -> tuple[AbelSystem, VectorField]:
    """The isochronous Abel system
    ``y' = (x + a^2 x^3)(1 + h y)^3 + 3 a x y (1 + h y)^2 - h' y^3``.

    The field is expanded directly from that closed form and the coefficient
    form is built independently; the two must agree.
    """
    a = as_fraction(a)
    sys = abel_coefficients(a, h)
    w = ONE + h * Y
    rhs = (X + X**3 * (a * a)) * w**3 + X * Y * w**2 * (3 * a) - h.diff("x") * Y**3
    if rhs != sys.rhs:
        raise AssertionError("closed form and coefficient form disagree")
    return sys, VectorField(-Y, rhs)


def _rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return None


def recover_abel_parameters(sys: AbelSystem) -> tuple[Fraction, Poly2] | None:
    """Find ``(a, h)`` with ``abel_coefficients(a, h) == sys``, or ``None``.

    ``q0`` must be ``x + A x^3`` with ``A = a^2``; ``h`` is the quotient of
    ``q1 - a x`` by ``q0``.  Only one sign of ``a`` can make that division exact
    when ``a != 0``, so both are tried.
    """
    q0 = sys.q0
    A = q0.coeff(3)
    if q0 != X + X**3 * A:
        return None
    root = _rational_sqrt(A)
    if root is None:
        return None
    for a in ((root, -root) if root else (root,)):
        h = exact_div(sys.q1 - X * a, q0)
        if h is not None and abel_coefficients(a, h) == sys:
            return a, h
    return None


def abel_partner(sys: AbelSystem) -> VectorField:
    """The transversal commuting field ``r = q0 + q1 y``, ``s = y r_x - q r_y``."""
    ok, _, _ = check_abel_conditions(sys)
    if not ok:
        raise ConditionsNotSatisfied("the Abel coefficients violate the commutation conditions")
    r = sys.q0 + sys.q1 * Y
    return VectorField(r, s_from_r(sys.rhs, r))


def abel_partner_degree(sys: AbelSystem) -> int:
    return int(abel_partner(sys).degree)


def is_odd(p: Poly2) -> bool:
    return all(i % 2 == 1 for (i, _j) in p.terms)


def gen_lienard_isochronous(q1: Poly2) -> NewtonSystem:
    """Liénard system ``x' = -y, y' = q0 + q1 y`` with ``q0 = x + I^2 / x^3``.

    ``I(x)`` is the primitive of ``x q1(x)`` vanishing at 0; ``q1`` must be odd.
    """
    _require_univariate(q1)
    if not is_odd(q1):
        raise NotOdd(f"{q1} has even powers of x")
    I = (X * q1).antiderivative_x()
    tail = exact_div(I**2, X**3)
    if tail is None:  # cannot happen for odd q1, I = O(x^3)
        raise AssertionError("I^2 not divisible by x^3")
    return NewtonSystem((X + tail, q1))


def homogeneous_perturbation(m: int) -> VectorField:
    """``x' = -y``, ``y' = x + x^(2m-1) y (x^2 + y^2)``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return VectorField(-Y, X + X ** (2 * m - 1) * Y * (X**2 + Y**2))


def damped_family(f: Poly2) -> VectorField:
    """``x' = -y``, ``y' = f(x)(1 + y)``: always a center, never isochronous."""
    _require_univariate(f)
    if f.coeff(0) != 0 or f.coeff(1) != 1:
        raise PreconditionViolated("f must start with x")
    return VectorField(-Y, f * (ONE + Y))


def damped_family_integral(f: Poly2):
    """First integral ``U(x) + y - ln(1 + y)`` of :func:`damped_family`, as a float function."""
    U = f.antiderivative_x()

    def H(x: float, y: float) -> float:
        return U.eval(x, 0.0) + y - math.log1p(y)

    return H
