"""Planar polynomial vector fields and the operations on them.

The bracket convention follows the commutation identities: for
``F = (p, q)`` and ``G = (r, s)``::

    [F, G] = (r p_x + s p_y - p r_x - q r_y,
              r q_x + s q_y - p s_x - q s_y)

so ``F`` and ``G`` commute exactly when both components vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .poly2 import ONE, X, Y, ZERO, Poly2, as_fraction


class NotAreaPreserving(ValueError):
    pass


class OriginNotFixed(ValueError):
    pass


@dataclass(frozen=True)
class VectorField:
    """The system ``x' = p(x, y)``, ``y' = q(x, y)``."""

    p: Poly2
    q: Poly2

    @property
    def degree(self):
        return max(self.p.degree, self.q.degree)

    def is_zero(self) -> bool:
        return not self.p and not self.q

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.p, -self.q)

    def __mul__(self, c) -> "VectorField":
        # scalar or polynomial multiple
        return VectorField(self.p * c, self.q * c)

    __rmul__ = __mul__

    def eval(self, x: float, y: float) -> tuple[float, float]:
        return self.p.eval(x, y), self.q.eval(x, y)

    def __str__(self) -> str:
        return f"({self.p}, {self.q})"


def lie_bracket(F: VectorField, G: VectorField) -> VectorField:
    p, q = F.p, F.q
    r, s = G.p, G.q
    p_x, p_y = p.diff("x"), p.diff("y")
    q_x, q_y = q.diff("x"), q.diff("y")
    r_x, r_y = r.diff("x"), r.diff("y")
    s_x, s_y = s.diff("x"), s.diff("y")
    return VectorField(
        r * p_x + s * p_y - p * r_x - q * r_y,
        r * q_x + s * q_y - p * s_x - q * s_y,
    )


def commute(F: VectorField, G: VectorField) -> bool:
    return lie_bracket(F, G).is_zero()


def is_cauchy_riemann(F: VectorField) -> bool:
    """True iff ``p_x = q_y`` and ``p_y = -q_x`` as polynomial identities."""
    p, q = F.p, F.q
    return (p.diff("x") - q.diff("y")).is_zero() and (p.diff("y") + q.diff("x")).is_zero()


def orthogonal(F: VectorField) -> VectorField:
    return VectorField(F.q, -F.p)


def transversality_det(F: VectorField, G: VectorField) -> Poly2:
    """``p*s - q*r``; zero exactly where the two fields are collinear."""
    return F.p * G.q - F.q * G.p


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial ``f(z) = sum c_k z**k`` with exact complex-rational coefficients.

    ``coeffs[k]`` is ``(re, im)`` of the coefficient of ``z**k``.
    """

    coeffs: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        cs = [(as_fraction(re), as_fraction(im)) for re, im in self.coeffs]
        while cs and cs[-1] == (0, 0):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_complex(cls, coeffs: Iterable[complex | int | tuple]) -> "ComplexPoly":
        """Accept ints, ``(re, im)`` pairs or Python complexes with integral parts."""
        out = []
        for c in coeffs:
            if isinstance(c, tuple):
                out.append(c)
            elif isinstance(c, complex):
                if c.real != int(c.real) or c.imag != int(c.imag):
                    raise ValueError("use (re, im) Fractions for non-integral coefficients")
                out.append((int(c.real), int(c.imag)))
            else:
                out.append((c, 0))
        return cls(tuple(out))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly(tuple((k * re, k * im) for k, (re, im) in enumerate(self.coeffs) if k))

    def as_complex(self) -> list[complex]:
        return [complex(float(re), float(im)) for re, im in self.coeffs]

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.as_complex()):
            acc = acc * z + c
        return acc


def _z_powers(n: int) -> list[tuple[Poly2, Poly2]]:
    """Real and imaginary parts of ``(x + i y)**k`` for ``k = 0..n``."""
    out = [(ONE, ZERO)]
    re, im = ONE, ZERO
    for _ in range(n):
        # (re + i im)(x + i y)
        re, im = re * X - im * Y, re * Y + im * X
        out.append((re, im))
    return out


def from_holomorphic(f: ComplexPoly) -> VectorField:
    """Realify ``z' = f(z)`` into ``(Re f(x+iy), Im f(x+iy))`` exactly."""
    p, q = ZERO, ZERO
    for (a, b), (re, im) in zip(f.coeffs, _z_powers(f.degree)):
        # (a + i b)(re + i im)
        p = p + re * a - im * b
        q = q + im * a + re * b
    return VectorField(p, q)


def hamiltonian_from_area_preserving(u: Poly2, v: Poly2) -> tuple[VectorField, VectorField]:
    """Isochronous Hamiltonian system and its commuting partner from a unimodular map.

    With ``u_x v_y - u_y v_x == 1`` the system
    ``(-u u_y - v v_y, u u_x + v v_x)`` is the harmonic oscillator in the
    ``(u, v)`` chart, and ``(u v_y - v u_y, -u v_x + v u_x)`` is the Euler field
    there.  Both are returned.
    """
    if u.constant_term() or v.constant_term():
        raise OriginNotFixed("u and v must vanish at the origin")
    u_x, u_y = u.diff("x"), u.diff("y")
    v_x, v_y = v.diff("x"), v.diff("y")
    jac = u_x * v_y - u_y * v_x
    if jac != ONE:
        raise NotAreaPreserving(f"u_x v_y - u_y v_x = {jac}, expected 1")
    system = VectorField(-(u * u_y) - v * v_y, u * u_x + v * v_x)
    partner = VectorField(u * v_y - v * u_y, -(u * v_x) + v * u_x)
    return system, partner
