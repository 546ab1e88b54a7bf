"""Exact sparse bivariate polynomials over the rationals.

A :class:`Poly2` is an immutable map from exponent pairs ``(i, j)`` (the
monomial ``x**i * y**j``) to nonzero :class:`fractions.Fraction`
coefficients.  Univariate polynomials in ``x`` are simply ``Poly2`` values
with no ``y`` in any term; functions that need them check
:meth:`Poly2.is_univariate`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple[int, int]
Scalar = Union[int, Fraction]

#: Degree of the zero polynomial.
NEG_INF = -math.inf


class DivisionByZeroPolynomial(ZeroDivisionError):
    pass


def _grlex_key(m: Monomial) -> tuple[int, int]:
    # ascending total degree, x before y inside a degree: 1, x, y, x^2, x*y, y^2, ...
    return (m[0] + m[1], -m[0])


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class Poly2:
    """Immutable sparse polynomial in ``x`` and ``y`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            c = as_fraction(c)
            if c:
                key = (int(i), int(j))
                total = clean.get(key, 0) + c
                if total:
                    clean[key] = total
                else:
                    clean.pop(key, None)
        self._terms = {m: clean[m] for m in sorted(clean, key=_grlex_key)}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict[Monomial, Fraction]) -> "Poly2":
        # trusted constructor: terms already hold nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = {m: terms[m] for m in sorted(terms, key=_grlex_key)}
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> "Poly2":
        return cls({(i, j): c})

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Scalar]) -> "Poly2":
        """Build ``sum(c_k * x**k)`` from coefficients in ascending order."""
        return cls({(k, 0): c for k, c in enumerate(coeffs)})

    # -- basic structure -------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, i: int, j: int = 0) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> float | int:
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(i + j for i, j in self._terms)

    def degree_in(self, var: str) -> float | int:
        if not self._terms:
            return NEG_INF
        k = _var_index(var)
        return max(m[k] for m in self._terms)

    def is_univariate(self) -> bool:
        return all(j == 0 for _, j in self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self.coeff(0, 0)

    def homogeneous_part(self, k: int) -> "Poly2":
        return Poly2._from_clean({m: c for m, c in self._terms.items() if m[0] + m[1] == k})

    def lowest_degree(self) -> float | int:
        if not self._terms:
            return NEG_INF
        return min(i + j for i, j in self._terms)

    def leading_term(self) -> tuple[Monomial, Fraction]:
        """Largest monomial in graded-lex order (x > y)."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = next(reversed(self._terms))
        return m, self._terms[m]

    # -- ring operations -------------------------------------------------
    def _coerce(self, other) -> "Poly2":
        if isinstance(other, Poly2):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly2.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Poly2._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Poly2._from_clean({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly2):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        get = out.get
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = get(m, 0) + c1 * c2
        return Poly2._from_clean({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar only; use :func:`exact_div` for polynomials."""
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative int")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus ----------------------------------------------------------
    def diff(self, var: str) -> "Poly2":
        k = _var_index(var)
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                nm = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
                out[nm] = c * e
        return Poly2._from_clean(out)

    def antiderivative_x(self) -> "Poly2":
        """Primitive in ``x`` vanishing at ``x = 0`` (univariate input only)."""
        if not self.is_univariate():
            raise ValueError("antiderivative_x needs a polynomial in x only")
        return Poly2._from_clean({(i + 1, 0): c / (i + 1) for (i, _), c in self._terms.items()})

    def coeff_of_y(self, k: int) -> "Poly2":
        """The polynomial in ``x`` multiplying ``y**k``."""
        return Poly2._from_clean({(i, 0): c for (i, j), c in self._terms.items() if j == k})

    def compose_x(self, inner: "Poly2") -> "Poly2":
        """Substitute ``x -> inner`` in a univariate polynomial."""
        if not self.is_univariate():
            raise ValueError("compose_x needs a polynomial in x only")
        result = ZERO
        for i in range(int(self.degree), -1, -1) if self else ():
            result = result * inner + self.coeff(i)
        return result

    # -- evaluation --------------------------------------------------------
    def eval(self, x: float, y: float = 0.0) -> float:
        """Float evaluation, Horner in ``y`` over Horner-in-``x`` coefficients."""
        if not self._terms:
            return 0.0
        total = 0.0
        for row in reversed(self._horner_rows()):
            acc = 0.0
            for c in reversed(row):
                acc = acc * x + c
            total = total * y + acc
        return total

    def eval_exact(self, x: Scalar, y: Scalar = 0) -> Fraction:
        x, y = as_fraction(x), as_fraction(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    def _horner_rows(self) -> list[list[float]]:
        dx = int(self.degree_in("x"))
        dy = int(self.degree_in("y"))
        rows = [[0.0] * (dx + 1) for _ in range(dy + 1)]
        for (i, j), c in self._terms.items():
            rows[j][i] = float(c)
        return rows

    def substitute_fraction_y(self, num: "Poly2", den: "Poly2") -> tuple["Poly2", "Poly2"]:
        """Return ``(N, D)`` with ``self(x, num/den) = N / D`` and ``D = den**deg_y``."""
        dy = int(self.degree_in("y")) if self else 0
        N = ZERO
        for k in range(dy + 1):
            ck = self.coeff_of_y(k)
            if ck:
                N = N + ck * num**k * den ** (dy - k)
        return N, den**dy

    # -- printing ----------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly2('{format_poly(self)}')"


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"unknown variable {var!r}")


def _format_monomial(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def format_poly(p: Poly2) -> str:
    """Canonical text form, readable back by :func:`isocomm.parser.parse_poly`."""
    if not p:
        return "0"
    out = []
    for n, ((i, j), c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(i, j)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if n == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def exact_div(a: Poly2, b: Poly2) -> Poly2 | None:
    """Quotient ``c`` with ``b * c == a``, or ``None`` when ``b`` does not divide ``a``.

    Single-divisor division in graded-lex order: if ``b`` divides ``a`` then
    the leading monomial of every intermediate remainder is a multiple of the
    leading monomial of ``b``, so the first failure of that test proves
    non-divisibility.
    """
    if not b:
        raise DivisionByZeroPolynomial("division by the zero polynomial")
    (bi, bj), bc = b.leading_term()
    rem = dict(a._terms)
    quot: dict[Monomial, Fraction] = {}
    while rem:
        (ri, rj) = max(rem, key=_grlex_key)
        if ri < bi or rj < bj:
            return None
        qm = (ri - bi, rj - bj)
        qc = rem[(ri, rj)] / bc
        quot[qm] = qc
        for (i, j), c in b._terms.items():
            m = (i + qm[0], j + qm[1])
            v = rem.get(m, 0) - qc * c
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return Poly2._from_clean(quot)


ZERO = Poly2()
ONE = Poly2.const(1)
X = Poly2.monomial(1, 0)
Y = Poly2.monomial(0, 1)
