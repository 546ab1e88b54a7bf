from fractions import Fraction

import sympy
from hypothesis import strategies as st

from isocomm.field import VectorField
from isocomm.poly2 import Poly2

sx, sy = sympy.symbols("x y")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_degree: int = 4, max_terms: int = 6) -> Poly2:
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree - i))
        terms[(i, j)] = draw(small_fractions)
    return Poly2(terms)


@st.composite
def univariate_polys(draw, max_degree: int = 5) -> Poly2:
    return Poly2.from_univariate(draw(st.lists(small_fractions, max_size=max_degree + 1)))


@st.composite
def fields(draw, max_degree: int = 4, max_terms: int = 5) -> VectorField:
    return VectorField(draw(polys(max_degree, max_terms)), draw(polys(max_degree, max_terms)))


def to_sympy(p: Poly2) -> sympy.Expr:
    return sum((sympy.Rational(c.numerator, c.denominator) * sx**i * sy**j
                for (i, j), c in p.terms.items()), sympy.Integer(0))


def from_sympy(e) -> Poly2:
    P = sympy.Poly(sympy.expand(e), sx, sy)
    return Poly2({m: Fraction(int(c.p), int(c.q)) for m, c in P.terms()})


def sympy_bracket(F: VectorField, G: VectorField) -> tuple:
    p, q, r, s = (to_sympy(c) for c in (F.p, F.q, G.p, G.q))
    first = r * sympy.diff(p, sx) + s * sympy.diff(p, sy) - p * sympy.diff(r, sx) - q * sympy.diff(r, sy)
    second = r * sympy.diff(q, sx) + s * sympy.diff(q, sy) - p * sympy.diff(s, sx) - q * sympy.diff(s, sy)
    return sympy.expand(first), sympy.expand(second)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
