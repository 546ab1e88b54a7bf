"""Degree-bounded centralizers of polynomial vector fields.

For a field ``F`` and a bound ``d`` the unknown field ``G = (r, s)`` is
written with undetermined coefficients on every monomial of total degree
``<= d``.  ``[F, G] = 0`` is linear in those coefficients, one equation per
monomial of each bracket component.  The exact rational nullspace of that
system is the space of commuting fields of degree ``<= d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .field import VectorField, lie_bracket, transversality_det
from .poly2 import Monomial, Poly2

Row = dict[int, Fraction]


class ZeroField(ValueError):
    pass


class VerificationFailed(RuntimeError):
    pass


def monomials_upto(d: int) -> list[Monomial]:
    """All ``(i, j)`` with ``i + j <= d`` in graded-lex order (1, x, y, x^2, xy, ...)."""
    return [(k - j, j) for k in range(d + 1) for j in range(k + 1)]


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system ``A c = 0`` for the coefficients ``c`` of ``(r, s)``.

    Column ``k`` is ``columns[k] = (component, monomial)`` with component 0
    for ``r`` and 1 for ``s``; row ``i`` is ``row_keys[i]``, the bracket
    component and monomial whose coefficient it sets to zero.
    """

    field: VectorField
    degree_bound: int
    columns: tuple[tuple[int, Monomial], ...]
    row_keys: tuple[tuple[int, Monomial], ...]
    rows: tuple[Row, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def field_from_vector(self, vec: Row) -> VectorField:
        r: dict[Monomial, Fraction] = {}
        s: dict[Monomial, Fraction] = {}
        for k, c in vec.items():
            comp, m = self.columns[k]
            (r if comp == 0 else s)[m] = c
        return VectorField(Poly2(r), Poly2(s))

    def vector_from_field(self, G: VectorField) -> Row:
        index = {col: k for k, col in enumerate(self.columns)}
        vec: Row = {}
        for comp, poly in ((0, G.p), (1, G.q)):
            for m, c in poly.items():
                if (comp, m) not in index:
                    raise ValueError(f"{G} exceeds the degree bound {self.degree_bound}")
                vec[index[(comp, m)]] = c
        return vec


@dataclass(frozen=True)
class CentralizerBasis:
    field: VectorField
    degree_bound: int
    basis: tuple[VectorField, ...]
    system: LinearSystem = field(repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)


def build_system(F: VectorField, d: int) -> LinearSystem:
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    mons = monomials_upto(d)
    columns = tuple((comp, m) for comp in (0, 1) for m in mons)
    top = d + max(int(F.degree), 0) - 1 if not F.is_zero() else d
    row_keys = tuple((comp, m) for comp in (0, 1) for m in monomials_upto(max(top, 0)))
    row_index = {key: i for i, key in enumerate(row_keys)}
    rows: list[Row] = [dict() for _ in row_keys]
    for k, (comp, m) in enumerate(columns):
        unit = Poly2({m: 1})
        G = VectorField(unit, Poly2()) if comp == 0 else VectorField(Poly2(), unit)
        B = lie_bracket(F, G)
        for bcomp, poly in ((0, B.p), (1, B.q)):
            for mono, c in poly.items():
                rows[row_index[(bcomp, mono)]][k] = c
    return LinearSystem(F, d, columns, row_keys, tuple(r for r in rows))


def rref(rows: Sequence[Row], ncols: int) -> list[tuple[int, Row]]:
    """Reduced row echelon form of a sparse rational matrix.

    Returns ``(pivot_column, row)`` pairs sorted by pivot column, each row
    scaled so its pivot entry is 1.  Among the candidate rows for a pivot
    the sparsest one is taken, which keeps fill-in low on the very sparse
    bracket matrices.
    """
    work = [dict(r) for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(work):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    for col in range(ncols):
        cand = [i for i in col_rows.get(col, ()) if i not in used]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(work[i]), i))
        prow = work[piv]
        inv = 1 / prow[col]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
        used.add(piv)
        pivots.append((col, piv))
        for i in list(col_rows[col]):
            if i == piv:
                continue
            row = work[i]
            factor = row[col]
            for c, v in prow.items():
                nv = row.get(c, 0) - factor * v
                if nv:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(i)
                    row[c] = nv
                else:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(i)
    return [(col, work[i]) for col, i in pivots]


def nullspace(rows: Sequence[Row], ncols: int) -> list[Row]:
    """Canonical nullspace basis: the reduced echelon basis of the solution space."""
    pivots = rref(rows, ncols)
    pivot_cols = {c for c, _ in pivots}
    raw: list[Row] = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec: Row = {free: Fraction(1)}
        for pc, prow in pivots:
            v = prow.get(free)
            if v:
                vec[pc] = -v
        raw.append(vec)
    return [row for _, row in rref(raw, ncols)]


def solve_nullspace(system: LinearSystem) -> CentralizerBasis:
    vectors = nullspace(system.rows, len(system.columns))
    basis = tuple(system.field_from_vector(v) for v in vectors)
    for B in basis:
        if not lie_bracket(system.field, B).is_zero():
            raise VerificationFailed(f"basis element {B} does not commute with {system.field}")
    return CentralizerBasis(system.field, system.degree_bound, basis, system)


def centralizer(F: VectorField, d: int | None = None) -> CentralizerBasis:
    """Commuting polynomial fields of degree ``<= d`` (default ``deg F``)."""
    if F.is_zero():
        raise ZeroField("the zero field commutes with everything")
    if d is None:
        d = int(F.degree)
    return solve_nullspace(build_system(F, d))


def coordinates(cb: CentralizerBasis, G: VectorField) -> list[Fraction] | None:
    """Coefficients expressing ``G`` in the basis, or ``None`` if ``G`` is outside the span."""
    try:
        target = cb.system.vector_from_field(G)
    except ValueError:
        return None
    vecs = [cb.system.vector_from_field(B) for B in cb.basis]
    coeffs = []
    residual = dict(target)
    for vec in vecs:
        # echelon basis: the pivot of each vector is its smallest column
        pivot = min(vec)
        c = residual.get(pivot, Fraction(0))
        coeffs.append(c)
        if c:
            for k, v in vec.items():
                nv = residual.get(k, 0) - c * v
                if nv:
                    residual[k] = nv
                else:
                    residual.pop(k, None)
    return coeffs if not residual else None


def in_span(cb: CentralizerBasis, G: VectorField) -> bool:
    return coordinates(cb, G) is not None


def _circle_points(n: int, radius: Fraction) -> list[tuple[Fraction, Fraction]]:
    # rational points on the circle via t = tan(theta/2)
    pts = []
    for k in range(n):
        theta = 2 * math.pi * (k + 0.5) / n
        t = Fraction(math.tan(theta / 2)).limit_denominator(10**6)
        den = 1 + t * t
        pts.append((radius * (1 - t * t) / den, radius * 2 * t / den))
    return pts


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, v in enumerate(b):
            a[shift + i] -= c * v
        a.pop()
        _trim(a)
    return a


def _horner_q(p: list[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _real_roots(p: list[Fraction], width: Fraction = Fraction(1, 10**12)) -> list[Fraction]:
    """Rational approximations of the distinct real roots of ``sum p[k] t**k`` (Sturm bisection)."""
    p = _trim(list(p))
    if len(p) < 2:
        return []
    chain = [p, _trim([k * c for k, c in enumerate(p)][1:])]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])

    def changes(t: Fraction) -> int:
        signs = [v for v in (_horner_q(q, t) for q in chain) if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    roots = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = changes(lo) - changes(hi)
        if n == 0:
            continue
        if hi - lo < width:
            roots.append((lo + hi) / 2)
            continue
        # split at a point that is not itself a root so the counts stay exact
        mid, k = (lo + hi) / 2, 3
        while _horner_q(p, mid) == 0:
            mid = lo + (hi - lo) * Fraction(k - 1, 2 * k)
            k += 1
        stack += [(lo, mid), (mid, hi)]
    return sorted(roots)


def zero_directions(form: Poly2) -> list[tuple[Fraction, Fraction]]:
    """Unit-free directions ``(x, y)`` where the homogeneous ``form`` vanishes."""
    k = int(form.degree)
    dirs = [(Fraction(1), Fraction(0))] if form.coeff(k, 0) == 0 else []
    # form(t, 1) as a polynomial in t
    coeffs = [form.coeff(i, k - i) for i in range(k + 1)]
    for t in _real_roots(coeffs):
        # snap to a nearby rational root when there is one, so that sampling hits it exactly
        snapped = t.limit_denominator(10**6)
        dirs.append((snapped if _horner_q(coeffs, snapped) == 0 else t, Fraction(1)))
    return dirs


def transversal_near_origin(det: Poly2, samples: int = 64, radius: Fraction = Fraction(1, 16)) -> bool:
    """Whether ``det`` is nonvanishing on a punctured neighbourhood of the origin.

    Accepts at once when the lowest homogeneous part has no real zero
    direction.  Otherwise ``det`` must keep one strict sign at ``samples``
    exact rational points of the circle of the given radius and along each
    zero direction of that part.
    """
    if not det:
        return False
    k = int(det.lowest_degree())
    if k == 0:
        return True
    low = det.homogeneous_part(k)
    dirs = zero_directions(low)
    if not dirs:
        return True
    pts = _circle_points(samples, radius)
    for dx, dy in dirs:
        norm = Fraction(math.hypot(dx, dy)).limit_denominator(10**6)
        for sgn in (1, -1):
            for rad in (radius, radius / 16):
                pts.append((sgn * rad * dx / norm, sgn * rad * dy / norm))
    values = [det.eval_exact(px, py) for px, py in pts]
    return all(v > 0 for v in values) or all(v < 0 for v in values)


def find_transversal(cb: CentralizerBasis, F: VectorField | None = None) -> VectorField | None:
    """A field in the span that is transversal to ``F`` near the origin, or ``None``."""
    F = cb.field if F is None else F
    candidates = list(cb.basis)
    for i, a in enumerate(cb.basis):
        for b in cb.basis[i + 1:]:
            candidates.extend([a + b, a - b, a + b * 2])
    for G in candidates:
        det = transversality_det(F, G)
        if det and transversal_near_origin(det):
            return G
    return None
