"""Numerical flows of planar polynomial fields.

Integration is an embedded Dormand-Prince 5(4) pair with local
extrapolation and the standard fourth-order continuous extension, written
for two scalar states so the inner loop stays in plain floats.  Periods are
measured by accumulating the winding angle about a center until it reaches
``+-2 pi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .field import ComplexPoly, VectorField
from .newton_abel import generate_abel
from .poly2 import X, Poly2, Scalar, exact_div

TWO_PI = 2.0 * math.pi

FloatField = Callable[[float, float], tuple[float, float]]


class StepSizeUnderflow(ArithmeticError):
    pass


class NotClosed(RuntimeError):
    pass


class AnyOrbitNotClosed(RuntimeError):
    def __init__(self, amplitude: float, reason: str):
        super().__init__(f"orbit at amplitude {amplitude} did not close: {reason}")
        self.amplitude = amplitude


class FlowUndefined(RuntimeError):
    pass


class MultipleRoot(ArithmeticError):
    pass


class NotConverged(ArithmeticError):
    pass


class SingularChart(ValueError):
    pass


class ChartSingular(ArithmeticError):
    pass


class QuadratureFailure(ArithmeticError):
    pass


# -- compiling polynomials to float code ------------------------------------

def _horner_x(coeffs: dict[int, float]) -> str:
    deg = max(coeffs)
    expr = repr(coeffs.get(deg, 0.0))
    for i in range(deg - 1, -1, -1):
        c = coeffs.get(i, 0.0)
        expr = f"({expr})*x" if c == 0.0 else f"({expr})*x + {c!r}"
    return expr


def poly_source(p: Poly2) -> str:
    """Horner-form Python expression in ``x`` and ``y`` for ``p``."""
    if not p:
        return "0.0"
    rows: dict[int, dict[int, float]] = {}
    for (i, j), c in p.items():
        rows.setdefault(j, {})[i] = float(c)
    dy = max(rows)
    expr = _horner_x(rows[dy])
    for j in range(dy - 1, -1, -1):
        expr = f"({expr})*y + ({_horner_x(rows[j])})" if j in rows else f"({expr})*y"
    return expr


def compile_poly(p: Poly2) -> Callable[[float, float], float]:
    return eval(f"lambda x, y: {poly_source(p)}", {})


def compile_field(F: VectorField) -> FloatField:
    return eval(f"lambda x, y: ({poly_source(F.p)}, {poly_source(F.q)})", {})


# -- Dormand-Prince 5(4) ----------------------------------------------------

# stage nodes, kept for reference: the fields are autonomous so t never enters a stage
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# continuous extension: y(t0 + th h) = y0 + h sum_k K_k sum_j P[k][j] th^(j+1)
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)


@dataclass
class Step:
    """One accepted step with its dense-output interpolant."""

    t0: float
    x0: float
    y0: float
    t1: float
    x1: float
    y1: float
    kx: tuple[float, ...]
    ky: tuple[float, ...]

    def at(self, t: float) -> tuple[float, float]:
        h = self.t1 - self.t0
        if h == 0.0:
            return self.x0, self.y0
        th = (t - self.t0) / h
        bx = by = 0.0
        for k in range(7):
            P = _P[k]
            w = th * (P[0] + th * (P[1] + th * (P[2] + th * P[3])))
            bx += self.kx[k] * w
            by += self.ky[k] * w
        return self.x0 + h * bx, self.y0 + h * by


def _initial_step(f: FloatField, x: float, y: float, tol: float) -> float:
    fx, fy = f(x, y)
    d0 = max(abs(x), abs(y), 1e-5)
    d1 = max(abs(fx), abs(fy), 1e-5)
    return min(0.01 * d0 / d1, 0.1) * (tol / 1e-6) ** 0.2 + 1e-12


def dp_steps(f: FloatField, t0: float, x: float, y: float, t_end: float, tol: float,
             h0: float | None = None, max_step: float = math.inf) -> Iterator[Step]:
    """Yield accepted Dormand-Prince steps from ``t0`` towards ``t_end``.

    The local error estimate of every accepted step is at most
    ``tol * max(1, |state|)`` componentwise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    direction = 1.0 if t_end >= t0 else -1.0
    h = abs(h0) if h0 else _initial_step(f, x, y, tol)
    h = min(h, max_step)
    t = t0
    k1x, k1y = f(x, y)
    A, E = _A, _E
    while direction * (t_end - t) > 0:
        if h < 1e-15 * max(1.0, abs(t)):
            raise StepSizeUnderflow(f"step size {h:.3e} at t={t}")
        last = False
        if h >= abs(t_end - t):
            h = abs(t_end - t)
            last = True
        hs = direction * h
        kx = [k1x, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        ky = [k1y, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        for s in range(1, 7):
            a = A[s]
            sx = sy = 0.0
            for j in range(s):
                sx += a[j] * kx[j]
                sy += a[j] * ky[j]
            kx[s], ky[s] = f(x + hs * sx, y + hs * sy)
        # stage 7 is evaluated at the 5th-order solution (FSAL)
        a = A[6]
        nx = x + hs * (a[0] * kx[0] + a[2] * kx[2] + a[3] * kx[3] + a[4] * kx[4] + a[5] * kx[5])
        ny = y + hs * (a[0] * ky[0] + a[2] * ky[2] + a[3] * ky[3] + a[4] * ky[4] + a[5] * ky[5])
        ex = ey = 0.0
        for j in range(7):
            ex += E[j] * kx[j]
            ey += E[j] * ky[j]
        scale_x = tol * max(1.0, abs(x), abs(nx))
        scale_y = tol * max(1.0, abs(y), abs(ny))
        err = max(abs(hs * ex) / scale_x, abs(hs * ey) / scale_y)
        if not math.isfinite(err):
            h *= 0.2
            continue
        if err <= 1.0:
            t_new = t_end if last else t + hs
            yield Step(t, x, y, t_new, nx, ny, tuple(kx), tuple(ky))
            t, x, y = t_new, nx, ny
            k1x, k1y = kx[6], ky[6]
            fac = 10.0 if err == 0.0 else min(10.0, max(0.2, 0.9 * err ** -0.2))
            h = min(h * fac, max_step)
        else:
            h *= max(0.2, 0.9 * err ** -0.2)


# -- trajectories -------------------------------------------------------------

@dataclass
class Trajectory:
    t: list[float]
    x: list[float]
    y: list[float]
    tol: float
    reason: str  # "completed", "escaped", "near_singularity" or "event"
    steps: list[Step] = field(default_factory=list, repr=False)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t, self.x, self.y))

    @property
    def end(self) -> tuple[float, float]:
        return self.x[-1], self.y[-1]

    def at(self, t: float) -> tuple[float, float]:
        """Dense output at time ``t`` inside the integrated span."""
        lo, hi = min(self.t[0], self.t[-1]), max(self.t[0], self.t[-1])
        if not lo - 1e-12 <= t <= hi + 1e-12:
            raise ValueError(f"t={t} outside [{lo}, {hi}]")
        for st in self.steps:
            a, b = sorted((st.t0, st.t1))
            if a <= t <= b:
                return st.at(t)
        return self.end


def integrate(F: VectorField | FloatField, start: tuple[float, float], t_end: float,
              tol: float = 1e-12, escape_radius: float = 1e3, singular_eps: float = 1e-13,
              max_step: float = math.inf, t0: float = 0.0) -> Trajectory:
    f = compile_field(F) if isinstance(F, VectorField) else F
    x, y = float(start[0]), float(start[1])
    traj = Trajectory([t0], [x], [y], tol, "completed")
    fx, fy = f(x, y)
    if math.hypot(fx, fy) < singular_eps:
        traj.reason = "near_singularity"
        return traj
    for st in dp_steps(f, t0, x, y, t_end, tol, max_step=max_step):
        traj.steps.append(st)
        traj.t.append(st.t1)
        traj.x.append(st.x1)
        traj.y.append(st.y1)
        if math.hypot(st.x1, st.y1) > escape_radius:
            traj.reason = "escaped"
            break
        fx, fy = f(st.x1, st.y1)
        if math.hypot(fx, fy) < singular_eps:
            traj.reason = "near_singularity"
            break
    return traj


def flow_map(F: VectorField | FloatField, point: tuple[float, float], t: float,
             tol: float = 1e-12, escape_radius: float = 1e3) -> tuple[float, float]:
    """Time-``t`` map of the flow; raises :class:`FlowUndefined` if the orbit stops early."""
    if t == 0:
        return float(point[0]), float(point[1])
    traj = integrate(F, point, t, tol=tol, escape_radius=escape_radius)
    if traj.reason != "completed":
        raise FlowUndefined(f"flow from {point} for time {t}: {traj.reason}")
    return traj.end


def _angle(ax: float, ay: float, bx: float, by: float) -> float:
    """Signed angle from vector a to vector b, in (-pi, pi]."""
    return math.atan2(ax * by - ay * bx, ax * bx + ay * by)


def _solve_monotone(g: Callable[[float], float], a: float, b: float, ga: float, gb: float,
                    gtol: float, max_iter: int = 100) -> float:
    """Root of ``g`` on ``[a, b]`` with a sign change: secant steps kept inside the bracket (Illinois)."""
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    side = 0
    for _ in range(max_iter):
        c = b - gb * (b - a) / (gb - ga)
        gc = g(c)
        if abs(gc) < gtol or abs(b - a) < 1e-15 * max(1.0, abs(c)):
            return c
        if (gc > 0) == (gb > 0):
            b, gb = c, gc
            if side == -1:
                ga *= 0.5
            side = -1
        else:
            a, ga = c, gc
            if side == 1:
                gb *= 0.5
            side = 1
    return c


def period(F: VectorField | FloatField, start: tuple[float, float], center: tuple[float, float],
           tol: float = 1e-12, t_max: float = 1000.0, escape_radius: float = 1e3,
           singular_eps: float = 1e-13, angle_tol: float = 1e-12) -> float:
    """Time for the orbit from ``start`` to wind once around ``center``.

    Raises :class:`NotClosed` if the orbit escapes, stalls or has not wound
    once by ``t_max``.
    """
    cx, cy = float(center[0]), float(center[1])
    sx, sy = float(start[0]) - cx, float(start[1]) - cy
    if sx == 0.0 and sy == 0.0:
        raise ValueError("start coincides with the center")
    f = compile_field(F) if isinstance(F, VectorField) else F
    theta = 0.0
    for st in dp_steps(f, 0.0, float(start[0]), float(start[1]), t_max, tol):
        # split the step where the dense curve turns fast around the center
        ts = [st.t0, 0.5 * (st.t0 + st.t1), st.t1]
        pts = [(st.x0, st.y0), st.at(ts[1]), (st.x1, st.y1)]
        turns = [_angle(pts[i][0] - cx, pts[i][1] - cy, pts[i + 1][0] - cx, pts[i + 1][1] - cy)
                 for i in range(2)]
        if max(abs(d) for d in turns) > math.pi / 4:
            n = 32
            ts = [st.t0 + (st.t1 - st.t0) * k / n for k in range(n + 1)]
            pts = [st.at(t) for t in ts]
            pts[0], pts[-1] = (st.x0, st.y0), (st.x1, st.y1)
        for i in range(len(ts) - 1):
            (ax, ay), (bx, by) = pts[i], pts[i + 1]
            ax, ay, bx, by = ax - cx, ay - cy, bx - cx, by - cy
            d = _angle(ax, ay, bx, by)
            if abs(theta + d) >= TWO_PI:
                target = math.copysign(TWO_PI, theta + d)
                base = theta

                def g(t, ax=ax, ay=ay):
                    px, py = st.at(t)
                    return (base + _angle(ax, ay, px - cx, py - cy) - target) * math.copysign(1.0, target)

                return _solve_monotone(g, ts[i], ts[i + 1], g(ts[i]), g(ts[i + 1]), angle_tol)
            theta += d
        if math.hypot(st.x1, st.y1) > escape_radius:
            raise NotClosed(f"orbit from {start} escaped")
        fx, fy = f(st.x1, st.y1)
        if math.hypot(fx, fy) < singular_eps:
            raise NotClosed(f"orbit from {start} stalled near a singular point")
    raise NotClosed(f"orbit from {start} did not wind around {center} by t={t_max}")


def hitting_time(F: VectorField | FloatField, start: tuple[float, float], x_target: float,
                 tol: float = 1e-12, t_max: float = 100.0) -> float:
    """First time the orbit from ``start`` reaches the vertical line ``x = x_target``."""
    f = compile_field(F) if isinstance(F, VectorField) else F
    s0 = math.copysign(1.0, float(start[0]) - x_target)
    for st in dp_steps(f, 0.0, float(start[0]), float(start[1]), t_max, tol):
        if (st.x1 - x_target) * s0 <= 0:
            def g(t):
                return (st.at(t)[0] - x_target) * -s0
            return _solve_monotone(g, st.t0, st.t1, g(st.t0), g(st.t1), 1e-14)
    raise NotClosed(f"orbit from {start} did not reach x={x_target} by t={t_max}")


# -- isochronicity probes -------------------------------------------------

@dataclass
class PeriodProbe:
    center: tuple[float, float]
    rows: list[tuple[float, float]]

    @property
    def max_deviation(self) -> float:
        ps = [p for _, p in self.rows]
        return max(ps) - min(ps) if ps else 0.0

    @property
    def strictly_increasing(self) -> bool:
        ps = [p for _, p in self.rows]
        return all(b > a for a, b in zip(ps, ps[1:]))


def isochronicity_probe(F: VectorField, center: tuple[float, float], amplitudes: Sequence[float],
                        tol: float = 1e-12, t_max: float = 1000.0) -> PeriodProbe:
    amps = [float(a) for a in amplitudes]
    if any(a <= 0 for a in amps) or any(b <= a for a, b in zip(amps, amps[1:])):
        raise ValueError("amplitudes must be positive and strictly increasing")
    f = compile_field(F)
    rows = []
    for amp in amps:
        try:
            T = period(f, (center[0] + amp, center[1]), center, tol=tol, t_max=t_max)
        except NotClosed as exc:
            raise AnyOrbitNotClosed(amp, str(exc)) from exc
        rows.append((amp, T))
    return PeriodProbe((float(center[0]), float(center[1])), rows)


# -- holomorphic systems -------------------------------------------------------

@dataclass
class RootInfo:
    root: complex
    fprime: complex
    is_center: bool
    period: float | None
    direction: str | None  # "ccw" or "cw" for centers


@dataclass
class HolomorphicCenterReport:
    roots: list[RootInfo]
    residue_sum: complex
    signed_period_sum: float

    @property
    def centers(self) -> list[RootInfo]:
        return [r for r in self.roots if r.is_center]


def _horner(cs: Sequence[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(cs):
        acc = acc * z + c
    return acc


def durand_kerner(coeffs: Sequence[complex], max_iter: int = 500, tol: float = 1e-14) -> list[complex]:
    """All roots of ``sum coeffs[k] z**k`` by simultaneous Weierstrass iteration."""
    n = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    radius = 1.0 + max(abs(c) for c in monic[:-1])
    z = [radius * cmath.exp(1j * (TWO_PI * k / n + 0.4)) for k in range(n)]
    for _ in range(max_iter):
        shift = 0.0
        for i in range(n):
            denom = 1 + 0j
            for j in range(n):
                if j != i:
                    denom *= z[i] - z[j]
            if denom == 0:
                denom = 1e-300
            dz = _horner(monic, z[i]) / denom
            z[i] -= dz
            shift = max(shift, abs(dz))
        if shift <= tol * max(1.0, max(abs(w) for w in z)):
            return z
    raise NotConverged(f"Durand-Kerner did not converge in {max_iter} iterations")


def _newton_polish(cs: Sequence[complex], ds: Sequence[complex], z: complex, steps: int = 8) -> complex:
    for _ in range(steps):
        d = _horner(ds, z)
        if d == 0:
            break
        dz = _horner(cs, z) / d
        z -= dz
        if abs(dz) <= 1e-17 * max(1.0, abs(z)):
            break
    return z


def holomorphic_centers(f: ComplexPoly, tol: float = 1e-8) -> HolomorphicCenterReport:
    """Classify the zeros of ``f`` as singular points of ``z' = f(z)``.

    A simple zero is a center iff ``f'`` there is nonzero and purely
    imaginary; the cycles then have period ``2 pi / |Im f'|``, counter-clockwise
    when ``Im f' > 0``.
    """
    if f.degree < 2:
        raise ValueError("degree >= 2 required")
    cs = f.as_complex()
    ds = f.derivative().as_complex()
    roots = [_newton_polish(cs, ds, z) for z in durand_kerner(cs)]
    scale = max(abs(c) for c in cs)
    infos = []
    residue = 0j
    signed = 0.0
    for z in sorted(roots, key=lambda w: (round(w.real, 9), round(w.imag, 9))):
        fp = _horner(ds, z)
        if abs(fp) <= tol:
            raise MultipleRoot(f"f'({z}) = {fp}")
        resid = abs(_horner(cs, z))
        if resid > 1e-13 * scale * max(1.0, abs(z)) ** f.degree:
            raise NotConverged(f"residual {resid:.2e} at root {z}")
        residue += 1 / fp
        center = abs(fp.real) <= tol and abs(fp.imag) >= tol
        if center:
            signed += TWO_PI / fp.imag
            infos.append(RootInfo(z, fp, True, TWO_PI / abs(fp.imag), "ccw" if fp.imag > 0 else "cw"))
        else:
            infos.append(RootInfo(z, fp, False, None, None))
    return HolomorphicCenterReport(infos, residue, signed)


# -- commutation of flows ------------------------------------------------------

@dataclass
class CommutationDefect:
    uv: tuple[float, float]
    vu: tuple[float, float]
    defect: float


def commutation_defect(F: VectorField, G: VectorField, A: tuple[float, float], tau: float,
                       sigma: float, tol: float = 1e-12) -> CommutationDefect:
    """Compare ``U_tau(V_sigma(A))`` with ``V_sigma(U_tau(A))`` for the flows U of F and V of G."""
    f, g = compile_field(F), compile_field(G)
    uv = flow_map(f, flow_map(g, A, sigma, tol), tau, tol)
    vu = flow_map(g, flow_map(f, A, tau, tol), sigma, tol)
    return CommutationDefect(uv, vu, math.hypot(uv[0] - vu[0], uv[1] - vu[1]))


# -- change of variables onto the Kukles system -------------------------------

def kukles_pushforward_residual(a: Scalar, h: Poly2, pts: Sequence[tuple[float, float]]) -> float:
    """Max distance between the pushed-forward Abel field and the rescaled Kukles field.

    In ``X = x``, ``Y = y / (1 + h(x) y)`` the generated Abel field should
    equal ``(-Y, X + 3 a X Y + a^2 X^3) / (1 - h(X) Y)``.
    """
    _, F = generate_abel(a, h)
    fa = float(Fraction(a))
    f = compile_field(F)
    hf = compile_poly(h)
    dhf = compile_poly(h.diff("x"))
    worst = 0.0
    for x, y in pts:
        w = 1.0 + hf(x, 0.0) * y
        if abs(w) <= 0.1:
            raise SingularChart(f"|1 + h(x) y| <= 0.1 at {(x, y)}")
        xd, yd = f(x, y)
        Xd = xd
        Yd = (yd - dhf(x, 0.0) * xd * y * y) / (w * w)
        X_, Y_ = x, y / w
        lam = 1.0 - hf(X_, 0.0) * Y_
        kx, ky = -Y_ / lam, (X_ + 3 * fa * X_ * Y_ + fa * fa * X_**3) / lam
        worst = max(worst, math.hypot(Xd - kx, Yd - ky))
    return worst


# -- first integral of Abel systems with polynomial commuting partner ------------

def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-13,
                     max_depth: int = 50) -> float:
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise QuadratureFailure(f"no convergence on [{a}, {b}]")
        return (rec(a, m, fa, flm, fm, left, tol / 2, depth + 1)
                + rec(m, b, fm, frm, fb, right, tol / 2, depth + 1))

    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 0)


def abel_first_integral(q0: Poly2, q1: Poly2, quad_tol: float = 1e-13):
    """Return ``H(x, y) = X^2 + Y^2`` with ``X = x e^I``, ``Y = x y e^I / (q0 + q1 y)``.

    ``I(x)`` is the integral from 0 of ``(u - q0(u)) / (u q0(u))``; both that
    integrand and ``x / (q0 + q1 y)`` are rewritten with the factor ``x``
    cancelled so nothing is singular at ``x = 0``.
    """
    g = exact_div(X - q0, X**2)   # (u - q0) / u^2
    q0u = exact_div(q0, X)        # q0 / u
    q1u = exact_div(q1, X)
    if g is None or q0u is None or q1u is None:
        raise ValueError("need q0 = x + O(x^2) and q1 = O(x)")
    gf, q0f, q1f = compile_poly(g), compile_poly(q0u), compile_poly(q1u)

    def integrand(u: float) -> float:
        return gf(u, 0.0) / q0f(u, 0.0)

    def H(x: float, y: float) -> float:
        I = adaptive_simpson(integrand, 0.0, x, quad_tol)
        e = math.exp(I)
        den = q0f(x, 0.0) + q1f(x, 0.0) * y
        if abs(den) < 1e-12:
            raise ChartSingular(f"q0 + q1 y vanishes near {(x, y)}")
        X_ = x * e
        Y_ = y * e / den
        return X_ * X_ + Y_ * Y_

    return H


def first_integral_drift(q0: Poly2, q1: Poly2, orbit: Trajectory) -> float:
    """Max change of ``X^2 + Y^2`` along ``orbit`` relative to its starting value."""
    H = abel_first_integral(q0, q1)
    h0 = H(orbit.x[0], orbit.y[0])
    return max(abs(H(x, y) - h0) for x, y in zip(orbit.x, orbit.y))
