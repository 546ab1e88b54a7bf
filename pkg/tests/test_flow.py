import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy

from conftest import sx, sy
from isocomm import flow
from isocomm.field import ComplexPoly, VectorField, from_holomorphic, hamiltonian_from_area_preserving, orthogonal
from isocomm.newton_abel import damped_family, gen_lienard_isochronous, generate_abel, homogeneous_perturbation
from isocomm.poly2 import ONE, X, Y, ZERO, Poly2

ROT = VectorField(-Y, X)
KUKLES = VectorField(-Y, X + X * Y * 3 + X**3)
KUKLES_PARTNER = VectorField(X + X * Y + X**3, Y - X**2 + Y**2 - X**4)
IZ = ComplexPoly(((0, 0), (0, 1), (0, 0), (0, -1)))
TWO_PI = 2 * math.pi


def test_compiled_polynomial_matches_eval():
    p = X**3 * Y - Y**2 / 3 + 7
    f = flow.compile_poly(p)
    assert math.isclose(f(0.3, -1.2), p.eval(0.3, -1.2), rel_tol=1e-14)
    assert flow.compile_poly(ZERO)(1.0, 2.0) == 0.0


def test_oscillator_closure():
    tr = flow.integrate(ROT, (1.0, 0.0), TWO_PI)
    assert tr.reason == "completed"
    assert math.hypot(tr.x[-1] - 1.0, tr.y[-1]) < 1e-9
    assert tr.end == (tr.x[-1], tr.y[-1])


def test_homogeneous_perturbation_closure():
    tr = flow.integrate(homogeneous_perturbation(1), (0.5, 0.0), TWO_PI)
    assert math.hypot(tr.x[-1] - 0.5, tr.y[-1]) < 1e-6


def test_dense_output_accuracy():
    tr = flow.integrate(ROT, (1.0, 0.0), 3.0)
    for t in (0.1, 0.77, 1.5, 2.9):
        x, y = tr.at(t)
        assert math.hypot(x - math.cos(t), y - math.sin(t)) < 1e-9


def test_backward_integration():
    tr = flow.integrate(ROT, (1.0, 0.0), -1.0)
    assert math.hypot(tr.x[-1] - math.cos(1.0), tr.y[-1] + math.sin(1.0)) < 1e-10


def test_escape_and_singularity_reasons():
    blowup = VectorField(X**2, ZERO)
    assert flow.integrate(blowup, (1.0, 0.0), 2.0).reason == "escaped"
    assert flow.integrate(ROT, (0.0, 0.0), 1.0).reason == "near_singularity"


def test_step_size_underflow():
    # x' = x^3 blows up at t = 1/2; with a huge escape radius the step size collapses
    with pytest.raises(flow.StepSizeUnderflow):
        list(flow.dp_steps(lambda x, y: (x**3 if abs(x) < 1e150 else math.inf, 0.0),
                           0.0, 1.0, 0.0, 1.0, 1e-12))


def test_integrator_order():
    # fixed steps (tolerance loose enough to accept them all); halving the step
    # must shrink the closure error by at least 8
    f = flow.compile_field(ROT)

    def closure_error(n):
        h = TWO_PI / n
        steps = list(flow.dp_steps(f, 0.0, 1.0, 0.0, TWO_PI, tol=1.0, h0=h, max_step=h))
        st = steps[-1]
        return math.hypot(st.x1 - 1.0, st.y1)

    e1, e2 = closure_error(16), closure_error(32)
    assert e2 * 8 <= e1


def test_period_examples():
    assert abs(flow.period(ROT, (0.7, 0.0), (0.0, 0.0)) - TWO_PI) < 1e-9
    H = from_holomorphic(IZ)
    assert abs(flow.period(H, (0.9, 0.0), (1.0, 0.0)) - math.pi) < 1e-6
    assert abs(flow.period(H, (0.1, 0.0), (0.0, 0.0)) - TWO_PI) < 1e-6


@pytest.mark.parametrize("c", [2, Fraction(1, 3)])
def test_period_scales_with_field(c):
    T = flow.period(ROT * c, (0.5, 0.0), (0.0, 0.0))
    assert math.isclose(T, TWO_PI / float(c), rel_tol=1e-8)


def test_period_not_closed():
    with pytest.raises(flow.NotClosed):
        flow.period(VectorField(X, Y), (0.5, 0.0), (0.0, 0.0), t_max=20)
    with pytest.raises(flow.NotClosed):
        flow.period(ROT, (0.5, 0.0), (0.0, 0.0), t_max=3.0)
    with pytest.raises(ValueError):
        flow.period(ROT, (0.0, 0.0), (0.0, 0.0))


def test_probe_kukles():
    probe = flow.isochronicity_probe(KUKLES, (0, 0), [0.1, 0.2, 0.3, 0.4, 0.5])
    assert all(abs(p - TWO_PI) < 1e-6 for _, p in probe.rows)
    assert probe.max_deviation < 1e-6


def test_probe_damped_family_increasing():
    probe = flow.isochronicity_probe(damped_family(X), (0, 0), [0.1, 0.2, 0.3, 0.4, 0.5])
    assert probe.strictly_increasing
    assert probe.max_deviation > 1e-3


def test_probe_generated_abel():
    _, F = generate_abel(0, ONE)
    assert flow.isochronicity_probe(F, (0, 0), [0.1, 0.2, 0.3, 0.4]).max_deviation < 1e-6


def test_probe_errors():
    with pytest.raises(flow.AnyOrbitNotClosed) as err:
        flow.isochronicity_probe(VectorField(-Y, X + Y**2), (0, 0), [0.1, 2.0], t_max=30)
    assert err.value.amplitude == 2.0
    with pytest.raises(ValueError):
        flow.isochronicity_probe(ROT, (0, 0), [0.2, 0.1])


@pytest.mark.parametrize("name, F", [
    ("abel a=0 h=x", generate_abel(0, X)[1]),
    ("abel a=1/2 h=1-x", generate_abel(Fraction(1, 2), ONE - X)[1]),
    ("lienard q1=x", gen_lienard_isochronous(X).field),
    ("lienard q1=x^3-x", gen_lienard_isochronous(X**3 - X).field),
    ("hamiltonian x, y+x^2", hamiltonian_from_area_preserving(X, Y + X**2)[0]),
    ("hamiltonian x+y^3, y+(x+y^3)^2", hamiltonian_from_area_preserving(X + Y**3, Y + (X + Y**3) ** 2)[0]),
])
def test_generated_families_are_isochronous(name, F):
    probe = flow.isochronicity_probe(F, (0, 0), [0.1, 0.2, 0.3, 0.4])
    assert probe.max_deviation < 1e-6, name


def test_holomorphic_report():
    rep = flow.holomorphic_centers(IZ)
    roots = sorted(r.root.real for r in rep.roots)
    assert all(abs(a - b) < 1e-12 for a, b in zip(roots, [-1, 0, 1]))
    by_root = {round(r.root.real): r for r in rep.roots}
    assert cmath.isclose(by_root[0].fprime, 1j)
    assert cmath.isclose(by_root[1].fprime, -2j) and cmath.isclose(by_root[-1].fprime, -2j)
    assert sorted(r.period for r in rep.centers) == pytest.approx([math.pi, math.pi, TWO_PI], abs=1e-12)
    assert abs(rep.residue_sum) < 1e-12
    assert abs(rep.signed_period_sum) < 1e-9
    assert {r.direction for r in rep.centers} == {"cw", "ccw"}


def test_holomorphic_degree_one_rejected():
    with pytest.raises(ValueError):
        flow.holomorphic_centers(ComplexPoly(((0, 0), (0, 1))))


def test_holomorphic_multiple_root():
    with pytest.raises(flow.MultipleRoot):
        flow.holomorphic_centers(ComplexPoly(((0, 0), (0, 0), (1, 0))))


def test_residue_sum_random_degree_five():
    rng = random.Random(9)
    for _ in range(10):
        cs = [(Fraction(rng.randint(-9, 9), 4), Fraction(rng.randint(-9, 9), 4)) for _ in range(5)] + [(1, 0)]
        rep = flow.holomorphic_centers(ComplexPoly(tuple(cs)))
        assert len(rep.roots) == 5
        assert abs(rep.residue_sum) < 1e-10


def test_measured_periods_match_formula_for_cr_fields():
    # z' = i (z - 1)(z + 1)(z - 2i) ... centers wherever f' is imaginary
    for f in (IZ, ComplexPoly(((0, 0), (0, 2), (0, 0), (0, 0), (0, -2)))):
        F = from_holomorphic(f)
        rep = flow.holomorphic_centers(f)
        assert all(c for c in rep.centers)
        for c in rep.centers:
            z = c.root
            r = 0.05
            T = flow.period(F, (z.real + r, z.imag), (z.real, z.imag))
            assert math.isclose(T, c.period, rel_tol=1e-6)
        assert abs(rep.signed_period_sum) < 1e-9


def test_commutation_defect_examples():
    assert flow.commutation_defect(ROT, ROT, (0.3, 0.1), 1.3, 0.7).defect < 1e-9
    assert flow.commutation_defect(KUKLES, KUKLES_PARTNER, (0.2, 0.0), 1.0, 0.1).defect < 1e-6
    H = from_holomorphic(IZ)
    G = orthogonal(H)
    sigma = flow.hitting_time(G, (0.5, 0.0), 0.8)
    cd = flow.commutation_defect(H, G, (0.5, 0.0), math.pi, sigma)
    assert math.hypot(cd.uv[0] - 0.8, cd.uv[1]) < 1e-5
    assert math.hypot(cd.vu[0] + 0.8, cd.vu[1]) < 1e-5
    assert cd.defect == pytest.approx(1.6, abs=1e-5)


def test_separatrix_hyperbola():
    H = from_holomorphic(IZ)
    tr = flow.integrate(H, (1 / math.sqrt(2), 0.0), 1.2)
    for t, x, y in tr.samples:
        assert abs(2 * x * x - 2 * y * y - 1) < 1e-7
        d = math.sqrt(2 * math.cos(t))
        assert math.hypot(x - math.cos(t / 2) / d, y - math.sin(t / 2) / d) < 1e-6


def test_pushforward_examples():
    assert flow.kukles_pushforward_residual(0, ZERO, [(0.1, 0.2), (-0.3, 0.4)]) == 0.0
    rng = random.Random(1)
    disk = []
    while len(disk) < 100:
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        if math.hypot(*p) <= 1:
            disk.append(p)
    assert flow.kukles_pushforward_residual(1, ZERO, disk) < 1e-12
    for _ in range(5):
        a = Fraction(rng.uniform(-2, 2)).limit_denominator(100)
        h = Poly2.from_univariate([Fraction(rng.randint(-3, 3), 2) for _ in range(rng.randint(1, 4))])
        pts = []
        while len(pts) < 100:
            p = (rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
            if math.hypot(*p) <= 0.3 and abs(1 + h.eval(p[0], 0.0) * p[1]) > 0.1:
                pts.append(p)
        assert flow.kukles_pushforward_residual(a, h, pts) < 1e-9
    with pytest.raises(flow.SingularChart):
        flow.kukles_pushforward_residual(0, ONE, [(0.0, -1.0)])


def test_adaptive_simpson():
    assert flow.adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-12)
    assert flow.adaptive_simpson(math.exp, 1, 1) == 0.0
    with pytest.raises(flow.QuadratureFailure):
        flow.adaptive_simpson(lambda u: 1 / u if u else 0.0, 0.0, 1.0, tol=1e-14, max_depth=10)


@pytest.mark.parametrize("q0, q1, x0, bound", [
    (X, X, 0.3, 1e-9),
    (X + X**3, X, 0.2, 1e-8),
    (X, ZERO, 0.5, 1e-10),
])
def test_first_integral_drift(q0, q1, x0, bound):
    from isocomm.newton_abel import AbelSystem, solve_q2_q3
    F = AbelSystem(q0, q1, *solve_q2_q3(q0, q1)).field
    T = flow.period(F, (x0, 0.0), (0.0, 0.0))
    orbit = flow.integrate(F, (x0, 0.0), T)
    assert flow.first_integral_drift(q0, q1, orbit) < bound


def test_first_integral_hand_identity():
    # for y' = x(1+y)^3, x' = -y: d/dt (x^2 + (y/(1+y))^2) = 0 exactly
    x, y = sx, sy
    xdot, ydot = -y, x * (1 + y) ** 3
    H = x**2 + (y / (1 + y)) ** 2
    assert sympy.simplify(sympy.diff(H, x) * xdot + sympy.diff(H, y) * ydot) == 0


def test_first_integral_chart_singular():
    H = flow.abel_first_integral(X, X)
    with pytest.raises(flow.ChartSingular):
        H(0.3, -1.0)


def test_flow_map_and_hitting_time():
    x, y = flow.flow_map(ROT, (1.0, 0.0), math.pi / 2)
    assert math.hypot(x, y - 1.0) < 1e-10
    t = flow.hitting_time(ROT, (1.0, 0.0), 0.0)
    assert t == pytest.approx(math.pi / 2, abs=1e-10)
