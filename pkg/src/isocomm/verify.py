"""Executable claims: each check reproduces one published statement and reports a metric."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import flow
from .catalog import (IZ_ONE_MINUS_Z2, CatalogEntry, alpha_beta, bracket_vanishes_identically,
                      build_catalog, catalog_by_id, kolmogorov)
from .centralizer import centralizer, find_transversal, in_span
from .field import from_holomorphic, is_cauchy_riemann, lie_bracket, orthogonal
from .newton_abel import (AbelSystem, NewtonSystem, abel_partner, abel_partner_degree, check_abel_conditions,
                          damped_family, gen_lienard_isochronous, generate_abel,
                          homogeneous_perturbation, newton_commutator_residual,
                          solve_q2_q3)
from .parser import parse_poly
from .poly2 import ONE, X, Y, ZERO, Poly2


@dataclass
class ClaimResult:
    claim: str
    citation: str
    passed: bool
    metric: str

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_json(self) -> dict:
        return {"claim": self.claim, "citation": self.citation, "status": self.status,
                "metric": self.metric}


Check = Callable[[dict[str, CatalogEntry], random.Random], tuple[bool, str]]


@dataclass(frozen=True)
class Claim:
    id: str
    citation: str
    check: Check


def _pairs_commute(cat, ids):
    bad = [i for i in ids if not lie_bracket(cat[i].system, cat[i].claimed_partner).is_zero()]
    return not bad, f"non-commuting: {bad}" if bad else f"{len(ids)} pairs commute"


def _example1(cat, rng):
    return _pairs_commute(cat, [f"example1-{c}" for c in "abcd"])


def _example2(cat, rng):
    ok, metric = _pairs_commute(cat, ["kukles"])
    if not ok:
        return ok, metric
    e = cat["kukles"]
    cb = centralizer(e.system, 4)
    ok = cb.dimension == 2 and in_span(cb, e.claimed_partner) and find_transversal(cb) is not None
    return ok, f"centralizer dim {cb.dimension} at d=4"


def _example3(cat, rng):
    ok = _pairs_commute(cat, ["kolmogorov-a1"])[0] and bracket_vanishes_identically(kolmogorov, 1)
    return ok, "bracket vanishes for all a" if ok else "nonzero bracket"


def _example4(cat, rng):
    ok = _pairs_commute(cat, ["alpha-beta-1-2"])[0] and bracket_vanishes_identically(alpha_beta, 2)
    return ok, "bracket vanishes for all alpha, beta" if ok else "nonzero bracket"


def _example5(cat, rng):
    return _pairs_commute(cat, ["hamiltonian-x-y+x2"])


def _cauchy_riemann(cat, rng):
    F = from_holomorphic(IZ_ONE_MINUS_Z2)
    ok = is_cauchy_riemann(F) and lie_bracket(F, orthogonal(F)).is_zero()
    return ok, "CR holds and [F, F_perp] = 0" if ok else "CR check failed"


def _holomorphic_periods(cat, rng):
    rep = flow.holomorphic_centers(IZ_ONE_MINUS_Z2)
    periods = sorted(r.period for r in rep.centers)
    expect = sorted([2 * math.pi, math.pi, math.pi])
    err = max(abs(a - b) for a, b in zip(periods, expect)) if len(periods) == 3 else math.inf
    dirs = {r.direction for r in rep.centers}
    ok = (err < 1e-6 and abs(rep.residue_sum) < 1e-12 and abs(rep.signed_period_sum) < 1e-9
          and dirs == {"cw", "ccw"})
    return ok, f"period err {err:.2e}, |sum 1/f'| {abs(rep.residue_sum):.2e}"


def _measured_periods(cat, rng):
    F = from_holomorphic(IZ_ONE_MINUS_Z2)
    e1 = abs(flow.period(F, (0.9, 0.0), (1.0, 0.0)) - math.pi)
    e0 = abs(flow.period(F, (0.1, 0.0), (0.0, 0.0)) - 2 * math.pi)
    return max(e0, e1) < 1e-6, f"max period error {max(e0, e1):.2e}"


def _separatrix(cat, rng):
    F = from_holomorphic(IZ_ONE_MINUS_Z2)
    tr = flow.integrate(F, (1 / math.sqrt(2), 0.0), 1.2)
    on = max(abs(2 * x * x - 2 * y * y - 1) for x, y in zip(tr.x, tr.y))
    dev = 0.0
    for t, x, y in zip(tr.t, tr.x, tr.y):
        d = math.sqrt(2 * math.cos(t))
        dev = max(dev, math.hypot(x - math.cos(t / 2) / d, y - math.sin(t / 2) / d))
    return on < 1e-7 and dev < 1e-6, f"hyperbola {on:.2e}, parametrization {dev:.2e}"


def _fig2(cat, rng):
    F = from_holomorphic(IZ_ONE_MINUS_Z2)
    G = orthogonal(F)
    sigma = flow.hitting_time(G, (0.5, 0.0), 0.8)
    cd = flow.commutation_defect(F, G, (0.5, 0.0), math.pi, sigma)
    e1 = math.hypot(cd.uv[0] - 0.8, cd.uv[1])
    e2 = math.hypot(cd.vu[0] + 0.8, cd.vu[1])
    return max(e1, e2) < 1e-5, f"defect {cd.defect:.6f}, landing error {max(e1, e2):.2e}"


def _homog_period(cat, rng):
    probe = flow.isochronicity_probe(cat["homog-m1"].system, (0, 0), [0.2, 0.4, 0.6, 0.8])
    err = max(abs(p - 2 * math.pi) for _, p in probe.rows)
    return err < 1e-6, f"max |T - 2pi| {err:.2e}"


def _homog_m2(cat, rng):
    probe = flow.isochronicity_probe(cat["homog-m2"].system, (0, 0), [0.1, 0.2, 0.3, 0.4, 0.5])
    err = max(abs(p - 2 * math.pi) for _, p in probe.rows)
    return err < 1e-6, f"max |T - 2pi| {err:.2e}"


def _homog_centralizer(cat, rng):
    dims = [centralizer(homogeneous_perturbation(m), d).dimension for m, d in ((1, 4), (2, 6))]
    none = find_transversal(centralizer(homogeneous_perturbation(1), 4)) is None
    return dims == [1, 1] and none, f"dimensions {dims}"


def _random_newton(rng: random.Random, n: int) -> NewtonSystem:
    def rpoly(lo, hi, zero_const):
        cs = [rng.randint(-3, 3) for _ in range(rng.randint(lo, hi) + 1)]
        if zero_const:
            cs[0] = 0
        return Poly2.from_univariate(cs)

    coeffs = [X + rpoly(0, 3, True) * X]
    coeffs.append(rpoly(0, 2, True))
    coeffs += [rpoly(0, 2, False) for _ in range(2, n + 1)]
    while not coeffs[n]:
        coeffs[n] = rpoly(0, 2, False)
    return NewtonSystem(tuple(coeffs))


def _newton_high(cat, rng):
    F = NewtonSystem((X, ZERO, ZERO, ZERO, X)).field
    dims = [centralizer(F).dimension]
    for n in (4, 5):
        G = _random_newton(rng, n).field
        dims.append(centralizer(G).dimension)
    return all(d == 1 for d in dims), f"dimensions {dims}"


def _newton_two(cat, rng):
    F = NewtonSystem((X, ZERO, X)).field
    dims = [centralizer(F, int(F.degree) + 2).dimension]
    G = _random_newton(rng, 2).field
    dims.append(centralizer(G).dimension)
    return all(d == 1 for d in dims), f"dimensions {dims}"


def _abel_conditions(cat, rng):
    kukles = AbelSystem(X + X**3, X, ZERO, ZERO)
    cubic = AbelSystem(X, X, X * 3, X)
    ok = check_abel_conditions(kukles)[0] and check_abel_conditions(cubic)[0]
    r = kukles.q0 + kukles.q1 * Y
    ok = ok and not newton_commutator_residual(kukles.rhs, r)
    return ok, "conditions hold" if ok else "condition residual nonzero"


def _abel_family(cat, rng):
    _, kuk = generate_abel(1, Poly2())
    _, cube = generate_abel(0, ONE)
    ok = kuk == cat["kukles"].system and cube.q == X * (ONE + Y) ** 3
    dims = []
    for _ in range(3):
        a = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
        h = Poly2.from_univariate([rng.randint(-2, 2) for _ in range(rng.randint(0, 2))])
        sys, F = generate_abel(a, h)
        P = abel_partner(sys)
        ok = ok and check_abel_conditions(sys)[0] and lie_bracket(F, P).is_zero()
        dims.append(centralizer(F, int(P.degree)).dimension)
    return ok and dims == [2, 2, 2], f"centralizer dimensions {dims}"


def _abel_isochronous(cat, rng):
    devs = []
    for name in ("abel-a0-h1", "abel-a0-hx"):
        probe = flow.isochronicity_probe(cat[name].system, (0, 0), [0.1, 0.2, 0.3, 0.4])
        devs.append(probe.max_deviation)
    return max(devs) < 1e-6, f"max deviation {max(devs):.2e}"


def _kukles_chart(cat, rng):
    pts = [(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)) for _ in range(100)]
    res = flow.kukles_pushforward_residual(Fraction(3, 2), X**3 - X * 2 + ONE, pts)
    return res < 1e-9, f"residual {res:.2e}"


def _first_integral(cat, rng):
    drifts = []
    for q0, q1, x0 in ((X + X**3, X, 0.2), (X, X, 0.3)):
        sys = AbelSystem(q0, q1, *solve_q2_q3(q0, q1))
        T = flow.period(sys.field, (x0, 0.0), (0.0, 0.0))
        drifts.append(flow.first_integral_drift(q0, q1, flow.integrate(sys.field, (x0, 0.0), T)))
    return max(drifts) < 1e-8, f"max drift {max(drifts):.2e}"


def _lienard(cat, rng):
    F = gen_lienard_isochronous(X).field
    ok = F.q == X + X**3 / 9 + X * Y
    probe = flow.isochronicity_probe(F, (0, 0), [0.1, 0.2, 0.3, 0.4])
    return ok and probe.max_deviation < 1e-6, f"max deviation {probe.max_deviation:.2e}"


def _damped(cat, rng):
    probe = flow.isochronicity_probe(damped_family(X), (0, 0), [0.1, 0.2, 0.3, 0.4, 0.5])
    return probe.strictly_increasing, "periods " + ", ".join(f"{p:.6f}" for _, p in probe.rows)


def _parser_examples(cat, rng):
    ok = (parse_poly("x + 3*x*y + x^3") == cat["kukles"].system.q
          and parse_poly("-y - 3*x^2*y + y^3") == cat["example1-a"].system.p)
    return ok, "catalog polynomials parse back" if ok else "parse mismatch"


def _homog_expansion(cat, rng):
    ok = (homogeneous_perturbation(1).q == X + X**3 * Y + X * Y**3
          and homogeneous_perturbation(2).q == X + X**5 * Y + X**3 * Y**3)
    return ok, "m = 1, 2 expansions match" if ok else "expansion mismatch"


def _homog_closure(cat, rng):
    tr = flow.integrate(cat["homog-m1"].system, (0.5, 0.0), 2 * math.pi)
    err = math.hypot(tr.x[-1] - 0.5, tr.y[-1])
    return err < 1e-6, f"endpoint distance {err:.2e}"


def _kukles_transversal(cat, rng):
    e = cat["kukles"]
    cb = centralizer(e.system, 4)
    T = find_transversal(cb)
    if T is None:
        return False, "no transversal found"
    # T must be c * partner + k * F for constants c != 0, k
    k = T.p.coeff(0, 1) / e.system.p.coeff(0, 1)
    rest = T - e.system * k
    c = rest.p.coeff(1, 0)
    ok = c != 0 and rest == e.claimed_partner * c
    return ok, f"transversal = {c} * partner + {k} * F"


def _abel_centralizer_dimension(cat, rng):
    sys, F = generate_abel(0, ONE)
    d = abel_partner_degree(sys)
    dim = centralizer(F, d).dimension
    return dim == 2, f"dimension {dim} at d = {d}"


def _kukles_y_coefficient(cat, rng):
    q = cat["kukles"].system.q
    return q.coeff_of_y(1) == X * 3, f"coefficient of y: {q.coeff_of_y(1)}"


CLAIMS: tuple[Claim, ...] = (
    Claim("symmetric-cubic-partners", "Example 1", _example1),
    Claim("kukles-partner", "Example 2", _example2),
    Claim("kukles-velocity-coefficient", "Example 2", _kukles_y_coefficient),
    Claim("kukles-transversal", "Example 2", _kukles_transversal),
    Claim("catalog-parses", "Examples 1 and 2", _parser_examples),
    Claim("kolmogorov-partner", "Example 3", _example3),
    Claim("alpha-beta-partner", "Example 4", _example4),
    Claim("area-preserving-partner", "Example 5", _example5),
    Claim("cauchy-riemann-commutation", "Cauchy-Riemann conditions", _cauchy_riemann),
    Claim("holomorphic-periods", "Theorem 1; f(z) = iz(1-z^2)", _holomorphic_periods),
    Claim("holomorphic-measured-periods", "f(z) = iz(1-z^2): periods pi and 2pi", _measured_periods),
    Claim("hyperbola-separatrix", "Separatrices 2x^2 - 2y^2 = 1", _separatrix),
    Claim("flow-commutation-defect", "Fig. 2: U_pi V_sigma(A) = B, V_sigma U_pi(A) = -B", _fig2),
    Claim("homogeneous-expansion", "System (5), m = 1 and m = 2", _homog_expansion),
    Claim("homogeneous-closure", "Theorem 3", _homog_closure),
    Claim("homogeneous-isochronous", "Theorem 3", _homog_period),
    Claim("homogeneous-m2-isochronous", "System (5), m = 2", _homog_m2),
    Claim("homogeneous-trivial-centralizer", "Theorem 4", _homog_centralizer),
    Claim("newton-high-degree", "Theorem 5", _newton_high),
    Claim("newton-quadratic", "Theorem 6", _newton_two),
    Claim("abel-conditions", "Theorem 7", _abel_conditions),
    Claim("abel-centralizer-dimension", "Theorem 7", _abel_centralizer_dimension),
    Claim("abel-family", "Theorem 8", _abel_family),
    Claim("abel-isochronous", "Theorem 9", _abel_isochronous),
    Claim("abel-kukles-chart", "Theorem 9", _kukles_chart),
    Claim("abel-first-integral", "Theorem 10", _first_integral),
    Claim("lienard-isochronous", "Sabatini Lienard class", _lienard),
    Claim("damped-not-isochronous", "y' = f(x)(1+y) is never isochronous", _damped),
)


def run_claims(entries: Sequence[CatalogEntry] | None = None, seed: int = 0,
               claims: Sequence[Claim] = CLAIMS) -> list[ClaimResult]:
    cat = catalog_by_id(build_catalog() if entries is None else entries)
    results = []
    for claim in claims:
        rng = random.Random(f"{seed}:{claim.id}")
        try:
            ok, metric = claim.check(cat, rng)
        except Exception as exc:  # a crashing check is a failed claim
            ok, metric = False, f"{type(exc).__name__}: {exc}"
        results.append(ClaimResult(claim.id, claim.citation, bool(ok), metric))
    return results
