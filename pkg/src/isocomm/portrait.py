"""Phase portraits: seeded orbits as CSV and a standalone SVG drawing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .field import VectorField
from .flow import compile_field, compile_poly, integrate


class GridSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    n_orbits: int

    @classmethod
    def parse(cls, spec: str) -> "Grid":
        parts = spec.split(":")
        if len(parts) != 5:
            raise GridSpecError(f"grid spec {spec!r} must be xmin:xmax:ymin:ymax:n_orbits")
        try:
            xmin, xmax, ymin, ymax = (float(s) for s in parts[:4])
            n = int(parts[4])
        except ValueError as exc:
            raise GridSpecError(f"grid spec {spec!r}: {exc}") from None
        if not (xmin < xmax and ymin < ymax) or n < 0:
            raise GridSpecError(f"grid spec {spec!r} needs xmin < xmax, ymin < ymax, n_orbits >= 0")
        return cls(xmin, xmax, ymin, ymax, n)

    def seeds(self) -> list[tuple[float, float]]:
        """``n_orbits`` points of a ``k x k`` lattice, ``k = ceil(sqrt(n))``, cell-centred."""
        if self.n_orbits == 0:
            return []
        k = math.isqrt(self.n_orbits - 1) + 1
        dx = (self.xmax - self.xmin) / k
        dy = (self.ymax - self.ymin) / k
        pts = [(self.xmin + (i + 0.5) * dx, self.ymin + (j + 0.5) * dy)
               for j in range(k) for i in range(k)]
        return pts[:self.n_orbits]


Orbit = list[tuple[float, float, float]]


def _dense(traj, per_step: int) -> Orbit:
    out = [(traj.t[0], traj.x[0], traj.y[0])]
    for st in traj.steps:
        for k in range(1, per_step):
            t = st.t0 + (st.t1 - st.t0) * k / per_step
            x, y = st.at(t)
            out.append((t, x, y))
        out.append((st.t1, st.x1, st.y1))
    return out


def compute_orbits(F: VectorField, grid: Grid, t_max: float = 10.0, tol: float = 1e-9,
                   per_step: int = 4) -> list[Orbit]:
    """Integrate each seed backward and forward for ``t_max``; rows run in increasing time."""
    f = compile_field(F)
    radius = 4 * max(abs(grid.xmin), abs(grid.xmax), abs(grid.ymin), abs(grid.ymax), 1.0)
    orbits = []
    for seed in grid.seeds():
        back = integrate(f, seed, -t_max, tol=tol, escape_radius=radius)
        fwd = integrate(f, seed, t_max, tol=tol, escape_radius=radius)
        orbits.append(_dense(back, per_step)[::-1] + _dense(fwd, per_step)[1:])
    return orbits


def orbits_csv(orbits: Sequence[Orbit]) -> str:
    blocks = ["\n".join(f"{t:.17g},{x:.17g},{y:.17g}" for t, x, y in orb) for orb in orbits]
    body = "\n\n".join(blocks)
    return "t,x,y\n" + (body + "\n" if body else "")


def singular_points(F: VectorField, grid: Grid, n: int = 40, tol: float = 1e-10) -> list[tuple[float, float]]:
    """Zeros of ``F`` inside the grid box: local minima of ``|F|`` on an ``n x n`` mesh,
    refined by Newton's method."""
    f = compile_field(F)
    fpx, fpy = compile_poly(F.p.diff("x")), compile_poly(F.p.diff("y"))
    fqx, fqy = compile_poly(F.q.diff("x")), compile_poly(F.q.diff("y"))
    xs = [grid.xmin + (grid.xmax - grid.xmin) * i / n for i in range(n + 1)]
    ys = [grid.ymin + (grid.ymax - grid.ymin) * j / n for j in range(n + 1)]
    mag = [[math.hypot(*f(x, y)) for x in xs] for y in ys]
    found: list[tuple[float, float]] = []
    for j in range(n + 1):
        for i in range(n + 1):
            m = mag[j][i]
            nbrs = [mag[jj][ii] for jj in range(max(j - 1, 0), min(j + 2, n + 1))
                    for ii in range(max(i - 1, 0), min(i + 2, n + 1)) if (ii, jj) != (i, j)]
            if any(v < m for v in nbrs):
                continue
            x, y = xs[i], ys[j]
            for _ in range(50):
                u, v = f(x, y)
                a, b, c, d = fpx(x, y), fpy(x, y), fqx(x, y), fqy(x, y)
                det = a * d - b * c
                if det == 0:
                    break
                dx, dy = (d * u - b * v) / det, (a * v - c * u) / det
                x, y = x - dx, y - dy
                if math.hypot(dx, dy) < 1e-15 * (1 + math.hypot(x, y)):
                    break
            if not (math.isfinite(x) and math.isfinite(y)) or math.hypot(*f(x, y)) > tol:
                continue
            if not (grid.xmin <= x <= grid.xmax and grid.ymin <= y <= grid.ymax):
                continue
            if all(math.hypot(x - px, y - py) > 1e-6 for px, py in found):
                found.append((x, y))
    return sorted(found)


def orbits_svg(orbits: Sequence[Orbit], grid: Grid, singular: Sequence[tuple[float, float]] = (),
               size: int = 600) -> str:
    w, h = grid.xmax - grid.xmin, grid.ymax - grid.ymin
    scale = size / max(w, h)
    W, H = w * scale, h * scale

    def px(x: float, y: float) -> str:
        return f"{(x - grid.xmin) * scale:.3f},{(grid.ymax - y) * scale:.3f}"

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" '
             f'viewBox="0 0 {W:.3f} {H:.3f}">',
             f'<rect x="0" y="0" width="{W:.3f}" height="{H:.3f}" fill="white" stroke="black"/>']
    if grid.xmin < 0 < grid.xmax:
        lines.append(f'<line x1="{-grid.xmin * scale:.3f}" y1="0" x2="{-grid.xmin * scale:.3f}" '
                     f'y2="{H:.3f}" stroke="#ccc" stroke-width="0.5"/>')
    if grid.ymin < 0 < grid.ymax:
        lines.append(f'<line x1="0" y1="{grid.ymax * scale:.3f}" x2="{W:.3f}" '
                     f'y2="{grid.ymax * scale:.3f}" stroke="#ccc" stroke-width="0.5"/>')
    lim = max(w, h) * 2
    for orb in orbits:
        pts = [px(x, y) for _, x, y in orb
               if abs(x - grid.xmin) < lim and abs(y - grid.ymin) < lim]
        if len(pts) > 1:
            lines.append(f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1" '
                         f'points="{" ".join(pts)}"/>')
    for x, y in singular:
        cx, cy = px(x, y).split(",")
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="3.5" fill="#c0392b"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
