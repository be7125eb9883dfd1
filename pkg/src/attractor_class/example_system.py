"""The explicit polynomial flow ``x' = -((1+x^2) y + x^3)^5, y' = y^2 (y^2 + x^3)``.

Its origin attracts every orbit, is not positively stable, and is an
elliptic saddle.  This module evaluates the field, labels the six sign
regions cut out by its isoclines, computes the crossing map with the line
``y = -2x`` and runs numerical checks of each of those properties.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from ._parallel import parallel_map
from .dynamics import (
    BallEnter,
    BallExit,
    DirectionField,
    LineCross,
    NoCrossing,
    integrate_orbit,
)

__all__ = [
    "Region",
    "DIRECTION_TABLE",
    "P",
    "Q",
    "eval_example_field",
    "EXAMPLE_FIELD",
    "classify_region",
    "crossing_map_Y",
    "crossing_trajectory",
    "y_map",
    "halton_points",
    "Check",
    "AttractionReport",
    "verify_global_attraction",
    "InstabilityReport",
    "instability_witness",
    "verify_axis_orbits",
    "check_inequalities",
    "g_line_margin",
    "verify_elliptic_saddle",
    "sign_consistency",
    "run_all_checks",
]

DEFAULT_STEP = 1e-3
DEFAULT_BUDGET = 1e4


def P(x, y):
    return -((1 + x * x) * y + x ** 3) ** 5


def Q(x, y):
    return y * y * (y * y + x ** 3)


def eval_example_field(x, y):
    """``(P, Q)``; works on floats and on numpy arrays alike."""
    return P(x, y), Q(x, y)


def _field(x: float, y: float) -> tuple[float, float]:
    s = (1 + x * x) * y + x * x * x
    return -s ** 5, y * y * (y * y + x * x * x)


# Speeds near the origin are many orders of magnitude below the usual
# singular tolerance, so only the origin itself is treated as singular.
EXAMPLE_FIELD = DirectionField(_field, singular_tolerance=1e-300)


class Region(enum.Enum):
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    U4 = "U4"
    U5 = "U5"
    U6 = "U6"
    ISOCLINE = "isocline"
    ORIGIN = "origin"


# signs of (x', y') in each region
DIRECTION_TABLE: dict[Region, tuple[int, int]] = {
    Region.U1: (-1, 1),
    Region.U2: (-1, -1),
    Region.U3: (1, -1),
    Region.U4: (1, -1),
    Region.U5: (1, 1),
    Region.U6: (-1, 1),
}


def classify_region(x: float, y: float) -> Region:
    if x == 0 and y == 0:
        return Region.ORIGIN
    cusp = y * y + x ** 3
    flat = (1 + x * x) * y + x ** 3
    if y == 0 or cusp == 0 or flat == 0:
        return Region.ISOCLINE
    if y > 0:
        if cusp > 0:
            return Region.U1
        return Region.U2 if flat > 0 else Region.U3
    if cusp < 0:
        return Region.U4
    return Region.U6 if flat > 0 else Region.U5


def sign_consistency(points: np.ndarray) -> list[tuple[float, float, Region]]:
    """Points whose field signs disagree with the direction table for their region."""
    bad = []
    for x, y in points:
        region = classify_region(float(x), float(y))
        if region not in DIRECTION_TABLE:
            continue
        p, q = eval_example_field(float(x), float(y))
        if (np.sign(p), np.sign(q)) != DIRECTION_TABLE[region]:
            bad.append((float(x), float(y), region))
    return bad


# ---------------------------------------------------------------------------
# crossing map

CROSSING_LINE = LineCross(2.0, 1.0, 0.0, direction=-1)  # 2x + y goes negative


def crossing_trajectory(y0: float, step: float = DEFAULT_STEP, budget: float = DEFAULT_BUDGET,
                        record: bool = True):
    """Orbit through ``(0, y0)`` up to its first crossing of ``y = -2x``."""
    if not y0 > 0:
        raise ValueError("y0 must be positive")
    traj = integrate_orbit(EXAMPLE_FIELD, (0.0, y0), step, budget, [CROSSING_LINE], record=record)
    if not traj.hit(0) or not traj.end[0] < 0:
        raise NoCrossing(f"orbit through (0, {y0}) did not meet y = -2x with x < 0 "
                         f"({traj.termination})")
    return traj


def crossing_map_Y(y0: float, step: float = DEFAULT_STEP, budget: float = DEFAULT_BUDGET) -> float:
    """Ordinate where the orbit through ``(0, y0)`` first meets ``y = -2x``."""
    return crossing_trajectory(y0, step, budget, record=False).end[1]


def _y_at(y0: float, step: float, budget: float) -> float:
    return crossing_map_Y(y0, step, budget)


def y_map(y0s: Sequence[float], step: float = DEFAULT_STEP,
          budget: float = DEFAULT_BUDGET) -> list[tuple[float, float]]:
    ys = parallel_map(partial(_y_at, step=step, budget=budget), [float(v) for v in y0s])
    return list(zip((float(v) for v in y0s), ys))


# ---------------------------------------------------------------------------
# reports

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def halton_points(count: int, low: float = -5.0, high: float = 5.0) -> np.ndarray:
    """First ``count`` points of the unscrambled 2-D Halton sequence, skipping the corner."""
    raw = qmc.Halton(d=2, scramble=False).random(count + 1)[1:]
    return low + (high - low) * raw


@dataclass
class AttractionReport:
    points: list[tuple[float, float]]
    arc_lengths: list[float]
    success: list[bool]

    @property
    def passed(self) -> bool:
        return all(self.success)


def _attract_one(p, eps: float, budget: float, step: float):
    traj = integrate_orbit(EXAMPLE_FIELD, (float(p[0]), float(p[1])), step, budget,
                           [BallEnter((0.0, 0.0), eps)], record=False)
    inside = math.hypot(*traj.end) <= eps * (1 + 1e-9)
    return traj.arc_length, traj.hit(0) or inside


def verify_global_attraction(samples, eps: float = 0.05, budget: float = DEFAULT_BUDGET,
                             step: float = DEFAULT_STEP) -> AttractionReport:
    pts = [(float(x), float(y)) for x, y in samples]
    results = parallel_map(partial(_attract_one, eps=eps, budget=budget, step=step), pts)
    return AttractionReport(pts, [r[0] for r in results], [r[1] for r in results])


@dataclass
class InstabilityReport:
    start: tuple[float, float]
    exit_point: tuple[float, float] | None
    exit_arc: float
    converged: bool

    @property
    def passed(self) -> bool:
        return self.exit_point is not None and self.converged


def instability_witness(start=(0.0, 1e-4), inner: float = 0.05, outer: float = 0.25,
                        step: float = DEFAULT_STEP, budget: float = DEFAULT_BUDGET) -> InstabilityReport:
    """Does the orbit leave the ``outer`` ball before settling into the ``inner`` one?"""
    origin = (0.0, 0.0)
    first = integrate_orbit(EXAMPLE_FIELD, start, step, budget,
                            [BallExit(origin, outer), BallEnter(origin, inner)], record=False)
    if not first.hit(0):
        return InstabilityReport(tuple(start), None, first.arc_length, False)
    rest = integrate_orbit(EXAMPLE_FIELD, first.end, step, budget,
                           [BallEnter(origin, inner)], record=False)
    return InstabilityReport(tuple(start), first.end, first.arc_length, rest.hit(0))


def verify_axis_orbits(xs=(-2.0, 2.0), eps: float = 0.05, step: float = DEFAULT_STEP,
                       budget: float = DEFAULT_BUDGET) -> list[Check]:
    """Orbits started on the x-axis stay on it and reach the ``eps`` ball."""
    checks = []
    for x0 in xs:
        traj = integrate_orbit(EXAMPLE_FIELD, (x0, 0.0), step, budget, [BallEnter((0.0, 0.0), eps)])
        drift = float(np.max(np.abs(traj.vertices[:, 1])))
        checks.append(Check(f"axis orbit from ({x0:g}, 0)", traj.hit(0) and drift < 1e-9,
                            f"max |y| = {drift:.3g}"))
    return checks


# ---------------------------------------------------------------------------
# inequality grids

def g_components(x, y):
    """The rectangle field used for the homoclinic blocks of the synthesis."""
    q = 1 - (1 - y) ** 2 / 2
    return (x * x - 1) * (x * x - q * q), y * (y - 1) * x


def g_line_margin(u, a):
    """``a g1(1-u, 1-au) - g2(1-u, 1-au)``: positive when g crosses the line left to right."""
    g1, g2 = g_components(1 - u, 1 - a * u)
    return a * g1 - g2


@dataclass
class InequalityResult:
    name: str
    samples: int
    violations: list[tuple[float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.samples > 0 and not self.violations


def _interior(lo: float, hi: float, density: int) -> np.ndarray:
    return lo + (hi - lo) * (np.arange(density) + 0.5) / density


def _result(name: str, xs: np.ndarray, ys: np.ndarray, ok: np.ndarray) -> InequalityResult:
    bad = ~ok
    return InequalityResult(name, int(ok.size),
                            [(float(x), float(y)) for x, y in zip(xs[bad][:10], ys[bad][:10])])


def check_inequalities(density: int = 200) -> list[InequalityResult]:
    """Grid checks of the bounds behind the attraction and instability arguments."""
    if density < 10:
        raise ValueError("density must be at least 10")
    out = []

    # -1 <= Q/P <= 0 on U1 with y >= 1, truncated to [-50, 50]^2
    gx, gy = np.meshgrid(np.linspace(-50, 50, density), np.linspace(1, 50, density))
    gx, gy = gx.ravel(), gy.ravel()
    keep = gy * gy + gx ** 3 > 0
    x, y = gx[keep], gy[keep]
    ratio = Q(x, y) / P(x, y)
    out.append(_result("flattening: -1 <= Q/P <= 0 on U1 and y >= 1", x, y,
                       (ratio >= -1) & (ratio <= 0)))

    # factor chain along an orbit below y = 1/4: -1/8 <= x <= 0, -2x <= y <= 1/4
    xs = np.linspace(-1 / 8, 0, density)
    fractions = np.linspace(0, 1, density)
    X, T = np.meshgrid(xs, fractions)
    lower = np.maximum(-2 * X, 1e-6)
    Y = lower + T * (0.25 - lower)
    X, Y = X.ravel(), Y.ravel()
    root = (-X) ** 1.5
    core = Y + X ** 3 / (1 + X * X)
    out.append(_result("factor 1: y + x^3/(1+x^2) <= y + (-x)^(3/2)", X, Y, core <= Y + root))
    out.append(_result("factor 2: y + x^3/(1+x^2) <= 2(y - (-x)^(3/2))", X, Y,
                       core <= 2 * (Y - root)))
    damp = 1 / (1 + X * X) ** 5
    out.append(_result("factor 3: (1+x^2)^-5 >= (1+1/64)^-5 > 1/2", X, Y,
                       (damp >= (1 + 1 / 64) ** -5) & ((1 + 1 / 64) ** -5 > 0.5)))
    ratio = Q(X, Y) / P(X, Y)
    out.append(_result("slope bound: Q/P <= -1/(4y)", X, Y, ratio <= -1 / (4 * Y)))

    # g crosses every line y = 1 + a(x - 1) near its corner from left to right
    us = _interior(0, 0.5, density)
    vs = _interior(0, 0.5, density)
    U, V = np.meshgrid(us, vs)
    U, V = U.ravel(), V.ravel()
    margin = g_line_margin(U, V / U)
    out.append(_result("g line crossing: a g1(1-u,1-au) - g2(1-u,1-au) > 0", U, V / U,
                       margin > 0))
    return out


# ---------------------------------------------------------------------------
# elliptic saddle

def verify_elliptic_saddle(step: float = DEFAULT_STEP, budget: float = DEFAULT_BUDGET, *,
                           eps: float = 0.05, escape: float = 1e3, escape_step: float = 1e-2,
                           loop_seeds: Sequence[float] = (0.2, 0.4, 0.6),
                           axis_seeds: Sequence[float] = (0.5, 1.0, 10.0),
                           lower_seeds: Sequence[float] = (-3.0, -1.0, 0.0, 1.0, 3.0)) -> list[Check]:
    """Numerical signature of one elliptic and one hyperbolic sector.

    (a) both halves of the x-axis are orbits converging to the origin;
    (b) orbits through ``(-y/2, y)`` for the ``loop_seeds`` ordinates (inside the
        homoclinic loop, which meets ``y = -2x`` near ``y = 0.83``) reach the
        ``eps`` ball forwards and backwards while staying bounded;
    (c) orbits through ``(0, y)`` and ``(x, -1)`` leave the square of half-width
        ``escape`` backwards, so they are heteroclinic.
    """
    origin = (0.0, 0.0)
    checks = verify_axis_orbits((-1.0, 1.0), eps, step, budget)

    bw = EXAMPLE_FIELD.reversed()
    for y0 in loop_seeds:
        p = (-y0 / 2, y0)
        events = [BallEnter(origin, eps), BallExit(origin, 2.0)]
        f = integrate_orbit(EXAMPLE_FIELD, p, step, budget, events, record=False)
        b = integrate_orbit(bw, p, step, budget, events, record=False)
        checks.append(Check(f"homoclinic orbit through ({p[0]:g}, {p[1]:g})",
                            f.hit(0) and b.hit(0),
                            f"forward {f.termination}, backward {b.termination}"))

    def escapes(p) -> Check:
        square = lambda x, y: max(abs(x), abs(y)) < escape  # noqa: E731
        b = integrate_orbit(bw, p, escape_step, budget, [BallEnter(origin, eps / 10)],
                            record=False, domain=square)
        return Check(f"heteroclinic orbit through ({p[0]:g}, {p[1]:g})",
                     b.termination.kind.value == "left_domain",
                     f"backward {b.termination} after arc {b.arc_length:.1f}")

    checks += [escapes((0.0, y0)) for y0 in axis_seeds]
    checks += [escapes((x0, -1.0)) for x0 in lower_seeds]
    return checks


# ---------------------------------------------------------------------------

def run_all_checks(step: float = DEFAULT_STEP, budget: float = DEFAULT_BUDGET,
                   points: int = 60, samples: int = 100, density: int = 200) -> list[Check]:
    """Every numerical check of the example, one line each."""
    checks: list[Check] = []
    rng = np.random.default_rng(0)
    pts = rng.uniform(-3, 3, size=(10_000, 2))
    bad = sign_consistency(pts)
    checks.append(Check("field signs match the region table", not bad,
                        f"{len(bad)} mismatches in {len(pts)} points"))

    grid = np.geomspace(1e-3, 10, points)
    pairs = y_map(grid, step, budget)
    ys = [yy for _, yy in pairs]
    checks.append(Check("Y(y0) > 1/4 on the log grid", min(ys) > 0.25, f"min Y = {min(ys):.6f}"))
    checks.append(Check("min Y within 0.831 +- 0.02", abs(min(ys) - 0.831) <= 0.02,
                        f"min Y = {min(ys):.6f}"))

    rep = verify_global_attraction(halton_points(samples), 0.05, budget, step)
    checks.append(Check(f"{samples} Halton points reach the 0.05 ball", rep.passed,
                        f"{sum(rep.success)}/{len(rep.success)} succeeded, "
                        f"longest arc {max(rep.arc_lengths):.2f}"))

    wit = instability_witness(step=step, budget=budget)
    checks.append(Check("orbit from (0, 1e-4) leaves the 0.25 ball first", wit.passed,
                        f"exit at {wit.exit_point}"))
    checks += verify_axis_orbits((-2.0, 2.0), 0.05, step, budget)

    for res in check_inequalities(density):
        checks.append(Check(res.name, res.passed,
                            f"{res.samples} samples, {len(res.violations)} violations"))
    checks += verify_elliptic_saddle(step, budget)
    return checks
