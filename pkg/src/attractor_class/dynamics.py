"""Fixed-step orbit tracing on unit-normalized planar fields, with events.

The integrator follows orbits, not solutions: it advances a classical RK4
step on ``v/|v|``, so the parameter is arc length and the high-order
degeneracies of the fields near their singular points cost nothing.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

__all__ = [
    "DirectionField",
    "LineCross",
    "BallEnter",
    "BallExit",
    "EventSpec",
    "TerminationKind",
    "Termination",
    "Trajectory",
    "NonFiniteField",
    "NoCrossing",
    "integrate_orbit",
    "detect_crossing",
    "Curve",
    "PortraitDoc",
    "export_portrait",
]

Point = tuple[float, float]


class NonFiniteField(ArithmeticError):
    def __init__(self, point: Point):
        self.point = point
        super().__init__(f"field is not finite at ({point[0]!r}, {point[1]!r})")


class NoCrossing(RuntimeError):
    pass


@dataclass(frozen=True)
class DirectionField:
    """A planar vector field; speeds below ``singular_tolerance`` count as singular."""

    eval: Callable[[float, float], tuple[float, float]]
    singular_tolerance: float = 1e-12

    def reversed(self) -> DirectionField:
        f = self.eval

        def back(x: float, y: float) -> tuple[float, float]:
            u, v = f(x, y)
            return -u, -v

        return DirectionField(back, self.singular_tolerance)


@dataclass(frozen=True)
class LineCross:
    """Crossing of ``a x + b y + c = 0``; direction +1 (increasing), -1, or 0 (either)."""

    a: float
    b: float
    c: float
    direction: int = 0

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("line needs (a, b) != (0, 0)")
        if self.direction not in (-1, 0, 1):
            raise ValueError("direction must be -1, 0 or 1")

    def value(self, x: float, y: float) -> float:
        return self.a * x + self.b * y + self.c

    def fired(self, before: float, after: float) -> bool:
        if before == 0:
            return False
        if after != 0 and (before > 0) == (after > 0):
            return False
        sign = 1 if before < 0 else -1
        return self.direction == 0 or self.direction == sign


@dataclass(frozen=True)
class BallEnter:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def value(self, x: float, y: float) -> float:
        return math.hypot(x - self.center[0], y - self.center[1]) - self.radius

    def fired(self, before: float, after: float) -> bool:
        return before > 0 and after <= 0


@dataclass(frozen=True)
class BallExit:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def value(self, x: float, y: float) -> float:
        return math.hypot(x - self.center[0], y - self.center[1]) - self.radius

    def fired(self, before: float, after: float) -> bool:
        return before < 0 and after >= 0


EventSpec = LineCross | BallEnter | BallExit


class TerminationKind(enum.Enum):
    SINGULAR_REACHED = "singular_reached"
    BUDGET_EXHAUSTED = "budget_exhausted"
    EVENT_HIT = "event_hit"
    LEFT_DOMAIN = "left_domain"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    event: int | None = None

    def __str__(self) -> str:
        if self.kind is TerminationKind.EVENT_HIT:
            return f"event_hit({self.event})"
        return self.kind.value


@dataclass
class Trajectory:
    vertices: np.ndarray
    arc_length: float
    termination: Termination
    max_norm: float = 0.0

    @property
    def end(self) -> Point:
        return float(self.vertices[-1, 0]), float(self.vertices[-1, 1])

    def hit(self, event: int) -> bool:
        return self.termination == Termination(TerminationKind.EVENT_HIT, event)


def _direction(f, x: float, y: float):
    u, v = f(x, y)
    if not (math.isfinite(u) and math.isfinite(v)):
        raise NonFiniteField((x, y))
    s = math.hypot(u, v)
    return u, v, s


def integrate_orbit(field: DirectionField, start: Point, step: float, budget: float,
                    events: Sequence[EventSpec] = (), *, record: bool = True,
                    domain: Callable[[float, float], bool] | None = None) -> Trajectory:
    """Trace the orbit through ``start`` for at most ``budget`` units of arc length.

    Stops at the first event (refined by bisection on the step size), at a
    singular point, when leaving ``domain`` (if given), or when the budget is
    spent.  A reversal of the normalized direction between consecutive
    vertices means a singular point was stepped over and also counts as
    reaching it.  ``record=False`` keeps only the two end vertices.
    """
    if not step > 0 or not budget > 0:
        raise ValueError("step and budget must be positive")
    f = field.eval
    tol = field.singular_tolerance
    x, y = float(start[0]), float(start[1])
    verts = [(x, y)]
    max_norm = math.hypot(x, y)
    arc = 0.0
    param = 0.0  # integration parameter; the budget is charged against it
    values = [ev.value(x, y) for ev in events]

    def rk4(x0, y0, d0x, d0y, h):
        u, v, s = _direction(f, x0 + 0.5 * h * d0x, y0 + 0.5 * h * d0y)
        if s < tol:
            return None
        k2x, k2y = u / s, v / s
        u, v, s = _direction(f, x0 + 0.5 * h * k2x, y0 + 0.5 * h * k2y)
        if s < tol:
            return None
        k3x, k3y = u / s, v / s
        u, v, s = _direction(f, x0 + h * k3x, y0 + h * k3y)
        if s < tol:
            return None
        k4x, k4y = u / s, v / s
        return (x0 + h / 6 * (d0x + 2 * k2x + 2 * k3x + k4x),
                y0 + h / 6 * (d0y + 2 * k2y + 2 * k3y + k4y))

    def finish(kind: TerminationKind, event: int | None = None) -> Trajectory:
        if not record and len(verts) > 1:
            kept = [verts[0], verts[-1]]
        else:
            kept = verts
        return Trajectory(np.array(kept, dtype=float), arc, Termination(kind, event), max_norm)

    u, v, s = _direction(f, x, y)
    if s < tol:
        return finish(TerminationKind.SINGULAR_REACHED)
    dx, dy = u / s, v / s
    while True:
        remaining = budget - param
        if remaining <= budget * 1e-12:
            return finish(TerminationKind.BUDGET_EXHAUSTED)
        h = min(step, remaining)
        nxt = rk4(x, y, dx, dy, h)
        if nxt is None:
            return finish(TerminationKind.SINGULAR_REACHED)
        nx, ny = nxt
        new_values = [ev.value(nx, ny) for ev in events]
        fired = [i for i, ev in enumerate(events) if ev.fired(values[i], new_values[i])]
        if fired:
            # shrink the step to the earliest event, by bisection on h
            best_h, best_i = h, fired[0]
            for i in fired:
                ev = events[i]
                lo, hi = 0.0, h
                while hi - lo > step * 1e-7:
                    mid = 0.5 * (lo + hi)
                    p = rk4(x, y, dx, dy, mid)
                    if p is None or ev.fired(values[i], ev.value(*p)):
                        hi = mid
                    else:
                        lo = mid
                if hi < best_h:
                    best_h, best_i = hi, i
            p = rk4(x, y, dx, dy, best_h)
            if p is not None:
                nx, ny = p
                param += best_h
                arc += math.hypot(nx - x, ny - y)
                verts.append((nx, ny))
                max_norm = max(max_norm, math.hypot(nx, ny))
            return finish(TerminationKind.EVENT_HIT, best_i)
        if domain is not None and not domain(nx, ny):
            return finish(TerminationKind.LEFT_DOMAIN)
        u, v, s = _direction(f, nx, ny)
        param += h
        arc += math.hypot(nx - x, ny - y)
        x, y = nx, ny
        verts.append((x, y))
        max_norm = max(max_norm, math.hypot(x, y))
        values = new_values
        if s < tol:
            return finish(TerminationKind.SINGULAR_REACHED)
        ndx, ndy = u / s, v / s
        if ndx * dx + ndy * dy < 0:
            return finish(TerminationKind.SINGULAR_REACHED)
        dx, dy = ndx, ndy


def detect_crossing(field: DirectionField, start: Point, line: LineCross, step: float,
                    budget: float) -> Point:
    """First crossing of ``line`` (respecting its direction filter)."""
    if not isinstance(line, LineCross):
        raise TypeError("detect_crossing needs a LineCross event")
    traj = integrate_orbit(field, start, step, budget, [line], record=False)
    if not traj.hit(0):
        raise NoCrossing(f"no crossing before termination ({traj.termination})")
    return traj.end


# ---------------------------------------------------------------------------
# portrait documents

ROLES = ("separatrix", "representative", "generic")


@dataclass(frozen=True)
class Curve:
    orbit_id: str
    role: str
    vertices: np.ndarray
    termination: str = ""


@dataclass
class PortraitDoc:
    curves: list[Curve]
    meta: dict
    singular_regions: list[np.ndarray] = field(default_factory=list)
    precision: int = 5

    def bounds(self) -> tuple[float, float, float, float]:
        view = self.meta.get("view")
        if view is not None:
            return tuple(float(v) for v in view)
        pts = [c.vertices for c in self.curves if len(c.vertices)]
        pts += [r for r in self.singular_regions if len(r)]
        if not pts:
            return (-1.0, -1.0, 1.0, 1.0)
        allp = np.vstack(pts)
        lo, hi = allp.min(axis=0), allp.max(axis=0)
        pad = 0.05 * max(float(np.max(hi - lo)), 1e-9)
        return (float(lo[0] - pad), float(lo[1] - pad), float(hi[0] + pad), float(hi[1] + pad))

    def to_svg(self) -> str:
        p = self.precision
        fmt = lambda v: f"{v:.{p}f}"  # noqa: E731
        x0, y0, x1, y1 = self.bounds()
        w, h = x1 - x0, y1 - y0
        # flip y so the picture has the usual mathematical orientation
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{fmt(800 * h / w)}" '
            f'viewBox="{fmt(x0)} {fmt(-y1)} {fmt(w)} {fmt(h)}">',
            "<style>",
            ".separatrix{fill:none;stroke:#c0392b;stroke-width:0.6%}",
            ".representative{fill:none;stroke:#2471a3;stroke-width:0.4%}",
            ".generic{fill:none;stroke:#7f8c8d;stroke-width:0.2%}",
            ".singular{fill:#d5d8dc;stroke:none}",
            "</style>",
            f"<desc>{_escape(json.dumps(self.meta, sort_keys=True))}</desc>",
        ]
        for region in self.singular_regions:
            pts = " ".join(f"{fmt(x)},{fmt(-y)}" for x, y in region)
            out.append(f'<polygon class="singular" points="{pts}"/>')
        for c in self.curves:
            pts = " ".join(f"{fmt(x)},{fmt(-y)}" for x, y in c.vertices)
            out.append(f'<polyline class="{c.role}" data-orbit="{_escape(c.orbit_id)}" '
                       f'points="{pts}"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["orbit", "index", "x", "y"])
        for c in self.curves:
            for k, (x, y) in enumerate(c.vertices):
                writer.writerow([c.orbit_id, k, f"{x:.17g}", f"{y:.17g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = dict(self.meta)
        doc["curves"] = [
            {"orbit": c.orbit_id, "role": c.role, "vertices": int(len(c.vertices)),
             "termination": c.termination}
            for c in self.curves
        ]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, svg: str | None = None, csv_path: str | None = None,
              json_path: str | None = None) -> None:
        for path, text in ((svg, self.to_svg), (csv_path, self.to_csv), (json_path, self.to_json)):
            if path is not None:
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(text())


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def export_portrait(curves: Sequence[Curve | Trajectory], meta: Mapping | None = None,
                    singular_regions: Sequence[np.ndarray] = ()) -> PortraitDoc:
    """Wrap trajectories into a document; bare trajectories become generic curves."""
    out = []
    for k, c in enumerate(curves):
        if isinstance(c, Trajectory):
            c = Curve(f"orbit-{k}", "generic", c.vertices, str(c.termination))
        if c.role not in ROLES:
            raise ValueError(f"unknown curve role {c.role!r}")
        out.append(Curve(c.orbit_id, c.role, np.asarray(c.vertices, dtype=float).reshape(-1, 2),
                         c.termination))
    return PortraitDoc(out, dict(meta or {}),
                       [np.asarray(r, dtype=float).reshape(-1, 2) for r in singular_regions])
