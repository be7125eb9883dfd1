"""Build a flow from a feasible set.

Two outputs are produced.  :func:`synthesize_configuration` gives the
combinatorial skeleton of the constructed flow, which is what the round trip
through extraction needs.  :func:`build_block_layout` gives the piecewise
vector field on the strip ``[0, t] x [-n+1, inf)``: one F block per top-level
key over ``y >= 0``, and below that one G block (or a null block) per interval
of each unit band.  :func:`render_portrait` traces its orbits and projects
them to the punctured plane.

Strip bands are half-open rows ``[-b, -b+1)`` indexed by ``b >= 1``; the G
blocks of keys of length ``b+1`` live in band ``b``.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .dynamics import (
    Curve,
    DirectionField,
    LineCross,
    PortraitDoc,
    export_portrait,
    integrate_orbit,
)
from .feasible import FeasibleSet, Key, feasible_to_dict
from .skeleton import Configuration, Mark, MarkClass

__all__ = [
    "BlockKind",
    "ZeroSet",
    "BlockSpec",
    "StripField",
    "PortraitOptions",
    "orbit_id",
    "separatrix_of_top",
    "synthesize_configuration",
    "build_block_layout",
    "kappa_eval",
    "eval_strip_field",
    "strip_direction_field",
    "map_to_plane",
    "render_portrait",
]


def orbit_id(key: Key, representative: bool) -> str:
    return ("rep:" if representative else "sep:") + ".".join(map(str, key))


def separatrix_of_top(L: FeasibleSet) -> str:
    """Orbit of the lexicographically largest element ``(t, lambda(t)+1)``."""
    return orbit_id((L.t,), False)


def synthesize_configuration(L: FeasibleSet) -> Configuration:
    """Skeleton word of the constructed flow: elements in lexicographic order."""
    ends = L.classify_ends()
    marks = []
    for e in L.elements:
        k = e.last.numerator
        rep = k % 3 != 0
        if len(e.key) == 1:
            cls = MarkClass.HET_REP if rep else MarkClass.HET_SEP
        else:
            cls = MarkClass.HOM_REP if rep else MarkClass.HOM_SEP
        marks.append(Mark(orbit_id(e.key, rep), ends[e], cls))
    return Configuration(marks)


# ---------------------------------------------------------------------------
# kappa

@dataclass(frozen=True)
class ZeroSet:
    """Zeros of a bump function on ``[-1, 1]``: isolated points and closed intervals."""

    points: tuple[Fraction, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @property
    def gaps(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Maximal open sub-intervals of ``[-1, 1]`` free of zeros, left to right."""
        cuts = sorted({Fraction(-1), Fraction(1), *self.points,
                       *(a for a, _ in self.intervals), *(b for _, b in self.intervals)})
        out = []
        for a, b in zip(cuts, cuts[1:]):
            if not any(lo <= a and b <= hi for lo, hi in self.intervals):
                out.append((a, b))
        return tuple(out)


def kappa_eval(zeros: ZeroSet, x_local: float) -> float:
    """``sin^2`` bump on every gap, zero elsewhere; C^1 and at most 1."""
    # endpoints compared as floats, so float images of the zeros evaluate to 0
    for a, b in zeros.gaps:
        fa, fb = float(a), float(b)
        if fa < x_local < fb:
            return math.sin(math.pi * (x_local - fa) / (fb - fa)) ** 2
    return 0.0


def _split(lo: Fraction, hi: Fraction, parts: int) -> list[Fraction]:
    return [lo + (hi - lo) * k / parts for k in range(parts + 1)]


def _f_zeros(s: int, j: int) -> ZeroSet:
    points: list[Fraction] = []
    intervals = []
    if s == 0:
        intervals.append((Fraction(-1), Fraction(0)))
    else:
        points += _split(Fraction(-1), Fraction(0), s)
    if s == j:
        intervals.append((Fraction(0), Fraction(1)))
    else:
        points += _split(Fraction(0), Fraction(1), j - s)
    return ZeroSet(tuple(sorted(set(points))), tuple(intervals))


def _g_zeros(r: int, s: int, j: int) -> ZeroSet:
    half = Fraction(1, 2)
    points: list[Fraction] = []
    intervals = []
    for lo, hi, count in ((Fraction(-1), -half, r), (-half, half, s - r), (half, Fraction(1), j - s)):
        if count == 0:
            intervals.append((lo, hi))
        else:
            points += _split(lo, hi, count)
    return ZeroSet(tuple(sorted(set(points))), tuple(intervals))


# ---------------------------------------------------------------------------
# layout

class BlockKind(enum.Enum):
    F = "F"
    G_PLUS = "G+"
    G_MINUS = "G-"
    NULL = "null"


@dataclass(frozen=True)
class BlockSpec:
    """One block of the strip field.

    ``band`` is 0 for the F semibands ``[x0, x1] x [0, inf)`` and ``b >= 1`` for
    ``[x0, x1] x [-b, -b+1)``.  ``params`` is ``(s, j)`` for F and ``(r, s, j)``
    for G blocks.
    """

    kind: BlockKind
    x0: Fraction
    x1: Fraction
    band: int
    params: tuple[int, ...] = ()
    key: Key = ()
    zeros: ZeroSet | None = None

    @property
    def y_range(self) -> tuple[float, float]:
        if self.band == 0:
            return (0.0, math.inf)
        return (float(-self.band), float(-self.band + 1))

    def local_x(self, x: float) -> float:
        a, b = float(self.x0), float(self.x1)
        return (2 * x - a - b) / (b - a)

    def global_x(self, u: Fraction) -> Fraction:
        return self.x0 + (u + 1) * (self.x1 - self.x0) / 2


@dataclass
class StripField:
    """The glued field on ``[0, t] x [-n+1, inf)``, extended periodically in x."""

    t: int
    n: int
    blocks: list[BlockSpec]
    intervals: dict[Key, tuple[Fraction, Fraction]]
    directions: dict[Key, int]
    feasible: FeasibleSet
    _rows: dict[int, tuple[list[float], list[int]]] = field(default_factory=dict, repr=False)
    _gaps: list[tuple[tuple[float, float], ...]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        rows: dict[int, tuple[list[float], list[int]]] = {}
        for idx, blk in enumerate(self.blocks):
            starts, ids = rows.setdefault(blk.band, ([], []))
            starts.append(float(blk.x0))
            ids.append(idx)
        for band, (starts, ids) in rows.items():
            order = sorted(range(len(ids)), key=lambda k: starts[k])
            rows[band] = ([starts[k] for k in order], [ids[k] for k in order])
        self._rows = rows
        self._gaps = [tuple((float(a), float(b)) for a, b in blk.zeros.gaps) if blk.zeros else ()
                      for blk in self.blocks]

    def level(self, key: Key) -> int:
        """Ordinate of the orbit line of a key of length >= 2."""
        return -len(key) + 2

    def block_of(self, key: Key) -> BlockSpec:
        for blk in self.blocks:
            if blk.key == key and blk.kind is not BlockKind.NULL:
                return blk
        raise KeyError(key)

    def locate(self, x: float, y: float) -> int | None:
        """Index of the block containing ``(x, y)`` (x reduced mod t), or None below the strip."""
        x = x % self.t
        if y >= 0:
            band = 0
        elif y <= -self.n + 1:
            return None
        else:
            band = math.ceil(-y)
        starts, ids = self._rows[band]
        k = bisect.bisect_right(starts, x) - 1
        return ids[max(k, 0)]

    def kappa(self, idx: int, u: float) -> float:
        for a, b in self._gaps[idx]:
            if a < u < b:
                return math.sin(math.pi * (u - a) / (b - a)) ** 2
        return 0.0


def _complement(intervals: list[tuple[Fraction, Fraction]], t: int) -> list[tuple[Fraction, Fraction]]:
    out = []
    cursor = Fraction(0)
    for a, b in sorted(intervals):
        if a > cursor:
            out.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < t:
        out.append((cursor, Fraction(t)))
    return out


def build_block_layout(L: FeasibleSet) -> StripField:
    """Exact block geometry (rational endpoints) and the flow direction on every orbit line."""
    t, n = L.t, L.n
    blocks: list[BlockSpec] = []
    intervals: dict[Key, tuple[Fraction, Fraction]] = {}
    directions: dict[Key, int] = {}

    for i in range(1, t + 1):
        s, j = L.sigma_of((i,)), L.lam((i,))
        blk = BlockSpec(BlockKind.F, Fraction(i - 1), Fraction(i), 0, (s, j), (i,), _f_zeros(s, j))
        blocks.append(blk)
        for k, (a, b) in enumerate(blk.zeros.gaps, start=1):
            intervals[(i, k)] = (blk.global_x(a), blk.global_x(b))
            directions[(i, k)] = 1 if k <= s else -1

    for band in range(1, n):
        keys = sorted(k for k in L.base.keys if len(k) == band + 1)
        for key in keys:
            r, s, j = L.rho_of(key), L.sigma_of(key), L.lam(key)
            x0, x1 = intervals[key]
            kind = BlockKind.G_PLUS if directions[key] > 0 else BlockKind.G_MINUS
            blk = BlockSpec(kind, x0, x1, band, (r, s, j), key, _g_zeros(r, s, j))
            blocks.append(blk)
            for k, (a, b) in enumerate(blk.zeros.gaps, start=1):
                intervals[key + (k,)] = (blk.global_x(a), blk.global_x(b))
                directions[key + (k,)] = directions[key] * (1 if r < k <= s else -1)
        for a, b in _complement([intervals[k] for k in keys], t):
            blocks.append(BlockSpec(BlockKind.NULL, a, b, band))
    return StripField(t, n, blocks, intervals, directions, L)


def eval_strip_field(field: StripField, x: float, y: float) -> tuple[float, float]:
    idx = field.locate(x, y)
    if idx is None:
        return 0.0, 0.0
    blk = field.blocks[idx]
    kind = blk.kind
    if kind is BlockKind.NULL:
        return 0.0, 0.0
    x %= field.t
    if kind is BlockKind.F:
        u = 2 * x - 2 * float(blk.x1) + 1
        m = field.kappa(idx, u) + y * y
        return m * u * (u * u - 1), -m * y
    u = blk.local_x(x)
    w = y + blk.band
    q = 1 - (1 - w) ** 2 / 2
    m = (field.kappa(idx, u) + w * w) * (1 - u * u)
    if kind is BlockKind.G_MINUS:
        m = -m
    return m * (u * u - 1) * (u * u - q * q), m * w * (w - 1) * u


def strip_direction_field(field: StripField, singular_tolerance: float = 1e-12) -> DirectionField:
    return DirectionField(lambda x, y: eval_strip_field(field, x, y), singular_tolerance)


def map_to_plane(t: int, x: float, y: float) -> tuple[float, float]:
    """Strip abscissa becomes the angle (one turn per ``t``), ordinate the log-radius."""
    r = math.exp(y)
    a = 2 * math.pi * x / t
    return r * math.cos(a), r * math.sin(a)


# ---------------------------------------------------------------------------
# portraits

@dataclass(frozen=True)
class PortraitOptions:
    samples_per_block: int = 2
    step: float = 1e-2
    max_arc: float = 20.0
    ymax: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.samples_per_block < 0 or not self.step > 0 or not self.max_arc > 0 \
                or not self.ymax > 0:
            raise ValueError("portrait options must be positive")


def _trace(field: StripField, start, opts: PortraitOptions, y_lo: float, y_hi: float,
           both: bool) -> tuple[np.ndarray, str]:
    """Orbit through ``start`` confined to the closed band ``[y_lo, y_hi]``."""
    fwd = strip_direction_field(field)
    events = [LineCross(0, 1, -y_lo, -1), LineCross(0, 1, -y_hi, 1)]
    a = integrate_orbit(fwd, start, opts.step, opts.max_arc, events)
    if not both:
        return a.vertices, str(a.termination)
    b = integrate_orbit(fwd.reversed(), start, opts.step, opts.max_arc, events)
    verts = np.vstack([b.vertices[::-1], a.vertices[1:]])
    return verts, f"{b.termination}/{a.termination}"


def _sector_polygon(t: int, x0: float, x1: float, y0: float, y1: float, pieces: int = 24):
    xs = np.linspace(x0, x1, pieces + 1)
    outer = [map_to_plane(t, x, y1) for x in xs]
    inner = [map_to_plane(t, x, y0) for x in xs[::-1]]
    return np.array(outer + inner)


def render_portrait(L: FeasibleSet, opts: PortraitOptions | None = None) -> PortraitDoc:
    """Trace skeleton and sample orbits of the strip field and project them to the plane.

    Every separatrix and representative orbit of the construction is emitted
    as one flagged polyline.  The singular set is shaded rather than
    collapsed to a point, so the picture shows the flow before the quotient.
    """
    opts = opts or PortraitOptions()
    field = build_block_layout(L)
    t, n = field.t, field.n
    rng = np.random.default_rng(opts.seed)
    curves: list[Curve] = []

    def add(oid: str, role: str, verts: np.ndarray, term: str) -> None:
        plane = np.array([map_to_plane(t, x, y) for x, y in verts])
        curves.append(Curve(oid, role, plane, term))

    for key in sorted(L.base.keys):
        if len(key) == 1:
            i = key[0]
            for rep, x in ((False, float(i)), (True, i - 0.5)):
                verts, term = _trace(field, (x, opts.ymax), opts, 0.0, opts.ymax + 1, False)
                add(orbit_id(key, rep), "representative" if rep else "separatrix", verts, term)
            continue
        a, b = field.intervals[key]
        level = field.level(key)
        mid = float(a + b) / 2
        verts, term = _trace(field, (mid, float(level)), opts, level - 1.0, level + 1.0, True)
        add(orbit_id(key, False), "separatrix", verts, term)
        verts, term = _trace(field, (mid, level - 0.5), opts, level - 1.0, float(level), True)
        add(orbit_id(key, True), "representative", verts, term)

    for idx, blk in enumerate(field.blocks):
        if blk.kind is BlockKind.NULL:
            continue
        y0, y1 = blk.y_range
        if blk.band == 0:
            y1 = opts.ymax
        for k in range(opts.samples_per_block):
            fx, fy = rng.uniform(0.1, 0.9, size=2)
            x = float(blk.x0) + fx * float(blk.x1 - blk.x0)
            y = y0 + fy * (y1 - y0)
            verts, term = _trace(field, (x, y), opts, y0, y1, True)
            add(f"gen:{idx}:{k}", "generic", verts, term)

    regions = [_sector_polygon(t, float(blk.x0), float(blk.x1), *blk.y_range)
               for blk in field.blocks if blk.kind is BlockKind.NULL]
    core = math.exp(-n + 1)
    angles = np.linspace(0, 2 * np.pi, 73)
    regions.insert(0, np.column_stack([core * np.cos(angles), core * np.sin(angles)]))
    reach = math.exp(opts.ymax)
    meta = {
        "feasible": feasible_to_dict(L),
        "t": t,
        "n": n,
        "options": asdict(opts),
        "seed": opts.seed,
        "view": [-reach * 1.05, -reach * 1.05, reach * 1.05, reach * 1.05],
        "note": ("flow before collapsing the singular set: shaded regions and the central "
                 "disk consist of singular points"),
    }
    return export_portrait(curves, meta, regions)
