"""Shared generators for tests: hypothesis strategies and a seeded numpy twin."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from attractor_class.feasible import FeasibleError, FeasibleSet

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def _grow(pick_top, pick_parent, pick_int, max_keys: int):
    """Random complete base plus random in-range markers, using the given choosers."""
    t = pick_top()
    keys = [(i,) for i in range(1, t + 1)]
    lam = {k: 0 for k in keys}
    extra = pick_int(1, max(1, max_keys - t))
    for n in range(extra):
        pool = keys[:t] if n == 0 else keys
        parent = pick_parent(pool)
        lam[parent] += 1
        child = parent + (lam[parent],)
        keys.append(child)
        lam[child] = 0
    sigma = {k: pick_int(0, lam[k]) for k in keys}
    rho = {k: pick_int(0, sigma[k]) for k in keys if len(k) >= 2}
    return keys, rho, sigma


@st.composite
def feasible_sets(draw, max_keys: int = 12, max_top: int = 3):
    keys, rho, sigma = _grow(
        lambda: draw(st.integers(1, min(max_top, max_keys - 1))),
        lambda pool: draw(st.sampled_from(pool)),
        lambda lo, hi: draw(st.integers(lo, hi)),
        max_keys,
    )
    try:
        return FeasibleSet(keys, rho, sigma)
    except FeasibleError:
        assume(False)


def random_feasible_sets(count: int, max_keys: int = 12, seed: int = 0, max_top: int = 3):
    """``count`` valid feasible sets from a seeded generator (rejection sampling)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        keys, rho, sigma = _grow(
            lambda: int(rng.integers(1, min(max_top, max_keys - 1) + 1)),
            lambda pool: pool[int(rng.integers(len(pool)))],
            lambda lo, hi: int(rng.integers(lo, hi + 1)),
            max_keys,
        )
        try:
            out.append(FeasibleSet(keys, rho, sigma))
        except FeasibleError:
            continue
    return out


# ---------------------------------------------------------------------------
# strip-field invariants, computed from the feasible set rather than the layout

def expected_directions(L: FeasibleSet) -> dict:
    """Flow direction (+1 rightward) on every gap orbit line, from the marker rules alone."""
    out = {}
    for key in sorted(L.base.keys, key=len):
        if len(key) < 2:
            continue
        parent, k = key[:-1], key[-1]
        if len(parent) == 1:
            out[key] = 1 if k <= L.sigma_of(parent) else -1
        else:
            same = L.rho_of(parent) < k <= L.sigma_of(parent)
            out[key] = out[parent] * (1 if same else -1)
    return out


def tiling_defects(layout, ymax: float = 3.0, samples: int = 500, seed: int = 0) -> list[str]:
    """Gaps, overlaps or area mismatches of the block rectangles over [0, t] x [-n+1, ymax]."""
    from fractions import Fraction

    t, n = layout.t, layout.n
    defects = []
    area = Fraction(0)
    for band in range(n):
        row = sorted((b for b in layout.blocks if b.band == band), key=lambda b: b.x0)
        cursor = Fraction(0)
        for b in row:
            if b.x0 != cursor:
                defects.append(f"band {band}: gap or overlap at x={b.x0}")
            cursor = b.x1
            area += (b.x1 - b.x0) * (Fraction(ymax).limit_denominator() if band == 0 else 1)
        if cursor != t:
            defects.append(f"band {band}: ends at {cursor}")
    if area != t * (n - 1 + Fraction(ymax).limit_denominator()):
        defects.append(f"area {area}")
    rng = np.random.default_rng(seed)
    for x, y in zip(rng.uniform(0, t, samples), rng.uniform(-n + 1 + 1e-9, ymax, samples)):
        hits = [i for i, b in enumerate(layout.blocks)
                if float(b.x0) <= x < float(b.x1) and b.y_range[0] <= y < b.y_range[1]]
        if len(hits) != 1 or layout.locate(x, y) != hits[0]:
            defects.append(f"point ({x}, {y}) in blocks {hits}")
    return defects


def orbit_line_defects(layout, per_line: int = 1000, ymax: float = 3.0, seed: int = 0) -> list[str]:
    """Points of an orbit line where the field is not tangent to it."""
    from attractor_class.synthesis import eval_strip_field

    rng = np.random.default_rng(seed)
    defects = []
    for key, (a, b) in layout.intervals.items():
        level = float(layout.level(key))
        xs = np.concatenate([[float(a), float(b)], rng.uniform(float(a), float(b), per_line - 2)])
        for x in xs:
            if eval_strip_field(layout, float(x), level)[1] != 0:
                defects.append(f"{key} at x={x}")
    for i in range(1, layout.t + 1):
        for x in (float(i), i - 0.5):
            for y in rng.uniform(0, ymax, per_line):
                if eval_strip_field(layout, x, float(y))[0] != 0:
                    defects.append(f"ray x={x} at y={y}")
    return defects


def direction_defects(L: FeasibleSet, layout) -> list[str]:
    from attractor_class.synthesis import eval_strip_field

    defects = []
    for key, sign in expected_directions(L).items():
        a, b = layout.intervals[key]
        u = eval_strip_field(layout, float(a + b) / 2, float(layout.level(key)))[0]
        if np.sign(u) != sign:
            defects.append(f"{key}: horizontal component {u}, expected sign {sign}")
    return defects
