"""Separatrix-skeleton configurations and canonical feasible-set extraction.

A configuration is the cyclic word of limit points that the skeleton orbits
leave on a small circle around the attractor, listed counterclockwise from
an arbitrary anchor.  Heteroclinic orbits leave a single omega mark;
homoclinic orbits leave an alpha and an omega mark, and the pair is treated
as a chord of the circle.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .feasible import (
    Element,
    EndKind,
    FeasibleError,
    FeasibleSet,
    Key,
    Third,
)

__all__ = [
    "MarkClass",
    "Mark",
    "Configuration",
    "Orientation",
    "ChordNode",
    "Sector",
    "NestingTree",
    "Extraction",
    "Equivalence",
    "ConfigError",
    "ConfigSyntaxError",
    "CrossingChords",
    "BadMarkCount",
    "MissingRepresentative",
    "ExtraRepresentative",
    "HetInsideHom",
    "TrivialCase",
    "NotHeteroclinic",
    "NonRealizable",
    "parse_configuration",
    "configuration_from_dict",
    "nesting_tree",
    "canonical_feasible_set",
    "extract",
    "decide_equivalence",
    "orbit_partition",
    "element_partition",
    "admits_order_orbit_bijection",
]


class ConfigError(ValueError):
    """Base class for configuration and extraction failures."""


class ConfigSyntaxError(ConfigError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class CrossingChords(ConfigError):
    def __init__(self, orbit_a: str, orbit_b: str):
        self.orbits = (orbit_a, orbit_b)
        super().__init__(f"homoclinic chords {orbit_a!r} and {orbit_b!r} cross")


class BadMarkCount(ConfigError):
    def __init__(self, orbit: str | None, detail: str):
        self.orbit = orbit
        super().__init__(f"{orbit!r}: {detail}" if orbit is not None else detail)


class MissingRepresentative(ConfigError):
    def __init__(self, location: str):
        self.location = location
        super().__init__(f"no representative orbit in {location}")


class ExtraRepresentative(ConfigError):
    def __init__(self, location: str):
        self.location = location
        super().__init__(f"more than one representative orbit in {location}")


class HetInsideHom(ConfigError):
    def __init__(self, orbit: str, enclosing: str):
        self.orbit = orbit
        super().__init__(f"heteroclinic orbit {orbit!r} lies inside homoclinic loop {enclosing!r}")


class TrivialCase(ConfigError):
    def __init__(self):
        super().__init__("no homoclinic separatrix: the attractor is positively stable "
                         "and every such flow is equivalent to a linear node")


class NotHeteroclinic(ConfigError):
    def __init__(self, orbit: str):
        self.orbit = orbit
        super().__init__(f"{orbit!r} is not a heteroclinic separatrix")


class NonRealizable(ConfigError):
    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"configuration is not realizable ({condition})"
                         + (f": {detail}" if detail else ""))


class MarkClass(enum.Enum):
    HET_SEP = "het_sep"
    HOM_SEP = "hom_sep"
    HET_REP = "het_rep"
    HOM_REP = "hom_rep"

    @property
    def homoclinic(self) -> bool:
        return self in (MarkClass.HOM_SEP, MarkClass.HOM_REP)


class Orientation(enum.Enum):
    CCW = "ccw"
    CW = "cw"


@dataclass(frozen=True)
class Mark:
    orbit: str
    end: EndKind
    cls: MarkClass

    def to_dict(self) -> dict:
        return {"orbit": self.orbit, "end": self.end.value, "class": self.cls.value}


@dataclass
class ChordNode:
    """A homoclinic separatrix, its nested separatrices and its representative.

    Positions index the linear word the tree was built from.
    """

    orbit: str
    lo: int
    hi: int
    rep: str = ""
    rep_lo: int = -1
    rep_hi: int = -1
    children: list[ChordNode] = field(default_factory=list)


@dataclass
class Sector:
    """The arc between two consecutive heteroclinic separatrix marks."""

    sep: str
    sep_pos: int
    rep: str
    rep_pos: int
    children: list[ChordNode] = field(default_factory=list)


@dataclass
class NestingTree:
    sectors: list[Sector]
    word: tuple[Mark, ...]


def _check_word(marks: Sequence[Mark]) -> None:
    """Raise the first violated configuration invariant."""
    by_orbit: dict[str, list[Mark]] = {}
    for m in marks:
        by_orbit.setdefault(m.orbit, []).append(m)
    for orbit, ms in by_orbit.items():
        classes = {m.cls for m in ms}
        if len(classes) != 1:
            raise BadMarkCount(orbit, "marks of one orbit carry different classes")
        cls = ms[0].cls
        ends = sorted(m.end.value for m in ms)
        if cls.homoclinic and ends != ["alpha", "omega"]:
            raise BadMarkCount(orbit, "a homoclinic orbit needs one alpha and one omega mark")
        if not cls.homoclinic and ends != ["omega"]:
            raise BadMarkCount(orbit, "a heteroclinic orbit needs exactly one omega mark")
    if not any(m.cls is MarkClass.HET_SEP for m in marks):
        raise BadMarkCount(None, "no heteroclinic separatrix")
    if not any(m.cls is MarkClass.HOM_SEP for m in marks):
        raise TrivialCase()
    _build_tree(_linearize(marks, _last_het_sep(marks)))


def _last_het_sep(marks: Sequence[Mark]) -> int:
    return max(i for i, m in enumerate(marks) if m.cls is MarkClass.HET_SEP)


def _linearize(marks: Sequence[Mark], end: int) -> tuple[Mark, ...]:
    """Cut the cyclic word so that position ``end`` becomes the last mark."""
    return tuple(marks[end + 1:]) + tuple(marks[:end + 1])


def _build_tree(word: Sequence[Mark]) -> NestingTree:
    """Nesting structure of a linear word whose last mark is a heteroclinic separatrix."""
    sectors: list[Sector] = []
    current = Sector("", -1, "", -1)
    # stack entries: (orbit, position, class, node-or-None)
    stack: list[tuple[str, int, MarkClass, ChordNode | None]] = []
    reps_seen: dict[str, list[str]] = {}
    for pos, m in enumerate(word):
        if m.cls.homoclinic:
            if stack and stack[-1][0] == m.orbit:
                orbit, lo, cls, node = stack.pop()
                if node is not None:
                    node.hi = pos
                    count = reps_seen.get(orbit, [])
                    if not count:
                        raise MissingRepresentative(f"homoclinic loop {orbit!r}")
                    if len(count) > 1:
                        raise ExtraRepresentative(f"homoclinic loop {orbit!r}")
                else:
                    owner = next((e[3] for e in reversed(stack) if e[3] is not None), None)
                    if owner is None:
                        raise ExtraRepresentative(f"the sector (homoclinic representative "
                                                  f"{orbit!r} outside every loop)")
                    reps_seen.setdefault(owner.orbit, []).append(orbit)
                    owner.rep, owner.rep_lo, owner.rep_hi = orbit, lo, pos
                continue
            if any(e[0] == m.orbit for e in stack):
                raise CrossingChords(stack[-1][0], m.orbit)
            node = None
            if m.cls is MarkClass.HOM_SEP:
                node = ChordNode(m.orbit, pos, -1)
                parent = next((e[3] for e in reversed(stack) if e[3] is not None), None)
                (parent.children if parent is not None else current.children).append(node)
            stack.append((m.orbit, pos, m.cls, node))
            continue
        if stack:
            raise HetInsideHom(m.orbit, stack[-1][0])
        if m.cls is MarkClass.HET_REP:
            if current.rep:
                raise ExtraRepresentative(f"the sector ending at mark {len(sectors) + 1}")
            current.rep, current.rep_pos = m.orbit, pos
        else:
            if not current.rep:
                raise MissingRepresentative(f"the sector ending at {m.orbit!r}")
            current.sep, current.sep_pos = m.orbit, pos
            sectors.append(current)
            current = Sector("", -1, "", -1)
    if stack:
        # an open chord at the end of the word straddles the cut point
        raise CrossingChords(stack[-1][0], word[-1].orbit)
    return NestingTree(sectors, tuple(word))


class Configuration:
    """A validated cyclic word of marks, stored counterclockwise from an anchor."""

    __slots__ = ("marks",)

    def __init__(self, marks: Iterable[Mark]):
        marks = tuple(marks)
        _check_word(marks)
        self.marks = marks

    def __len__(self) -> int:
        return len(self.marks)

    def orbits(self) -> list[str]:
        seen: dict[str, None] = {}
        for m in self.marks:
            seen.setdefault(m.orbit)
        return list(seen)

    def het_separatrices(self) -> list[str]:
        """Heteroclinic separatrices in stored (anchor) order."""
        return [m.orbit for m in self.marks if m.cls is MarkClass.HET_SEP]

    def orbit_class(self, orbit: str) -> MarkClass | None:
        for m in self.marks:
            if m.orbit == orbit:
                return m.cls
        return None

    def rotate(self, k: int) -> Configuration:
        k %= len(self.marks)
        return Configuration(self.marks[k:] + self.marks[:k])

    def relabel(self, mapping: Mapping[str, str]) -> Configuration:
        return Configuration(Mark(mapping.get(m.orbit, m.orbit), m.end, m.cls) for m in self.marks)

    def mirror(self) -> Configuration:
        return Configuration(reversed(self.marks))

    def to_dict(self) -> dict:
        return {"marks": [m.to_dict() for m in self.marks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self.marks == other.marks

    def __hash__(self) -> int:
        return hash(self.marks)

    def __repr__(self) -> str:
        return "Configuration(" + " ".join(
            f"{m.cls.value}:{m.end.value[0]}:{m.orbit}" for m in self.marks) + ")"


def configuration_from_dict(data) -> Configuration:
    if not isinstance(data, dict) or not isinstance(data.get("marks"), list):
        raise ConfigSyntaxError("expected an object with a 'marks' list")
    marks = []
    for idx, item in enumerate(data["marks"]):
        try:
            orbit = item["orbit"]
            if not isinstance(orbit, str) or not orbit:
                raise ValueError("orbit id must be a non-empty string")
            marks.append(Mark(orbit, EndKind(item["end"]), MarkClass(item["class"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigSyntaxError(f"malformed mark {idx}: {exc}") from None
    return Configuration(marks)


def parse_configuration(text: str) -> Configuration:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSyntaxError(f"invalid JSON ({exc.msg})", exc.pos) from None
    return configuration_from_dict(data)


def _oriented_word(cfg: Configuration, theta: Orientation, sigma_orbit: str) -> tuple[Mark, ...]:
    word = cfg.marks if theta is Orientation.CCW else tuple(reversed(cfg.marks))
    for i, m in enumerate(word):
        if m.orbit == sigma_orbit:
            if m.cls is not MarkClass.HET_SEP:
                raise NotHeteroclinic(sigma_orbit)
            return _linearize(word, i)
    raise NotHeteroclinic(sigma_orbit)


def nesting_tree(cfg: Configuration, theta: Orientation = Orientation.CCW,
                 sigma_orbit: str | None = None) -> NestingTree:
    """Containment forest of the homoclinic chords, grouped into sectors.

    The word is read in direction ``theta`` and cut just after ``sigma_orbit``
    (by default the last heteroclinic separatrix in stored order), so sectors
    come out in the order of their separatrix marks along the cut circle.
    """
    if sigma_orbit is None:
        word = cfg.marks if theta is Orientation.CCW else tuple(reversed(cfg.marks))
        return _build_tree(_linearize(word, _last_het_sep(word)))
    return _build_tree(_oriented_word(cfg, theta, sigma_orbit))


@dataclass(frozen=True)
class Extraction:
    """A canonical feasible set with the explicit element-to-mark bijection."""

    feasible: FeasibleSet
    word: tuple[Mark, ...]
    positions: dict[Element, int]
    keys: dict[str, Key]


def _count_before(children: list[ChordNode], pos: int) -> int:
    return sum(1 for c in children if c.hi < pos)


def extract(cfg: Configuration, theta: Orientation | str, sigma_orbit: str) -> Extraction:
    """Build the canonical feasible set and the bijection onto the cut word."""
    theta = Orientation(theta)
    word = _oriented_word(cfg, theta, sigma_orbit)
    tree = _build_tree(word)

    keys: dict[str, Key] = {}
    base: list[Key] = []
    rho: dict[Key, int] = {}
    sigma: dict[Key, int] = {}
    positions: dict[Key, tuple[int, ...]] = {}

    def visit(node: ChordNode, key: Key) -> None:
        base.append(key)
        keys[node.orbit] = key
        keys[node.rep] = key
        rho[key] = _count_before(node.children, node.rep_lo)
        sigma[key] = _count_before(node.children, node.rep_hi)
        positions[key] = (node.lo, node.hi, node.rep_lo, node.rep_hi)
        for j, child in enumerate(node.children, start=1):
            visit(child, key + (j,))

    for i, sector in enumerate(tree.sectors, start=1):
        key = (i,)
        base.append(key)
        keys[sector.sep] = key
        keys[sector.rep] = key
        sigma[key] = _count_before(sector.children, sector.rep_pos)
        positions[key] = (sector.sep_pos, sector.rep_pos)
        for j, child in enumerate(sector.children, start=1):
            visit(child, key + (j,))

    try:
        L = FeasibleSet(base, rho, sigma)
    except FeasibleError as exc:
        raise NonRealizable(type(exc).__name__, str(exc)) from exc

    bijection: dict[Element, int] = {}
    for key, pos in positions.items():
        if len(key) == 1:
            bijection[L.sep_element(key)] = pos[0]
            bijection[L.rep_element(key)] = pos[1]
        else:
            bijection[Element(key, Third(0))] = pos[0]
            bijection[L.sep_element(key)] = pos[1]
            bijection[Element(key, Third(3 * L.rho_of(key) + 1))] = pos[2]
            bijection[L.rep_element(key)] = pos[3]
    order = [bijection[e] for e in L.elements]
    if order != sorted(order):
        raise NonRealizable("order", "lexicographic order disagrees with the circle order")
    ends = L.classify_ends()
    for e, pos in bijection.items():
        if word[pos].end is not ends[e]:
            raise NonRealizable(
                "direction",
                f"mark of {word[pos].orbit!r} is {word[pos].end.value} but {e} "
                f"is an {ends[e].value}-vector")
    return Extraction(L, word, bijection, keys)


def canonical_feasible_set(cfg: Configuration, theta: Orientation | str,
                           sigma_orbit: str) -> FeasibleSet:
    return extract(cfg, theta, sigma_orbit).feasible


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: tuple[Orientation, str, Orientation, str] | None = None


def decide_equivalence(cfg1: Configuration, cfg2: Configuration) -> Equivalence:
    """Search every orientation and separatrix choice on both sides.

    Enumeration order: orientation of the first flow (CCW, then CW), its
    separatrix in stored order, then the same for the second flow.  The first
    matching pair is returned as the witness.
    """
    choices1 = [(th, s) for th in Orientation for s in cfg1.het_separatrices()]
    choices2 = [(th, s) for th in Orientation for s in cfg2.het_separatrices()]
    sets1 = [canonical_feasible_set(cfg1, th, s) for th, s in choices1]
    sets2 = [canonical_feasible_set(cfg2, th, s) for th, s in choices2]
    for (th1, s1), L1 in zip(choices1, sets1):
        for (th2, s2), L2 in zip(choices2, sets2):
            if L1 == L2:
                return Equivalence(True, (th1, s1, th2, s2))
    return Equivalence(False)


def orbit_partition(word: Sequence[Mark]) -> frozenset[tuple[MarkClass, frozenset[int]]]:
    """Positions of the word grouped by orbit, each group tagged with its class."""
    groups: dict[str, list[int]] = {}
    for pos, m in enumerate(word):
        groups.setdefault(m.orbit, []).append(pos)
    cls = {m.orbit: m.cls for m in word}
    return frozenset((cls[o], frozenset(p)) for o, p in groups.items())


def element_partition(L: FeasibleSet) -> frozenset[tuple[MarkClass, frozenset[int]]]:
    """The partition of the lexicographically ordered elements of ``L`` into orbits."""
    groups: dict[tuple[Key, bool], list[int]] = {}
    for pos, e in enumerate(L.elements):
        groups.setdefault((e.key, e.last.numerator % 3 != 0), []).append(pos)
    out = set()
    for (key, rep), p in groups.items():
        if len(key) == 1:
            cls = MarkClass.HET_REP if rep else MarkClass.HET_SEP
        else:
            cls = MarkClass.HOM_REP if rep else MarkClass.HOM_SEP
        out.add((cls, frozenset(p)))
    return frozenset(out)


def admits_order_orbit_bijection(L: FeasibleSet, word: Sequence[Mark]) -> bool:
    """Does the order-preserving bijection from ``L`` onto ``word`` also preserve orbits?"""
    return len(L) == len(word) and element_partition(L) == orbit_partition(word)
