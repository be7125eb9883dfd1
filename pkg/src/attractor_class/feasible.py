"""Feasible sets: the finite vectorial invariant of a globally attracting flow.

A feasible set is stored as its complete base ``V`` together with the markers
``rho`` and ``sigma``; the elements ``(v, k)`` are always derived from those,
never stored on their own.  The last component ``k`` of an element lives in
``{n/3 : n >= 0}`` and is kept as an integer numerator over 3.
"""
from __future__ import annotations

import enum
import functools
import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "Key",
    "Third",
    "Element",
    "Parity",
    "EndKind",
    "CompleteBase",
    "FeasibleSet",
    "FeasibleError",
    "EmptyBase",
    "MissingPrefix",
    "MissingSibling",
    "RhoSigmaOutOfRange",
    "ConditionIII",
    "ConditionIV",
    "NoLengthTwoKey",
    "PrefixTie",
    "ElementMismatch",
    "validate_complete",
    "validate_feasible",
    "feasible_from_elements",
    "parity_map",
    "classify_ends",
    "compare_lex",
    "format_key",
    "parse_key",
    "feasible_to_dict",
    "feasible_from_dict",
    "dumps_feasible",
    "loads_feasible",
    "enumerate_bases",
    "enumerate_feasible_sets",
]

Key = tuple[int, ...]


class FeasibleError(ValueError):
    """Base class for every invalid-base or invalid-feasible-set condition."""


class EmptyBase(FeasibleError):
    def __init__(self):
        super().__init__("base is empty")


class MissingPrefix(FeasibleError):
    def __init__(self, key: Key, prefix: Key):
        self.key = key
        self.prefix = prefix
        super().__init__(f"{format_key(key)} requires prefix {format_key(prefix)}")


class MissingSibling(FeasibleError):
    def __init__(self, key: Key, sibling: Key):
        self.key = key
        self.sibling = sibling
        super().__init__(f"{format_key(key)} requires sibling {format_key(sibling)}")


class RhoSigmaOutOfRange(FeasibleError):
    def __init__(self, key: Key, detail: str):
        self.key = key
        super().__init__(f"markers of {format_key(key)}: {detail}")


class NoLengthTwoKey(FeasibleError):
    def __init__(self):
        super().__init__("base contains no vector of length 2")


class ConditionIII(FeasibleError):
    def __init__(self, i: int, nxt: int, lam_i: int):
        self.index = i
        super().__init__(
            f"condition (iii) fails at ({i}): ({i},{Third(3 * lam_i + 2)}) and "
            f"({nxt},2/3) both belong to L"
        )


class ConditionIV(FeasibleError):
    def __init__(self, key: Key):
        self.key = key
        super().__init__(f"condition (iv) fails at {format_key(key)}")


class PrefixTie(FeasibleError):
    def __init__(self, a: "Element", b: "Element"):
        super().__init__(f"elements {a} and {b} differ only by length")


class ElementMismatch(FeasibleError):
    pass


def format_key(key: Key) -> str:
    return "(" + ",".join(str(k) for k in key) + ")"


def parse_key(text: str) -> Key:
    """Parse a comma-joined key such as ``"1,2"`` (parentheses optional)."""
    body = text.strip().strip("()")
    try:
        key = tuple(int(part) for part in body.split(","))
    except ValueError:
        raise ValueError(f"malformed key {text!r}") from None
    if not key or any(k < 1 for k in key):
        raise ValueError(f"key entries must be positive integers: {text!r}")
    return key


@dataclass(frozen=True, order=True)
class Third:
    """A non-negative multiple of 1/3, compared by numerator."""

    numerator: int

    def __post_init__(self):
        if self.numerator < 0:
            raise ValueError("thirds must be non-negative")

    @classmethod
    def parse(cls, text: str) -> Third:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            if int(den) != 3:
                raise ValueError(f"denominator must be 3: {text!r}")
            return cls(int(num))
        return cls(3 * int(text))

    @property
    def is_integer(self) -> bool:
        return self.numerator % 3 == 0

    def __float__(self) -> float:
        return self.numerator / 3

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.numerator // 3)
        return f"{self.numerator}/3"


@dataclass(frozen=True)
class Element:
    """An element ``(v, k)`` of a feasible set."""

    key: Key
    last: Third

    def sort_key(self) -> tuple[int, ...]:
        return tuple(3 * k for k in self.key) + (self.last.numerator,)

    @classmethod
    def parse(cls, text: str) -> Element:
        parts = [p for p in re.split(r"[(),\s]+", text) if p]
        if len(parts) < 2:
            raise ValueError(f"element needs at least two components: {text!r}")
        return cls(tuple(int(p) for p in parts[:-1]), Third.parse(parts[-1]))

    def __str__(self) -> str:
        return "(" + ",".join([*(str(k) for k in self.key), str(self.last)]) + ")"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    def flipped(self) -> Parity:
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN


class EndKind(enum.Enum):
    ALPHA = "alpha"
    OMEGA = "omega"


def compare_lex(a: Element, b: Element) -> int:
    """Componentwise numeric comparison; -1, 0 or 1."""
    ka, kb = a.sort_key(), b.sort_key()
    for p, q in zip(ka, kb):
        if p != q:
            return -1 if p < q else 1
    if len(ka) == len(kb):
        return 0
    # one element is a strict prefix of the other: impossible inside a valid L
    raise PrefixTie(a, b)


_lex = functools.cmp_to_key(compare_lex)


class CompleteBase:
    """A finite, non-empty, prefix- and sibling-closed set of positive vectors."""

    __slots__ = ("keys", "_lam", "top", "depth")

    def __init__(self, keys: Iterable[Key]):
        keys = frozenset(tuple(k) for k in keys)
        if not keys:
            raise EmptyBase()
        for key in sorted(keys, key=lambda k: (len(k), k)):
            if not key or any(not isinstance(k, int) or k < 1 for k in key):
                raise FeasibleError(f"invalid key {key!r}")
            for m in range(1, len(key)):
                if key[:m] not in keys:
                    raise MissingPrefix(key, key[:m])
            for i in range(1, key[-1]):
                if key[:-1] + (i,) not in keys:
                    raise MissingSibling(key, key[:-1] + (i,))
        lam: dict[Key, int] = {k: 0 for k in keys}
        lam[()] = 0
        for key in keys:
            parent = key[:-1]
            lam[parent] = max(lam[parent], key[-1])
        self.keys = keys
        self._lam = lam
        self.top = lam[()]
        self.depth = max(len(k) for k in keys)

    def lam(self, key: Key = ()) -> int:
        return self._lam[key]

    def children(self, key: Key) -> list[Key]:
        return [key + (j,) for j in range(1, self._lam[key] + 1)]

    def sorted_keys(self) -> list[Key]:
        return sorted(self.keys)

    def count_by_length(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for k in self.keys:
            counts[len(k)] = counts.get(len(k), 0) + 1
        return counts

    def __contains__(self, key) -> bool:
        return tuple(key) in self.keys

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other) -> bool:
        return isinstance(other, CompleteBase) and self.keys == other.keys

    def __hash__(self) -> int:
        return hash(self.keys)

    def __repr__(self) -> str:
        return f"CompleteBase({[format_key(k) for k in self.sorted_keys()]})"


def validate_complete(keys: Iterable[Key]) -> CompleteBase:
    return CompleteBase(keys)


class FeasibleSet:
    """A validated feasible set ``L`` with base ``V`` and markers ``rho``, ``sigma``.

    ``rho`` is only meaningful for keys of length at least 2; ``rho_of`` returns
    0 for length-1 keys, which makes the two parity clauses a single rule.
    Construction raises a :class:`FeasibleError` subclass naming the first
    violated condition.
    """

    __slots__ = ("base", "_rho", "_sigma", "_elements", "_parity", "_ends")

    def __init__(self, base: CompleteBase | Iterable[Key], rho: Mapping[Key, int],
                 sigma: Mapping[Key, int]):
        if not isinstance(base, CompleteBase):
            base = CompleteBase(base)
        self.base = base
        rho = {tuple(k): v for k, v in rho.items()}
        sigma = {tuple(k): v for k, v in sigma.items()}
        for key in list(rho) + list(sigma):
            if key not in base:
                raise RhoSigmaOutOfRange(key, "key is not in the base")
        for key in base.sorted_keys():
            lam = base.lam(key)
            if key not in sigma:
                raise RhoSigmaOutOfRange(key, "sigma is missing")
            s = sigma[key]
            if len(key) == 1:
                if key in rho:
                    raise RhoSigmaOutOfRange(key, "rho is undefined for length-1 keys")
                if not (isinstance(s, int) and 0 <= s <= lam):
                    raise RhoSigmaOutOfRange(key, f"need 0 <= sigma={s} <= lambda={lam}")
            else:
                if key not in rho:
                    raise RhoSigmaOutOfRange(key, "rho is missing")
                r = rho[key]
                if not (isinstance(r, int) and isinstance(s, int) and 0 <= r <= s <= lam):
                    raise RhoSigmaOutOfRange(
                        key, f"need 0 <= rho={r} <= sigma={s} <= lambda={lam}")
        self._rho = rho
        self._sigma = sigma

        t = base.top
        if all(base.lam((i,)) == 0 for i in range(1, t + 1)):
            raise NoLengthTwoKey()
        for i in range(1, t + 1):
            nxt = 1 if i == t else i + 1
            if sigma[(i,)] == base.lam((i,)) and sigma[(nxt,)] == 0:
                raise ConditionIII(i, nxt, base.lam((i,)))
        for key in base.sorted_keys():
            if len(key) < 2 or base.lam(key) != 1:
                continue
            child = key + (1,)
            if (rho[key] == 0 and sigma[key] == 1 and rho[child] == 0
                    and sigma[child] == base.lam(child)):
                raise ConditionIV(key)

        elements = []
        for key in base.keys:
            lam = base.lam(key)
            elements.append(Element(key, Third(3 * lam + 3)))
            elements.append(Element(key, Third(3 * sigma[key] + 2)))
            if len(key) >= 2:
                elements.append(Element(key, Third(0)))
                elements.append(Element(key, Third(3 * rho[key] + 1)))
        self._elements = tuple(sorted(elements, key=_lex))
        self._parity = None
        self._ends = None

    # accessors
    def lam(self, key: Key = ()) -> int:
        return self.base.lam(key)

    def rho_of(self, key: Key) -> int:
        return self._rho.get(key, 0)

    def sigma_of(self, key: Key) -> int:
        return self._sigma[key]

    @property
    def rho(self) -> dict[Key, int]:
        return dict(self._rho)

    @property
    def sigma(self) -> dict[Key, int]:
        return dict(self._sigma)

    @property
    def t(self) -> int:
        return self.base.top

    @property
    def n(self) -> int:
        return self.base.depth

    @property
    def elements(self) -> tuple[Element, ...]:
        """Elements in lexicographic order."""
        return self._elements

    def elements_of(self, key: Key) -> list[Element]:
        return [e for e in self._elements if e.key == key]

    def sep_element(self, key: Key) -> Element:
        """``(v, lambda(v)+1)``: the upper mark of the separatrix attached to ``v``."""
        return Element(key, Third(3 * self.lam(key) + 3))

    def rep_element(self, key: Key) -> Element:
        """``(v, sigma(v)+2/3)``: the upper mark of the representative of ``v``."""
        return Element(key, Third(3 * self._sigma[key] + 2))

    def parity(self) -> dict[Key, Parity]:
        if self._parity is None:
            par: dict[Key, Parity] = {}
            for key in sorted(self.base.keys, key=len):
                if len(key) == 1:
                    par[key] = Parity.EVEN
                    continue
                parent, j = key[:-1], key[-1]
                same = self.rho_of(parent) < j <= self._sigma[parent]
                par[key] = par[parent] if same else par[parent].flipped()
            self._parity = par
        return dict(self._parity)

    def classify_ends(self) -> dict[Element, EndKind]:
        if self._ends is None:
            par = self.parity()
            ends = {}
            for e in self._elements:
                v, h = e.key, e.last.numerator
                lam, r, s = self.lam(v), self.rho_of(v), self._sigma[v]
                if len(v) == 1:
                    ends[e] = EndKind.OMEGA
                elif par[v] is Parity.EVEN:
                    ends[e] = EndKind.ALPHA if h in (0, 3 * r + 1) else EndKind.OMEGA
                else:
                    ends[e] = EndKind.ALPHA if h in (3 * lam + 3, 3 * s + 2) else EndKind.OMEGA
            self._ends = ends
        return dict(self._ends)

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, item) -> bool:
        return item in self._elements

    def _state(self):
        return (self.base.keys, frozenset(self._rho.items()), frozenset(self._sigma.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, FeasibleSet) and self._state() == other._state()

    def __hash__(self) -> int:
        return hash(self._state())

    def __repr__(self) -> str:
        return "FeasibleSet{" + ", ".join(str(e) for e in self._elements) + "}"


def validate_feasible(base: CompleteBase | Iterable[Key], rho: Mapping[Key, int],
                      sigma: Mapping[Key, int]) -> FeasibleSet:
    return FeasibleSet(base, rho, sigma)


def feasible_from_elements(elements: Iterable[Element | str]) -> FeasibleSet:
    """Recover ``(V, rho, sigma)`` from an explicit element list and validate it.

    Raises :class:`ElementMismatch` if the list does not have the shape of
    conditions (i)-(ii), and the usual validation errors otherwise.
    """
    groups: dict[Key, list[int]] = {}
    for e in elements:
        if isinstance(e, str):
            e = Element.parse(e)
        groups.setdefault(e.key, []).append(e.last.numerator)
    base = CompleteBase(groups)
    rho: dict[Key, int] = {}
    sigma: dict[Key, int] = {}
    for key, nums in groups.items():
        nums = sorted(nums)
        lam = base.lam(key)
        ints = [h for h in nums if h % 3 == 0]
        ones = [h for h in nums if h % 3 == 1]
        twos = [h for h in nums if h % 3 == 2]
        if len(key) == 1:
            if len(nums) != 2 or ints != [3 * lam + 3] or len(twos) != 1:
                raise ElementMismatch(f"{format_key(key)} must own (v,{lam + 1}) and one (v,s+2/3)")
        else:
            if len(nums) != 4 or ints != [0, 3 * lam + 3] or len(ones) != 1 or len(twos) != 1:
                raise ElementMismatch(
                    f"{format_key(key)} must own (v,0), (v,{lam + 1}), (v,r+1/3), (v,s+2/3)")
            rho[key] = (ones[0] - 1) // 3
        sigma[key] = (twos[0] - 2) // 3
    result = FeasibleSet(base, rho, sigma)
    given = sorted((Element(k, Third(h)) for k, hs in groups.items() for h in hs), key=_lex)
    if tuple(given) != result.elements:
        raise ElementMismatch("element list does not match the derived elements")
    return result


def parity_map(L: FeasibleSet) -> dict[Key, Parity]:
    return L.parity()


def classify_ends(L: FeasibleSet) -> dict[Element, EndKind]:
    return L.classify_ends()


# JSON: keys are comma-joined integers, element tails are numerators over 3.

def feasible_to_dict(L: FeasibleSet) -> dict:
    join = lambda k: ",".join(map(str, k))  # noqa: E731
    return {
        "base": [list(k) for k in L.base.sorted_keys()],
        "rho": {join(k): L.rho_of(k) for k in L.base.sorted_keys() if len(k) >= 2},
        "sigma": {join(k): L.sigma_of(k) for k in L.base.sorted_keys()},
        "elements": [[list(e.key), e.last.numerator] for e in L.elements],
    }


def feasible_from_dict(data: Mapping) -> FeasibleSet:
    try:
        base = [tuple(int(x) for x in k) for k in data["base"]]
        rho = {parse_key(k): int(v) for k, v in data.get("rho", {}).items()}
        sigma = {parse_key(k): int(v) for k, v in data["sigma"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise FeasibleError(f"malformed feasible-set document: {exc}") from None
    L = FeasibleSet(base, rho, sigma)
    if "elements" in data:
        try:
            listed = sorted((Element(tuple(k), Third(int(h))) for k, h in data["elements"]),
                            key=_lex)
        except (TypeError, ValueError) as exc:
            raise FeasibleError(f"malformed element list: {exc}") from None
        if tuple(listed) != L.elements:
            raise ElementMismatch("listed elements disagree with base/rho/sigma")
    return L


def dumps_feasible(L: FeasibleSet) -> str:
    return json.dumps(feasible_to_dict(L), indent=2, sort_keys=True)


def loads_feasible(text: str) -> FeasibleSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FeasibleError(f"invalid JSON at position {exc.pos}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise FeasibleError("feasible-set document must be a JSON object")
    return feasible_from_dict(data)


def _forests(size: int) -> list[tuple]:
    """All ordered forests with exactly ``size`` nodes; a tree is its tuple of subtrees."""
    if size == 0:
        return [()]
    out = []
    for root_size in range(1, size + 1):
        for children in _forests(root_size - 1):
            for rest in _forests(size - root_size):
                out.append((children,) + rest)
    return out


def _forest_keys(forest: tuple, prefix: Key = ()) -> list[Key]:
    keys = []
    for i, children in enumerate(forest, start=1):
        key = prefix + (i,)
        keys.append(key)
        keys += _forest_keys(children, key)
    return keys


def enumerate_bases(max_keys: int) -> list[CompleteBase]:
    """Every complete base with at most ``max_keys`` vectors."""
    return [CompleteBase(_forest_keys(f)) for size in range(1, max_keys + 1)
            for f in _forests(size)]


def enumerate_feasible_sets(max_keys: int) -> list[FeasibleSet]:
    """Every feasible set whose base has at most ``max_keys`` vectors."""
    out = []
    for base in enumerate_bases(max_keys):
        keys = base.sorted_keys()
        deep = [k for k in keys if len(k) >= 2]
        sigma_ranges = [range(base.lam(k) + 1) for k in keys]
        for sig in itertools.product(*sigma_ranges):
            sigma = dict(zip(keys, sig))
            for rh in itertools.product(*(range(sigma[k] + 1) for k in deep)):
                try:
                    out.append(FeasibleSet(base, dict(zip(deep, rh)), sigma))
                except FeasibleError:
                    pass
    return out
