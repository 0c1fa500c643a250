"""Instance model, validation, parsing, equivalence classes, and seeded generation.

An instance is a universe of elements (each with a capacity, a multiplicity,
and a weight) plus an ordered multi-family of sets of size at most d.  The
family index is the identity of a set occurrence: the same member list may
appear many times and each occurrence must be covered separately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import MalformedInput, PartialPlurality, UnknownElement, ValidationError

FORMAT_VERSION = 1

# Multiplicity sentinel: an element with mult=None may be bought any number of
# times.  Algorithms clamp it to min(k, mult) before use.
UNBOUNDED = None


@dataclass(frozen=True)
class Element:
    id: int
    cap: int
    mult: int | None = 1
    weight: int = 1

    def __post_init__(self):
        if self.cap < 0:
            raise ValidationError(f"element {self.id}: negative capacity {self.cap}")
        if self.weight < 0:
            raise ValidationError(f"element {self.id}: negative weight {self.weight}")
        if self.mult is not None and self.mult < 1:
            raise ValidationError(f"element {self.id}: multiplicity {self.mult} < 1")


@dataclass(frozen=True)
class Instance:
    elements: tuple[Element, ...]
    family: tuple[tuple[int, ...], ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        ids = [e.id for e in self.elements]
        if len(ids) != len(set(ids)):
            raise ValidationError("duplicate element ids")
        if self.d < 1:
            raise ValidationError(f"d must be positive, got {self.d}")
        known = set(ids)
        fam = []
        for idx, members in enumerate(self.family):
            members = tuple(sorted(members))
            if not members:
                raise ValidationError(f"set {idx} is empty")
            if len(set(members)) != len(members):
                raise ValidationError(f"set {idx} repeats an element id")
            if len(members) > self.d:
                raise ValidationError(f"set {idx} has {len(members)} > d={self.d} elements")
            for x in members:
                if x not in known:
                    raise ValidationError(f"set {idx} names unknown element {x}")
            fam.append(members)
        object.__setattr__(self, "family", tuple(fam))

    @cached_property
    def by_id(self) -> dict[int, Element]:
        return {e.id: e for e in self.elements}

    def element(self, x: int) -> Element:
        try:
            return self.by_id[x]
        except KeyError:
            raise UnknownElement(f"no element with id {x}") from None

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def m(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class Solution:
    """A multiset of bought element copies (id -> positive copy count)."""

    copies: dict[int, int]

    def __post_init__(self):
        for x, c in self.copies.items():
            if not isinstance(c, int) or c < 1:
                raise ValidationError(f"copy count for element {x} must be a positive int")

    def size(self) -> int:
        return sum(self.copies.values())

    def weight(self, inst: Instance) -> int:
        return sum(inst.element(x).weight * c for x, c in self.copies.items())

    def vector(self, inst: Instance) -> tuple[int, ...]:
        """Copy counts in ascending element-id order, for lexicographic ties."""
        return tuple(self.copies.get(e.id, 0) for e in sorted(inst.elements, key=lambda e: e.id))


@dataclass(frozen=True)
class Assignment:
    """Covering map: family index -> the element id the set occurrence is charged to."""

    target: dict[int, int]

    def load(self, x: int) -> int:
        return sum(1 for v in self.target.values() if v == x)


@dataclass(frozen=True)
class EquivalenceClasses:
    """Partition of family indices by their intersection with a fixed S.

    Keys are sorted id tuples; the empty tuple collects every set disjoint
    from S.  Only realized classes are present.
    """

    by_class: dict[tuple[int, ...], tuple[int, ...]]

    def classes(self) -> list[tuple[int, ...]]:
        return sorted(self.by_class)

    def nonempty_classes(self) -> list[tuple[int, ...]]:
        return [E for E in sorted(self.by_class) if E]


def equivalence_classes(inst: Instance, S) -> EquivalenceClasses:
    """Group family indices by A ∩ S.

    Args:
        inst: the instance.
        S: iterable of element ids; must all exist in inst.

    Returns:
        EquivalenceClasses whose classes partition range(inst.m).
    """
    s_set = set(S)
    for x in s_set:
        if x not in inst.by_id:
            raise UnknownElement(f"S mentions unknown element {x}")
    buckets: dict[tuple[int, ...], list[int]] = {}
    for idx, members in enumerate(inst.family):
        E = tuple(x for x in members if x in s_set)
        buckets.setdefault(E, []).append(idx)
    return EquivalenceClasses({E: tuple(v) for E, v in buckets.items()})


def stars(classes: EquivalenceClasses, pi: dict[tuple[int, ...], int]) -> dict[int, tuple[int, ...]]:
    """Union the classes along a plurality map: A_s = U {A_E : pi(E) = s}.

    pi must cover every nonempty realized class; it may additionally map the
    empty class.  Raises PartialPlurality when a required class is missing.
    """
    for E in classes.by_class:
        if E and E not in pi:
            raise PartialPlurality(f"plurality map misses class {E}")
    out: dict[int, list[int]] = {}
    for E, idxs in classes.by_class.items():
        if E not in pi:
            continue
        out.setdefault(pi[E], []).extend(idxs)
    return {s: tuple(sorted(v)) for s, v in out.items()}


def _subset_count(n: int, d: int) -> int:
    return sum(math.comb(n, j) for j in range(1, d + 1))


def _unrank_subset(rank: int, n: int, d: int) -> tuple[int, ...]:
    """Rank order: size ascending, then lexicographic within a size."""
    for j in range(1, d + 1):
        c = math.comb(n, j)
        if rank < c:
            break
        rank -= c
    combo = []
    x = 0
    for pos in range(j):
        while True:
            block = math.comb(n - 1 - x, j - 1 - pos)
            if rank < block:
                combo.append(x)
                x += 1
                break
            rank -= block
            x += 1
    return tuple(combo)


def generate_instance(params: dict, seed: int) -> Instance:
    """Draw a random instance, deterministically for a fixed (params, seed).

    Args:
        params: dict with keys n, m, d and inclusive integer ranges
            cap_range, weight_range, mult_range (each a (lo, hi) pair).
        seed: RNG seed.

    Returns:
        An Instance with n elements and m sets, each set uniform among the
        nonempty subsets of the universe of size at most d.
    """
    n, m, d = params["n"], params["m"], params["d"]
    if n < 1 or m < 1 or d < 1:
        raise ValidationError("n, m, d must all be at least 1")
    ranges = {}
    for key in ("cap_range", "weight_range", "mult_range"):
        lo, hi = params[key]
        if lo > hi:
            raise ValidationError(f"{key} is empty")
        ranges[key] = (int(lo), int(hi))
    rng = np.random.default_rng(int(seed))
    elements = []
    for i in range(n):
        cap = int(rng.integers(ranges["cap_range"][0], ranges["cap_range"][1] + 1))
        weight = int(rng.integers(ranges["weight_range"][0], ranges["weight_range"][1] + 1))
        mult = int(rng.integers(ranges["mult_range"][0], ranges["mult_range"][1] + 1))
        elements.append(Element(id=i, cap=cap, mult=mult, weight=weight))
    total = _subset_count(n, min(d, n))
    family = []
    for _ in range(m):
        r = int(rng.integers(0, total))
        family.append(_unrank_subset(r, n, min(d, n)))
    return Instance(elements=tuple(elements), family=tuple(family), d=d)


def serialize_instance(inst: Instance) -> str:
    """Instance JSON: format, d, elements (id/cap/mult/weight), family.

    mult null means unbounded.  UTF-8, newline-terminated.
    """
    obj = {
        "format": FORMAT_VERSION,
        "d": inst.d,
        "elements": [
            {"id": e.id, "cap": e.cap, "mult": e.mult, "weight": e.weight}
            for e in inst.elements
        ],
        "family": [list(s) for s in inst.family],
    }
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize_solution(sol: Solution, asg: Assignment | None = None) -> str:
    """Solution JSON: copies keyed by element id, optional assignment by set index."""
    obj: dict = {"copies": {str(x): c for x, c in sorted(sol.copies.items())}}
    if asg is not None:
        obj["assignment"] = {str(j): x for j, x in sorted(asg.target.items())}
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def parse_solution(text: str) -> tuple[Solution, Assignment | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    _expect(isinstance(obj, dict), "top level must be an object")
    _expect("copies" in obj and isinstance(obj["copies"], dict), "missing copies object")
    copies = {}
    for key, c in obj["copies"].items():
        try:
            x = int(key)
        except ValueError:
            raise MalformedInput(f"copies key {key!r} is not an element id") from None
        _expect(isinstance(c, int), "copy counts must be integers")
        copies[x] = c
    asg = None
    if obj.get("assignment") is not None:
        _expect(isinstance(obj["assignment"], dict), "assignment must be an object")
        target = {}
        for key, x in obj["assignment"].items():
            try:
                j = int(key)
            except ValueError:
                raise MalformedInput(f"assignment key {key!r} is not a set index") from None
            _expect(isinstance(x, int), "assignment values must be element ids")
            target[j] = x
        asg = Assignment(target)
    return Solution(copies), asg


def _expect(cond: bool, msg: str):
    if not cond:
        raise MalformedInput(msg)


def parse_instance(text: str) -> Instance:
    """Parse the instance JSON format.

    Raises MalformedInput for syntax or structural problems and
    ValidationError when the described instance breaks a model invariant
    (oversized or empty sets, unknown ids, negative capacities, ...).
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    _expect(isinstance(obj, dict), "top level must be an object")
    if "format" in obj and obj["format"] != FORMAT_VERSION:
        raise ValidationError(f"unsupported format {obj['format']!r}")
    for key in ("d", "elements", "family"):
        _expect(key in obj, f"missing key {key!r}")
    _expect(isinstance(obj["d"], int), "d must be an integer")
    _expect(isinstance(obj["elements"], list), "elements must be a list")
    _expect(isinstance(obj["family"], list), "family must be a list")
    elements = []
    for ent in obj["elements"]:
        _expect(isinstance(ent, dict), "each element must be an object")
        _expect("id" in ent and "cap" in ent, "element needs id and cap")
        _expect(isinstance(ent["id"], int) and isinstance(ent["cap"], int),
                "element id and cap must be integers")
        mult = ent.get("mult", UNBOUNDED)
        _expect(mult is None or isinstance(mult, int), "mult must be an integer or null")
        _expect("weight" in ent and isinstance(ent["weight"], int),
                "element needs an integer weight")
        weight = ent["weight"]
        elements.append(Element(id=ent["id"], cap=ent["cap"], mult=mult, weight=weight))
    family = []
    for s in obj["family"]:
        _expect(isinstance(s, list) and all(isinstance(x, int) for x in s),
                "each family set must be a list of integer ids")
        family.append(tuple(s))
    return Instance(elements=tuple(elements), family=tuple(family), d=obj["d"])
