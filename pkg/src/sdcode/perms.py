"""Permutations of coordinates and permutation groups.

Groups carry a deterministic Schreier-Sims stabilizer chain: base points are
chosen as the smallest moved point, orbits grow by breadth-first search in
ascending point order, and no randomization is involved, so the chain (and
everything derived from it) is reproducible run to run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import BudgetExceededError, ParseError, ValidationError


def _compose(p: tuple, q: tuple) -> tuple:
    """The permutation applying q first, then p."""
    return tuple(p[x] for x in q)


def _inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


class Permutation:
    """A permutation of {0, .., n-1} stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValidationError("not a permutation")
        self.images = images

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """self * other applies other first."""
        if self.degree != other.degree:
            raise ValidationError("degree mismatch")
        return Permutation(_compose(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(_inverse(self.images))

    def apply_bits(self, v: int) -> int:
        """Move bit i of v to bit images[i]."""
        out = 0
        while v:
            low = v & -v
            out |= 1 << self.images[low.bit_length() - 1]
            v ^= low
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return self.inverse() ** (-e)
        result = tuple(range(self.degree))
        base = self.images
        while e:
            if e & 1:
                result = _compose(base, result)
            base = _compose(base, base)
            e >>= 1
        return Permutation(result)

    def cycle_string(self) -> str:
        """1-indexed cycle notation, '()' for the identity."""
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycs)

    @classmethod
    def from_cycle_string(cls, s: str, degree: int) -> "Permutation":
        """Parse 1-indexed cycle notation like '(1 2 3)(5 8)'."""
        s = s.strip()
        images = list(range(degree))
        if s in ("", "()"):
            return cls(images)
        if not (s.startswith("(") and s.endswith(")")):
            raise ParseError(f"bad cycle notation {s!r}")
        for part in s[1:-1].split(")("):
            pts = []
            for tok in part.replace(",", " ").split():
                try:
                    val = int(tok)
                except ValueError as exc:
                    raise ParseError(f"bad cycle entry {tok!r}") from exc
                if not 1 <= val <= degree:
                    raise ParseError(f"cycle point {val} out of range 1..{degree}")
                pts.append(val - 1)
            if len(set(pts)) != len(pts):
                raise ParseError("repeated point inside a cycle")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        return cls(images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"


class AutType(NamedTuple):
    """Cycle shape of an order-p element: c p-cycles and f fixed points."""

    p: int
    c: int
    f: int


@dataclass
class _ChainLevel:
    point: int
    gens: list[tuple]
    transversal: dict[int, tuple]


class PermGroup:
    """A permutation group given by generators, with a stabilizer chain."""

    def __init__(self, degree: int, generators: Iterable[Permutation]):
        self.degree = degree
        self.generators = [
            g for g in generators if not g.is_identity()
        ]
        for g in self.generators:
            if g.degree != degree:
                raise ValidationError("generator degree mismatch")
        self._levels: list[_ChainLevel] | None = None

    # -- stabilizer chain ------------------------------------------------

    def _chain(self) -> list[_ChainLevel]:
        if self._levels is None:
            # Feeding a large redundant generating set straight into the
            # closure is expensive; keep only generators that grow the group.
            identity = tuple(range(self.degree))
            levels: list[_ChainLevel] = []
            kept: list[tuple] = []
            for g in self.generators:
                images = g.images
                if levels and _strip(images, levels, 0)[0] == identity:
                    continue
                kept.append(images)
                levels = _schreier_sims(self.degree, kept)
            self._levels = levels
        return self._levels

    def order(self) -> int:
        out = 1
        for lv in self._chain():
            out *= len(lv.transversal)
        return out

    def __contains__(self, perm: Permutation) -> bool:
        if perm.degree != self.degree:
            return False
        residue, _ = _strip(perm.images, self._chain(), 0)
        return residue == tuple(range(self.degree))

    def elements(self, budget: int = 10**6) -> Iterator[Permutation]:
        """Every group element, smallest groups only."""
        if self.order() > budget:
            raise BudgetExceededError(
                f"group order {self.order()} exceeds enumeration budget {budget}"
            )
        levels = self._chain()
        identity = tuple(range(self.degree))
        transversals = [
            [lv.transversal[pt] for pt in sorted(lv.transversal)] for lv in levels
        ]
        for combo in itertools.product(*transversals) if levels else [()]:
            g = identity
            for t in combo:
                g = _compose(g, t)
            yield Permutation(g)

    def random_element(self, rng) -> Permutation:
        levels = self._chain()
        g = tuple(range(self.degree))
        for lv in levels:
            pts = sorted(lv.transversal)
            g = _compose(g, lv.transversal[rng.choice(pts)])
        return Permutation(g)

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for pt in frontier:
                for g in self.generators:
                    img = g(pt)
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return sorted(seen)


def _strip(g: tuple, levels: list[_ChainLevel], start: int) -> tuple[tuple, int]:
    for idx in range(start, len(levels)):
        lv = levels[idx]
        img = g[lv.point]
        rep = lv.transversal.get(img)
        if rep is None:
            return g, idx
        g = _compose(_inverse(rep), g)
    return g, len(levels)


def _schreier_sims(degree: int, gens: list[tuple]) -> list[_ChainLevel]:
    """Deterministic Schreier-Sims stabilizer chain.

    Level i holds generators of the stabilizer of the first i base points.
    Levels are verified deepest-first: every Schreier generator of a level
    must sift to the identity through the deeper chain; a failed sift
    registers the residue at the deeper levels it belongs to and processing
    jumps down to the deepest one affected.  When the scan of level 0
    finishes without a jump, Schreier's lemma gives, level by level, that
    each stabilizer is generated as recorded, so transversal sizes multiply
    to the group order and sifting decides membership.
    """
    identity = tuple(range(degree))
    levels: list[_ChainLevel] = []
    gen_sets: list[set[tuple]] = []

    def new_level(point: int) -> None:
        levels.append(_ChainLevel(point, [], {point: identity}))
        gen_sets.append(set())

    def add_gen(h: tuple, lo: int, hi: int) -> None:
        for idx in range(lo, hi + 1):
            if h not in gen_sets[idx]:
                gen_sets[idx].add(h)
                levels[idx].gens.append(h)

    def rebuild_orbit(lv: _ChainLevel) -> None:
        lv.transversal = {lv.point: identity}
        frontier = [lv.point]
        while frontier:
            nxt = []
            for pt in sorted(frontier):
                t = lv.transversal[pt]
                for g in lv.gens:
                    img = g[pt]
                    if img not in lv.transversal:
                        lv.transversal[img] = _compose(g, t)
                        nxt.append(img)
            frontier = nxt

    for g in gens:
        if g == identity:
            continue
        j = 0
        while j < len(levels) and g[levels[j].point] == levels[j].point:
            j += 1
        if j == len(levels):
            new_level(min(x for x in range(degree) if g[x] != x))
        add_gen(g, 0, j)

    i = len(levels) - 1
    while i >= 0:
        lv = levels[i]
        rebuild_orbit(lv)
        jumped = False
        for pt in sorted(lv.transversal):
            t = lv.transversal[pt]
            for g in lv.gens:
                sg = _compose(_inverse(lv.transversal[g[pt]]), _compose(g, t))
                if sg == identity:
                    continue
                residue, j = _strip(sg, levels, i + 1)
                if residue == identity:
                    continue
                if j == len(levels):
                    new_level(min(x for x in range(degree) if residue[x] != x))
                add_gen(residue, i + 1, j)
                i = j
                jumped = True
                break
            if jumped:
                break
        if not jumped:
            i -= 1
    return levels


def group_order(group: PermGroup) -> int:
    return group.order()


def is_member(group: PermGroup, perm: Permutation) -> bool:
    return perm in group


def _perm_type(perm: Permutation, p: int) -> AutType:
    cycs = perm.cycles()
    if any(len(c) != p for c in cycs):
        raise ValidationError("element order is not prime p")
    c = len(cycs)
    return AutType(p, c, perm.degree - p * c)


def prime_order_types(
    group: PermGroup, p: int, element_budget: int = 10**6
) -> tuple[list[AutType], bool]:
    """Cycle shapes p-(c, f) of order-p elements.

    Small groups are enumerated exhaustively and the census is exact.  For
    larger groups the census samples generators, deterministic pseudo-random
    products, and power-ups, and is flagged as a lower bound only.
    """
    found: set[AutType] = set()
    order = group.order()
    if order <= element_budget:
        for g in group.elements(element_budget):
            if not g.is_identity() and g.order() == p:
                found.add(_perm_type(g, p))
        return sorted(found), True

    import random

    rng = random.Random(0)
    candidates: list[Permutation] = list(group.generators)
    for _ in range(512):
        candidates.append(group.random_element(rng))
    for g in candidates:
        o = g.order()
        if o % p == 0:
            h = g ** (o // p)
            if not h.is_identity():
                found.add(_perm_type(h, p))
    return sorted(found), False
