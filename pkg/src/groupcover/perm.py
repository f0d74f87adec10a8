"""Permutations of {0, ..., degree-1} with cycle-notation parsing.

Cycle words are 0-based, whitespace-separated points inside parentheses,
e.g. "(0 1 2)(3 4)". Cycles in one word must be disjoint so that formatting
and parsing round-trip. The empty word "()" is the identity.
"""

from __future__ import annotations

import re
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class MalformedCycleWord(ValueError):
    pass


class Perm:
    """A permutation stored as the tuple of point images."""

    __slots__ = ("images",)

    def __init__(self, images):
        self.images = tuple(images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Perm":
        images = list(range(degree))
        seen: set[int] = set()
        for cycle in cycles:
            for point in cycle:
                if not (0 <= point < degree):
                    raise MalformedCycleWord(
                        f"point {point} out of range for degree {degree}"
                    )
                if point in seen:
                    raise MalformedCycleWord(f"point {point} repeated across cycles")
                seen.add(point)
            for i, point in enumerate(cycle):
                images[point] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    @classmethod
    def parse(cls, word: str, degree: int) -> "Perm":
        word = word.strip()
        if not word:
            raise MalformedCycleWord("empty cycle word (use '()' for the identity)")
        stripped = _CYCLE_RE.sub("", word)
        if stripped.strip():
            raise MalformedCycleWord(f"unbalanced or stray text in {word!r}")
        cycles = []
        for body in _CYCLE_RE.findall(word):
            body = body.strip()
            if not body:
                continue
            try:
                points = [int(tok) for tok in body.split()]
            except ValueError as exc:
                raise MalformedCycleWord(f"non-integer point in {word!r}") from exc
            if len(points) < 2:
                raise MalformedCycleWord(f"cycle of length < 2 in {word!r}")
            cycles.append(points)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        """Left-to-right composition: (p * q)(x) = q(p(x))."""
        im = other.images
        return Perm(im[j] for j in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g: "Perm") -> "Perm":
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, *, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths including fixed points, sorted descending."""
        lengths = [len(c) for c in self.cycles(include_fixed=True)]
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def word(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        # canonical form: each cycle starts at its minimum, cycles sorted
        parts = []
        for cyc in cycles:
            k = cyc.index(min(cyc))
            parts.append(cyc[k:] + cyc[:k])
        parts.sort()
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in parts)

    def __repr__(self) -> str:
        return f"Perm[{self.word()}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)
