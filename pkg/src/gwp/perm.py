"""Finite permutation groups acting on ``{0, ..., n-1}``.

Products are read left to right: ``(p * q)(i) = q(p(i))``, so a word
``a_1 ... a_k`` acts by ``a_1`` first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .words import PAD, GenAlphabet, Word, WordError, prime


@dataclass(frozen=True, order=True)
class Permutation:
    degree: int
    images: Tuple[int, ...]

    def __post_init__(self):
        if self.degree <= 0:
            raise ValueError("degree must be positive")
        if len(self.images) != self.degree or sorted(self.images) != list(range(self.degree)):
            raise ValueError(f"not a permutation of 0..{self.degree - 1}: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(degree, tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + 1) % len(cyc)]
        return cls(degree, tuple(img))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(self.degree, tuple(o[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(self.degree, tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


class PermGroupOracle:
    """Word problem of the permutation group generated by ``generator_map``."""

    def __init__(self, generator_map: Mapping[str, Permutation]):
        gens = {x: p for x, p in generator_map.items() if x != PAD}
        if not gens:
            raise WordError("need at least one generator")
        degrees = {p.degree for p in generator_map.values()}
        if len(degrees) != 1:
            raise ValueError(f"degree mismatch among generators: {sorted(degrees)}")
        (self.degree,) = degrees
        full: Dict[str, Permutation] = {}
        for x, p in gens.items():
            full.setdefault(x, p)
            xi = prime(x)
            q = p.inverse()
            if xi in gens and gens[xi] != q:
                raise ValueError(f"generator {xi!r} is not the inverse of {x!r}")
            full.setdefault(xi, q)
        ident = Permutation.identity(self.degree)
        if PAD in generator_map and not generator_map[PAD].is_identity():
            raise ValueError("pad letter must map to the identity")
        full[PAD] = ident
        self.images = full
        self.identity = ident
        self.alphabet = GenAlphabet(tuple(full), {x: prime(x) for x in full})

    def evaluate(self, word: Sequence[str]) -> Permutation:
        img = self.images
        cur = list(range(self.degree))
        for x in word:
            try:
                p = img[x].images
            except KeyError:
                raise WordError(f"letter {x!r} not in alphabet") from None
            cur = [p[i] for i in cur]
        return Permutation(self.degree, tuple(cur))

    def is_trivial(self, word: Sequence[str]) -> bool:
        return self.evaluate(word).is_identity()

    def generators(self) -> Tuple[str, ...]:
        """Non-pad letters in alphabet order."""
        return tuple(x for x in self.alphabet.letters if x != PAD)

    def elements(self) -> Dict[Permutation, Word]:
        """All group elements, each with a shortest word (BFS, alphabet order)."""
        start = self.identity
        found: Dict[Permutation, Word] = {start: ()}
        queue = deque([start])
        gens = self.generators()
        while queue:
            g = queue.popleft()
            for x in gens:
                h = g * self.images[x]
                if h not in found:
                    found[h] = found[g] + (x,)
                    queue.append(h)
        return found


def perm_group_oracle(generator_map: Mapping[str, Permutation]) -> PermGroupOracle:
    return PermGroupOracle(generator_map)


A5_S = Permutation.from_cycles(5, (0, 1, 2, 3, 4))
A5_T = Permutation.from_cycles(5, (0, 1, 2))


@lru_cache(maxsize=None)
def a5() -> PermGroupOracle:
    """A5 generated by ``s = (0 1 2 3 4)`` and ``t = (0 1 2)``."""
    return PermGroupOracle({"s": A5_S, "t": A5_T})


def commutator(g: Permutation, h: Permutation) -> Permutation:
    return g.inverse() * h.inverse() * g * h


def is_perfect_witnessed(elements: Iterable[Permutation]) -> bool:
    """True iff every listed element is a single commutator of listed elements."""
    els = list(elements)
    comms = {commutator(g, h) for g in els for h in els}
    return all(g in comms for g in els)
