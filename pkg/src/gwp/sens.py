"""Providers of balanced nested-commutator witnesses.

A provider hands out leaf words ``g_{d,v}`` of one common power-of-two
length ``L(d)`` for all ``v`` of length ``d``.  Folding the leaves by
``g_v = [g_v0, g_v1]`` must give a nontrivial element; the tests check
this rather than assume it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Protocol, Sequence, Tuple

from . import grigorchuk, thompson
from .perm import Permutation, PermGroupOracle, a5, commutator
from .words import (PAD, FreeGroupOracle, GenAlphabet, GroupOracle, Word,
                    commutator_word, next_pow2, pad_word)


class SensProvider(Protocol):
    name: str
    alphabet: GenAlphabet
    oracle: GroupOracle

    def leaf_length(self, d: int) -> int: ...

    def leaf(self, d: int, v: str) -> Word: ...


def _check_vertex(d: int, v: str) -> None:
    if d < 0 or len(v) != d or any(b not in "01" for b in v):
        raise ValueError(f"vertex {v!r} is not a binary string of length {d}")


def bin_value(v: str) -> int:
    return int(v, 2) if v else 0


class FiniteGroupSens:
    """Witnesses in a finite perfect group from a fixed commutator table.

    Every element ``g != 1`` is written as ``[h1, h2]`` with the pair chosen
    lexicographically least in the element order; the root element is the
    first generator.
    """

    def __init__(self, oracle: PermGroupOracle, name: str = "a5"):
        self.name = name
        self.oracle = oracle
        self.alphabet = oracle.alphabet
        words = oracle.elements()
        self.elements: List[Permutation] = sorted(words, key=lambda p: p.images)
        self.words: Dict[Permutation, Word] = words
        self.table: Dict[Permutation, Tuple[Permutation, Permutation]] = {}
        for g in self.elements:
            for h1 in self.elements:
                found = False
                for h2 in self.elements:
                    if commutator(h1, h2) == g:
                        self.table[g] = (h1, h2)
                        found = True
                        break
                if found:
                    break
        missing = [g for g in self.elements if g not in self.table]
        if missing:
            raise ValueError(f"{len(missing)} elements are not commutators; group not usable")
        self.root = oracle.images[oracle.generators()[0]]
        self._length = next_pow2(max(len(w) for w in words.values()))

    def element_at(self, v: str) -> Permutation:
        g = self.root
        for bit in v:
            g = self.table[g][bit == "1"]
        return g

    def leaf_length(self, d: int) -> int:
        return self._length

    def leaf(self, d: int, v: str) -> Word:
        _check_vertex(d, v)
        return pad_word(self.words[self.element_at(v)], self._length)


class FreeSens:
    """Free group of rank 2: ``g_v = x0^-bin(v) x1 x0^bin(v)``."""

    name = "f2"

    def __init__(self):
        self.alphabet = GenAlphabet.from_generators(["x0", "x1"])
        self.oracle = FreeGroupOracle(self.alphabet)

    def leaf_length(self, d: int) -> int:
        return next_pow2(2 * 2**d + 1)

    def leaf(self, d: int, v: str) -> Word:
        _check_vertex(d, v)
        k = bin_value(v)
        return pad_word(("x0'",) * k + ("x1",) + ("x0",) * k, self.leaf_length(d))


class Free3Sens:
    """Free group of rank 3: ``g_v = x_(bin(v) mod 3)``, one letter per leaf."""

    name = "f3"

    def __init__(self):
        self.alphabet = GenAlphabet.from_generators(["x0", "x1", "x2"])
        self.oracle = FreeGroupOracle(self.alphabet)

    def leaf_length(self, d: int) -> int:
        return 1

    def leaf(self, d: int, v: str) -> Word:
        _check_vertex(d, v)
        return (f"x{bin_value(v) % 3}",)


class GrigorchukSens:
    name = "grigorchuk"

    def __init__(self):
        self.alphabet = grigorchuk.ALPHABET
        self.oracle = grigorchuk.GrigorchukOracle()

    def leaf_length(self, d: int) -> int:
        return grigorchuk.LEAF_LENGTH

    def leaf(self, d: int, v: str) -> Word:
        return grigorchuk.grig_sens_leaf(d, v)


class ThompsonSens:
    name = "thompson"

    def __init__(self):
        self.alphabet = thompson.ALPHABET
        self.oracle = thompson.ThompsonOracle()

    def leaf_length(self, d: int) -> int:
        return thompson.sens_leaf_length(d)

    def leaf(self, d: int, v: str) -> Word:
        return thompson.thompson_sens_leaf(d, v)


@lru_cache(maxsize=None)
def provider(name: str) -> SensProvider:
    makers = {
        "a5": lambda: FiniteGroupSens(a5(), "a5"),
        "f2": FreeSens,
        "f3": Free3Sens,
        "grigorchuk": GrigorchukSens,
        "thompson": ThompsonSens,
    }
    if name not in makers:
        raise KeyError(f"no witness provider for group {name!r}; choose from {sorted(makers)}")
    return makers[name]()


PROVIDER_NAMES = ("a5", "f2", "f3", "grigorchuk", "thompson")


def nested_commutator(prov: SensProvider, d: int, v: str = "") -> Word:
    """Fully expanded ``g_{d,v}`` built by ``g_u = [g_u0, g_u1]``."""
    if d < 0:
        raise ValueError("depth must be non-negative")
    if len(v) == d:
        return prov.leaf(d, v)
    return commutator_word(nested_commutator(prov, d, v + "0"),
                           nested_commutator(prov, d, v + "1"), prov.alphabet)
