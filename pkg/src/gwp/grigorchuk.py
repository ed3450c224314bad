"""The Grigorchuk group acting on the binary rooted tree.

Words over ``a b c d`` (all involutions) act on vertices from the right,
letter by letter.  The recursion is

    a = (0 1),   b = <a, c>,   c = <a, d>,   d = <1, b>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .words import PAD, GenAlphabet, Word, WordError

ALPHABET = GenAlphabet.involutive("abcd")
LETTERS = frozenset("abcd")
BCD = frozenset("bcd")

# sections of each generator at vertex 0 and 1 ("" means trivial)
SECTION_TABLE: Dict[str, Tuple[str, str]] = {
    "a": ("", ""),
    "b": ("a", "c"),
    "c": ("a", "d"),
    "d": ("", "b"),
}
KLEIN = {
    frozenset("bc"): "d",
    frozenset("bd"): "c",
    frozenset("cd"): "b",
}
_NEXT_ON_ONE = {"b": "c", "c": "d", "d": "b"}


@dataclass(frozen=True)
class SectionPair:
    root_swap: bool
    sec0: Word
    sec1: Word


def _check(w: Sequence[str]) -> Word:
    for x in w:
        if x not in LETTERS and x != PAD:
            raise WordError(f"letter {x!r} is not a Grigorchuk generator")
    return tuple(w)


def grig_reduce(w: Sequence[str]) -> Word:
    """Free reduction for involutions plus the Klein four-group on b, c, d."""
    out: List[str] = []
    for x in _check(w):
        if x == PAD:
            continue
        while True:
            if not out:
                out.append(x)
                break
            top = out[-1]
            if top == x:
                out.pop()
                break
            if top in BCD and x in BCD:
                out.pop()
                x = KLEIN[frozenset((top, x))]
                continue
            out.append(x)
            break
    return tuple(out)


def grig_sections(w: Sequence[str]) -> SectionPair:
    swap = False
    sec = ([], [])
    for x in _check(w):
        if x == PAD:
            continue
        if x == "a":
            swap = not swap
            continue
        s0, s1 = SECTION_TABLE[x]
        # vertex y of the source is at y^swap when this letter acts
        first, second = (s1, s0) if swap else (s0, s1)
        if first:
            sec[0].append(first)
        if second:
            sec[1].append(second)
    return SectionPair(swap, tuple(sec[0]), tuple(sec[1]))


def grig_section_at(w: Sequence[str], vertex: str) -> Word:
    """The state ``w@vertex`` for a binary string vertex."""
    cur = grig_reduce(w)
    for bit in vertex:
        sp = grig_sections(cur)
        cur = grig_reduce(sp.sec1 if bit == "1" else sp.sec0)
    return cur


def _act_letter(x: str, bits: List[str]) -> None:
    if x == "a":
        if bits:
            bits[0] = "1" if bits[0] == "0" else "0"
        return
    state = x
    for i, bit in enumerate(bits):
        if bit == "1":
            state = _NEXT_ON_ONE[state]
            continue
        if state != "d" and i + 1 < len(bits):
            bits[i + 1] = "1" if bits[i + 1] == "0" else "0"
        return


def grig_act(w: Sequence[str], v: str) -> str:
    """Image of the vertex ``v`` (a binary string) under ``w``."""
    bits = list(v)
    for x in _check(w):
        if x != PAD:
            _act_letter(x, bits)
    return "".join(bits)


@lru_cache(maxsize=1 << 16)
def _is_trivial_reduced(w: Word) -> bool:
    if not w:
        return True
    if len(w) == 1:
        return False
    sp = grig_sections(w)
    if sp.root_swap:
        return False
    return (_is_trivial_reduced(grig_reduce(sp.sec0))
            and _is_trivial_reduced(grig_reduce(sp.sec1)))


def grig_is_trivial(w: Sequence[str]) -> bool:
    """Exact recursion on sections; lengths shrink after each reduction."""
    return _is_trivial_reduced(grig_reduce(w))


def ball_depth(length: int) -> int:
    """Depth used by the ball checker for a word of the given length."""
    return math.ceil(math.log2(length + 1)) + 4


# -- ball enumeration ------------------------------------------------------
# Vertices of level n are encoded as integers whose most significant bit is
# the first letter of the vertex.

_BLOCK = 4


@lru_cache(maxsize=32)
def _letter_tables(depth: int) -> Dict[str, np.ndarray]:
    n = 1 << depth
    dtype = np.int32 if depth > 15 else np.int16
    tables = {PAD: np.arange(n, dtype=dtype)}
    for x in "abcd":
        img = np.empty(n, dtype=dtype)
        for i in range(n):
            bits = list(format(i, f"0{depth}b")) if depth else []
            _act_letter(x, bits)
            img[i] = int("".join(bits), 2) if bits else 0
        tables[x] = img
    return tables


_block_cache: Dict[Tuple[int, Word], np.ndarray] = {}


def _block_table(depth: int, block: Word) -> np.ndarray:
    key = (depth, block)
    tab = _block_cache.get(key)
    if tab is None:
        letters = _letter_tables(depth)
        tab = letters[block[0]]
        for x in block[1:]:
            tab = letters[x][tab]
        if len(_block_cache) > 20000:
            _block_cache.clear()
        _block_cache[key] = tab
    return tab


def _ball_permutation(w: Word, depth: int) -> np.ndarray:
    cur = _letter_tables(depth)[PAD]
    for i in range(0, len(w), _BLOCK):
        cur = _block_table(depth, w[i:i + _BLOCK])[cur]
    return cur


def grig_fixes_ball_streaming(w: Sequence[str], depth: int) -> bool:
    """Vertex-by-vertex enumeration of ``{0,1}^depth`` in O(depth) memory."""
    w = _check(w)
    for bits in product("01", repeat=depth):
        v = "".join(bits)
        if grig_act(w, v) != v:
            return False
    return True


def grig_fixes_ball(w: Sequence[str], depth: int, streaming: bool = False) -> bool:
    """True iff ``w`` fixes every vertex of level ``depth``.

    The default path composes per-letter permutation tables of the level
    (``2**depth`` entries); ``streaming=True`` walks vertices one at a time.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if streaming or depth > 20:
        return grig_fixes_ball_streaming(w, depth)
    perm = _ball_permutation(_check(w), depth)
    return bool(np.array_equal(perm, _letter_tables(depth)[PAD]))


def grig_is_trivial_by_ball(w: Sequence[str]) -> bool:
    return grig_fixes_ball(w, ball_depth(len(w)))


class GrigorchukOracle:
    alphabet = ALPHABET

    def is_trivial(self, word: Sequence[str]) -> bool:
        return grig_is_trivial(word)

    def equal(self, u: Sequence[str], v: Sequence[str]) -> bool:
        return grig_is_trivial(tuple(u) + tuple(reversed(v)))


# -- commutator witnesses ---------------------------------------------------

X_WORD: Word = tuple("abadabad")
Y_WORD: Word = tuple("babadabac")
WITNESS_WORDS: Dict[str, Word] = {
    "x": X_WORD,
    "x'": tuple(reversed(X_WORD)),
    "y": Y_WORD,
    "y'": tuple(reversed(Y_WORD)),
}
# z_v -> (z_v0, z_v1)
WITNESS_TABLE: Dict[str, Tuple[str, str]] = {
    "x": ("x'", "y'"),
    "x'": ("y'", "x'"),
    "y": ("y", "x"),
    "y'": ("x", "y"),
}
LEAF_LENGTH = 16


def witness_symbol(v: str) -> str:
    """Run the transition table along ``v`` starting from ``x``."""
    z = "x"
    for bit in v:
        z = WITNESS_TABLE[z][bit == "1"]
    return z


def grig_sens_leaf(d: int, v: str) -> Word:
    if len(v) != d or any(b not in "01" for b in v):
        raise ValueError(f"vertex {v!r} is not a binary string of length {d}")
    w = WITNESS_WORDS[witness_symbol(v)]
    return w + (PAD,) * (LEAF_LENGTH - len(w))


def vertices(depth: int) -> Iterator[str]:
    for bits in product("01", repeat=depth):
        yield "".join(bits)
