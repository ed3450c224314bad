"""Generating alphabets, words and the free group.

Words are plain tuples of string tokens.  A token ``x'`` denotes the
inverse of ``x`` and ``1`` is the padding letter, which every alphabet
contains and which is its own inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence, Tuple, runtime_checkable

PAD = "1"

Word = Tuple[str, ...]


class WordError(ValueError):
    """Raised for malformed words, unknown letters or alphabet mismatches."""


def prime(letter: str) -> str:
    """Formal inverse under the ``x'`` naming convention."""
    if letter == PAD:
        return PAD
    return letter[:-1] if letter.endswith("'") else letter + "'"


@dataclass(frozen=True)
class GenAlphabet:
    """A finite alphabet with an involution ``inv`` and the pad letter."""

    letters: Tuple[str, ...]
    inv: Mapping[str, str] = field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if PAD not in self.letters:
            raise WordError("alphabet must contain the pad letter '1'")
        if len(set(self.letters)) != len(self.letters):
            raise WordError("duplicate letters in alphabet")
        for x in self.letters:
            y = self.inv.get(x)
            if y is None or y not in self.letters or self.inv[y] != x:
                raise WordError(f"inverse map is not an involution at {x!r}")
        if self.inv[PAD] != PAD:
            raise WordError("pad letter must be self-inverse")

    @classmethod
    def from_generators(cls, gens: Iterable[str]) -> "GenAlphabet":
        """Alphabet ``S ∪ S' ∪ {1}`` with ``x'`` the inverse of ``x``."""
        letters = []
        for g in gens:
            if g == PAD or g.endswith("'"):
                raise WordError(f"bad generator name {g!r}")
            letters += [g, g + "'"]
        letters.append(PAD)
        return cls(tuple(letters), {x: prime(x) for x in letters})

    @classmethod
    def involutive(cls, gens: Iterable[str]) -> "GenAlphabet":
        """Alphabet of self-inverse generators (e.g. Grigorchuk's a, b, c, d)."""
        letters = tuple(gens) + (PAD,)
        return cls(letters, {x: x for x in letters})

    def union(self, other: "GenAlphabet") -> "GenAlphabet":
        letters = list(self.letters)
        inv = dict(self.inv)
        for x in other.letters:
            if x in inv:
                if inv[x] != other.inv[x]:
                    raise WordError(f"conflicting inverses for {x!r}")
                continue
            letters.append(x)
            inv[x] = other.inv[x]
        return GenAlphabet(tuple(letters), inv)

    def __contains__(self, letter: str) -> bool:
        return letter in self.inv

    def inverse(self, letter: str) -> str:
        try:
            return self.inv[letter]
        except KeyError:
            raise WordError(f"letter {letter!r} not in alphabet") from None

    def check(self, word: Sequence[str]) -> Word:
        inv = self.inv
        for x in word:
            if x not in inv:
                raise WordError(f"letter {x!r} not in alphabet {self.letters}")
        return tuple(word)

    def parse_token(self, token: str) -> str:
        if token in self.inv:
            return token
        # x' for a self-inverse x is accepted and means x itself
        if token.endswith("'") and token[:-1] in self.inv:
            return self.inv[token[:-1]]
        raise WordError(f"unknown letter {token!r}")


@runtime_checkable
class GroupOracle(Protocol):
    """Decision interface for the word problem of one group."""

    alphabet: GenAlphabet

    def is_trivial(self, word: Sequence[str]) -> bool: ...


def word_inverse(w: Sequence[str], alphabet: GenAlphabet | None = None) -> Word:
    """``(a_1 ... a_n)^-1 = a_n^-1 ... a_1^-1``."""
    if alphabet is None:
        return tuple(prime(x) for x in reversed(w))
    inv = alphabet.inverse
    return tuple(inv(x) for x in reversed(w))


def commutator_word(u: Sequence[str], v: Sequence[str],
                    alphabet: GenAlphabet | None = None) -> Word:
    """``[u, v] = u^-1 v^-1 u v`` as a concatenated word."""
    if alphabet is not None:
        alphabet.check(u)
        alphabet.check(v)
    return word_inverse(u, alphabet) + word_inverse(v, alphabet) + tuple(u) + tuple(v)


def conjugate_word(u: Sequence[str], h: Sequence[str],
                   alphabet: GenAlphabet | None = None) -> Word:
    """``u^h = h^-1 u h``."""
    return word_inverse(h, alphabet) + tuple(u) + tuple(h)


def power_word(u: Sequence[str], e: int, alphabet: GenAlphabet | None = None) -> Word:
    if e < 0:
        return word_inverse(u, alphabet) * (-e)
    return tuple(u) * e


def pad_word(w: Sequence[str], length: int) -> Word:
    if len(w) > length:
        raise WordError(f"word of length {len(w)} does not fit in {length}")
    return tuple(w) + (PAD,) * (length - len(w))


def next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def free_reduce(w: Sequence[str], alphabet: GenAlphabet | None = None) -> Word:
    """Delete pads and cancel adjacent ``x x^-1`` pairs (stack based)."""
    inv = alphabet.inv if alphabet is not None else None
    out: list[str] = []
    for x in w:
        if x == PAD:
            continue
        xi = inv[x] if inv is not None else prime(x)
        if out and out[-1] == xi:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class FreeGroupOracle:
    """Word problem of the free group on the non-pad generators."""

    def __init__(self, alphabet: GenAlphabet):
        for x in alphabet.letters:
            if x != PAD and alphabet.inv[x] == x:
                raise WordError(f"free generator {x!r} cannot be self-inverse")
        self.alphabet = alphabet

    def is_trivial(self, word: Sequence[str]) -> bool:
        self.alphabet.check(word)
        return not free_reduce(word, self.alphabet)

    def normal_form(self, word: Sequence[str]) -> Word:
        return free_reduce(word, self.alphabet)


def free_group(rank: int, prefix: str = "x") -> FreeGroupOracle:
    return FreeGroupOracle(GenAlphabet.from_generators(f"{prefix}{i}" for i in range(rank)))


def parse_word(text: str, alphabet: GenAlphabet | None = None) -> Word:
    """Parse the shared word file format (whitespace tokens, ``#`` comments)."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if alphabet is None:
        return tuple(tokens)
    return tuple(alphabet.parse_token(t) for t in tokens)


def format_word(w: Sequence[str]) -> str:
    return " ".join(w)
