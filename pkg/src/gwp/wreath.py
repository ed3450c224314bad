"""Restricted wreath products ``G wr Z`` and ``G wr Z/t``.

An element is a shift together with a finitely supported map from
positions to ``G``.  Reading a word left to right, a base letter read when
the shift letters so far sum to ``e`` multiplies position ``-e`` on the
right.  Products follow

    (f1, s1) (f2, s2) = (f1 * (f2 moved by -s1), s1 + s2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import (Any, Dict, Hashable, Iterator, List, Mapping, Optional,
                    Sequence, Tuple)

import numpy as np

from . import grigorchuk, thompson
from .perm import PermGroupOracle
from .slp import Slp, SlpBuilder, slp_invert, slp_morphism_tower
from .words import PAD, GenAlphabet, Word, WordError, free_reduce, prime, word_inverse

DEFAULT_SUPPORT_LIMIT = 2 * 10**6
SHIFT = "t"


class SupportLimitExceeded(RuntimeError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"support of size {size} exceeds the limit {limit}")
        self.size = size
        self.limit = limit


def default_shift_letter(base_letters) -> str:
    """``t`` unless the base group already uses it (as A5 does), then ``tau``."""
    return SHIFT if SHIFT not in base_letters else "tau"


# -- base groups -------------------------------------------------------------

class BaseGroupHandle:
    """Normal tokens for a base group: ``mul``, ``inverse`` and an identity test.

    Tokens of equal group elements compare equal, except for Grigorchuk,
    where ``equal`` must be used.
    """

    alphabet: GenAlphabet
    identity: Hashable
    table: Optional[np.ndarray] = None  # Cayley table for finite groups

    def letter(self, x: str):
        raise NotImplementedError

    def mul(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def is_identity(self, g) -> bool:
        return g == self.identity

    def equal(self, g, h) -> bool:
        return self.is_identity(self.mul(g, self.inverse(h)))

    def evaluate(self, word: Sequence[str]):
        acc = self.identity
        for x in word:
            acc = self.mul(acc, self.letter(x))
        return acc

    def format(self, g) -> str:
        return str(g)


class PermHandle(BaseGroupHandle):
    """Finite permutation group; tokens are element indices (identity is 0)."""

    def __init__(self, oracle: PermGroupOracle):
        self.oracle = oracle
        self.alphabet = oracle.alphabet
        words = oracle.elements()
        self.elements = sorted(words, key=lambda p: p.images)
        self.words = [words[p] for p in self.elements]
        self.index = {p: i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        if n > 32767:
            raise ValueError("group too large for a Cayley table")
        tab = np.empty((n, n), dtype=np.int16)
        for i, p in enumerate(self.elements):
            for j, q in enumerate(self.elements):
                tab[i, j] = self.index[p * q]
        self.table = tab
        self.inverses = np.array([self.index[p.inverse()] for p in self.elements], dtype=np.int16)
        self.identity = self.index[oracle.identity]
        self._letters = {x: self.index[p] for x, p in oracle.images.items()}

    def letter(self, x: str) -> int:
        try:
            return self._letters[x]
        except KeyError:
            raise WordError(f"letter {x!r} not in base alphabet") from None

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inverse(self, g: int) -> int:
        return int(self.inverses[g])

    def format(self, g: int) -> str:
        return str(self.elements[g])


class FreeHandle(BaseGroupHandle):
    """Free group; tokens are freely reduced words."""

    def __init__(self, alphabet: GenAlphabet):
        self.alphabet = alphabet
        self.identity = ()

    def letter(self, x: str) -> Word:
        self.alphabet.check((x,))
        return () if x == PAD else (x,)

    def mul(self, g: Word, h: Word) -> Word:
        return free_reduce(g + h, self.alphabet)

    def inverse(self, g: Word) -> Word:
        return word_inverse(g, self.alphabet)

    def format(self, g: Word) -> str:
        return " ".join(g) or "1"


class ThompsonHandle(BaseGroupHandle):
    """Thompson's F; tokens are canonical PL maps.

    ``letter_words`` may rename base letters to words over x0, x1 (used to
    model a subgroup such as the copy of F inside F).
    """

    def __init__(self, letter_words: Optional[Mapping[str, Sequence[str]]] = None):
        if letter_words is None:
            self.alphabet = thompson.ALPHABET
            self._maps = {x: thompson.thompson_eval((x,)) for x in self.alphabet.letters}
        else:
            gens = [x for x in letter_words if x != PAD and not x.endswith("'")]
            self.alphabet = GenAlphabet.from_generators(gens)
            self._maps = {PAD: thompson.PLMap.identity()}
            for x in gens:
                f = thompson.thompson_eval(tuple(letter_words[x]))
                self._maps[x] = f
                self._maps[prime(x)] = thompson.pl_invert(f)
        self.identity = thompson.PLMap.identity()

    def letter(self, x: str):
        try:
            return self._maps[x]
        except KeyError:
            raise WordError(f"letter {x!r} not in base alphabet") from None

    def mul(self, g, h):
        return thompson.pl_compose(g, h)

    def inverse(self, g):
        return thompson.pl_invert(g)

    def is_identity(self, g) -> bool:
        return g.is_identity()


class GrigorchukHandle(BaseGroupHandle):
    """Grigorchuk group; tokens are reduced words, compared via the oracle."""

    def __init__(self):
        self.alphabet = grigorchuk.ALPHABET
        self.identity = ()

    def letter(self, x: str) -> Word:
        return grigorchuk.grig_reduce((x,))

    def mul(self, g: Word, h: Word) -> Word:
        return grigorchuk.grig_reduce(g + h)

    def inverse(self, g: Word) -> Word:
        return tuple(reversed(g))

    def is_identity(self, g: Word) -> bool:
        return grigorchuk.grig_is_trivial(g)

    def format(self, g: Word) -> str:
        return " ".join(g) or "1"


# -- elements ----------------------------------------------------------------

class ArraySupport(Mapping):
    """Read-only sorted-array support used by the finite-group fast path."""

    def __init__(self, positions: np.ndarray, values: np.ndarray):
        self.positions = positions
        self.values = values

    def __getitem__(self, pos: int) -> int:
        k = int(np.searchsorted(self.positions, pos))
        if k < len(self.positions) and self.positions[k] == pos:
            return int(self.values[k])
        raise KeyError(pos)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.positions)

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class WreathElement:
    """``modulus`` is ``None`` for ``Z`` or the cyclic order ``t``."""

    modulus: Optional[int]
    shift: int
    support: Mapping[int, Any]

    def get(self, pos: int, identity):
        return self.support.get(self._canon(pos), identity)

    def _canon(self, pos: int) -> int:
        return pos if self.modulus is None else pos % self.modulus

    def is_trivial(self) -> bool:
        return self.shift == 0 and len(self.support) == 0

    def as_dict(self) -> Dict[int, Any]:
        return dict(self.support)


def _check_modulus(modulus: Optional[int]) -> None:
    if modulus is not None and modulus < 1:
        raise ValueError("modulus must be a positive integer")


def wreath_eta(w: Sequence[str], shift: str = SHIFT) -> int:
    inv = prime(shift)
    return sum(1 for x in w if x == shift) - sum(1 for x in w if x == inv)


def wreath_eval(w: Sequence[str], base: BaseGroupHandle, modulus: Optional[int] = None,
                shift: str = SHIFT) -> WreathElement:
    _check_modulus(modulus)
    shift_inv = prime(shift)
    cursor = 0
    support: Dict[int, Any] = {}
    ident = base.identity
    for x in w:
        if x == shift:
            cursor += 1
        elif x == shift_inv:
            cursor -= 1
        elif x == PAD:
            continue
        else:
            pos = -cursor if modulus is None else (-cursor) % modulus
            support[pos] = base.mul(support.get(pos, ident), base.letter(x))
    support = {p: g for p, g in support.items() if not base.is_identity(g)}
    s = cursor if modulus is None else cursor % modulus
    return WreathElement(modulus, s, support)


def wreath_mul(e1: WreathElement, e2: WreathElement, base: BaseGroupHandle) -> WreathElement:
    if e1.modulus != e2.modulus:
        raise ValueError("modulus mismatch")
    m = e1.modulus
    support = dict(e1.support)
    ident = base.identity
    for p, g in e2.support.items():
        q = p - e1.shift if m is None else (p - e1.shift) % m
        support[q] = base.mul(support.get(q, ident), g)
    support = {p: g for p, g in support.items() if not base.is_identity(g)}
    s = e1.shift + e2.shift
    return WreathElement(m, s if m is None else s % m, support)


def wreath_equal(e1: WreathElement, e2: WreathElement, base: BaseGroupHandle) -> bool:
    if e1.modulus != e2.modulus or e1.shift != e2.shift:
        return False
    keys = set(e1.support) | set(e2.support)
    ident = base.identity
    return all(base.equal(e1.support.get(k, ident), e2.support.get(k, ident)) for k in keys)


def wreath_is_trivial(w: Sequence[str], base: BaseGroupHandle, modulus: Optional[int] = None,
                      shift: str = SHIFT) -> bool:
    return wreath_eval(w, base, modulus, shift).is_trivial()


# -- compressed evaluation ---------------------------------------------------

def _merge_two(pos, val, p2, v2, table: np.ndarray):
    """Product of two sorted unique-position supports (left one first)."""
    idx = np.searchsorted(pos, p2)
    clipped = np.minimum(idx, len(pos) - 1)
    hit = pos[clipped] == p2
    val = val.copy()
    if hit.any():
        where = clipped[hit]
        val[where] = table[val[where], v2[hit]]
    miss = ~hit
    if miss.any():
        pos = np.insert(pos, idx[miss], p2[miss])
        val = np.insert(val, idx[miss], v2[miss])
    if hit.any():
        keep = val != 0
        if not keep.all():
            pos, val = pos[keep], val[keep]
    return pos, val


def _merge_arrays(parts, table: np.ndarray, modulus: Optional[int], dtype):
    """Left-to-right product of (positions, values) parts, each sorted and unique."""
    parts = [p for p in parts if len(p[0])]
    if not parts:
        return np.empty(0, np.int64), np.empty(0, dtype)
    pos, val = parts[0]
    for p2, v2 in parts[1:]:
        if not len(pos):
            pos, val = p2, v2
        elif pos[-1] < p2[0]:
            pos, val = np.concatenate([pos, p2]), np.concatenate([val, v2])
        elif p2[-1] < pos[0]:
            pos, val = np.concatenate([p2, pos]), np.concatenate([v2, val])
        else:
            pos, val = _merge_two(pos, val, p2, v2, table)
    return pos, val


def wreath_eval_slp(g: Slp, base: BaseGroupHandle, modulus: Optional[int] = None,
                    support_limit: int = DEFAULT_SUPPORT_LIMIT,
                    shift: str = SHIFT) -> WreathElement:
    """Evaluate ``val(g)`` bottom-up without expanding it.

    Each variable is summarised by its shift and support; summaries are
    dropped as soon as every parent has consumed them.
    """
    _check_modulus(modulus)
    shift_inv = prime(shift)
    rules = g.rules
    fast = base.table is not None and base.identity == 0
    dtype = np.uint8 if fast and len(base.table) <= 256 else np.int16
    table = base.table.astype(dtype) if fast else None
    remaining: Dict[str, int] = {}
    for v in g.order:
        for x in rules[v]:
            if x in rules:
                remaining[x] = remaining.get(x, 0) + 1
    summaries: Dict[str, Tuple[int, Any]] = {}

    def terminal(x: str):
        if x == shift:
            return 1, None
        if x == shift_inv:
            return -1, None
        if x == PAD:
            return 0, None
        tok = base.letter(x)
        if base.is_identity(tok):
            return 0, None
        return 0, tok

    def canon(s: int) -> int:
        return s if modulus is None else s % modulus

    for v in g.order:
        cur_shift = 0
        if fast:
            parts = []
            for x in rules[v]:
                if x in rules:
                    s, (pos, val) = summaries[x]
                    if len(pos):
                        q = pos - cur_shift
                        if modulus is not None:
                            q = np.mod(q, modulus)
                            o = np.argsort(q, kind="stable")
                            q, val = q[o], val[o]
                        parts.append((q, val))
                    remaining[x] -= 1
                    if remaining[x] == 0:
                        del summaries[x]
                else:
                    s, tok = terminal(x)
                    if tok is not None:
                        parts.append((np.array([canon(-cur_shift)], np.int64),
                                      np.array([tok], dtype)))
                cur_shift = canon(cur_shift + s)
            summary: Any = _merge_arrays(parts, table, modulus, dtype)
            size = len(summary[0])
        else:
            sup: Dict[int, Any] = {}
            ident = base.identity
            for x in rules[v]:
                if x in rules:
                    s, child = summaries[x]
                    for p, tok in child.items():
                        q = canon(p - cur_shift)
                        sup[q] = base.mul(sup.get(q, ident), tok)
                    remaining[x] -= 1
                    if remaining[x] == 0:
                        del summaries[x]
                else:
                    s, tok = terminal(x)
                    if tok is not None:
                        q = canon(-cur_shift)
                        sup[q] = base.mul(sup.get(q, ident), tok)
                cur_shift = canon(cur_shift + s)
            summary = {p: t for p, t in sup.items() if not base.is_identity(t)}
            size = len(summary)
        if size > support_limit:
            raise SupportLimitExceeded(size, support_limit)
        summaries[v] = (cur_shift, summary)

    s, summary = summaries[g.start]
    if fast:
        return WreathElement(modulus, s, ArraySupport(*summary))
    return WreathElement(modulus, s, summary)


# -- iterated embeddings -------------------------------------------------------

def phi_n_slps(phi1: Mapping[str, Sequence[str]], p: int, n: int,
               shift: str = SHIFT) -> Dict[str, Slp]:
    """Programs for the images of ``G wr Z/p**n`` inside ``G``.

    ``phi1`` maps every base letter and the shift letter into words over the
    base letters.  The shift image is ``phi1^n(t) phi1^(n-1)(t) ... phi1(t)``
    and a base letter ``g`` goes to ``phi1^n(g)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if p < 2:
        raise ValueError("p must be at least 2")
    phi = _complete_morphism(phi1, shift)
    base_letters = [x for x in phi if x not in (shift, prime(shift))]
    for x in phi:
        for y in phi[x]:
            if y not in phi or y in (shift, prime(shift)):
                raise WordError(f"image of {x!r} uses {y!r}, not a base letter")
    out: Dict[str, Slp] = {}
    for x in base_letters:
        out[x] = slp_morphism_tower(x, [phi] * n)
    # shared tower: layer k derives phi^k of each letter
    b = SlpBuilder("phi")
    layer: Dict[str, str] = {}
    prev: Dict[str, Sequence[str]] = {x: (x,) for x in phi}
    tau_layers: List[str] = []
    for k in range(1, n + 1):
        layer = {}
        for x in phi:
            rhs: List[str] = []
            for y in phi[x]:
                rhs.extend(prev[y])
            layer[x] = b.add(rhs, f"L{k}_")
        prev = {x: (layer[x],) for x in phi}
        tau_layers.append(layer[shift])
    top = b.add(list(reversed(tau_layers)), "T")
    tau = b.build(top)
    out[shift] = tau
    out[prime(shift)] = slp_invert(tau)
    return out


def _complete_morphism(phi1: Mapping[str, Sequence[str]], shift: str) -> Dict[str, Word]:
    phi: Dict[str, Word] = {}
    for x, w in phi1.items():
        phi[x] = tuple(w)
    for x in list(phi):
        xi = prime(x)
        want = word_inverse(phi[x])
        if xi in phi and x != PAD:
            if phi[xi] != want:
                raise WordError(f"image of {xi!r} is not the inverse word of the image of {x!r}")
        else:
            phi[xi] = want
    if shift not in phi:
        raise WordError(f"morphism must define the shift letter {shift!r}")
    phi.setdefault(PAD, (PAD,))
    return phi
