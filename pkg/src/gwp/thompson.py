"""Thompson's group F as exact dyadic piecewise-linear maps of [0, 1].

Maps compose left to right: ``compose(f, g)`` applies ``f`` first, which
matches reading words from left to right.
"""

from __future__ import annotations

from functools import lru_cache, total_ordering
from typing import Dict, Iterable, List, Sequence, Tuple

from .words import PAD, GenAlphabet, Word, WordError, free_reduce, next_pow2, pad_word

ALPHABET = GenAlphabet.from_generators(["x0", "x1"])


@total_ordering
class DyadicRational:
    """``num / 2**exp`` with ``num`` odd unless ``exp == 0``."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        while exp and not num & 1:
            if num == 0:
                exp = 0
                break
            tz = (num & -num).bit_length() - 1
            k = min(tz, exp)
            num >>= k
            exp -= k
        self.num = num
        self.exp = exp

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        if "/" in text:
            a, b = text.split("/")
            den = int(b)
            if den <= 0 or den & (den - 1):
                raise ValueError(f"denominator of {text!r} is not a power of two")
            return cls(int(a), den.bit_length() - 1)
        return cls(int(text))

    def _align(self, other: "DyadicRational") -> Tuple[int, int, int]:
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp), e

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._align(other)
        return DyadicRational(a + b, e)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._align(other)
        return DyadicRational(a - b, e)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.num, self.exp)

    def __mul__(self, other: "DyadicRational") -> "DyadicRational":
        return DyadicRational(self.num * other.num, self.exp + other.exp)

    def scale(self, k: int) -> "DyadicRational":
        """Multiply by ``2**k``."""
        if self.num == 0:
            return self
        return DyadicRational(self.num, self.exp - k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return self.num == other.num and self.exp == other.exp

    def __lt__(self, other: "DyadicRational") -> bool:
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self):
        return hash((self.num, self.exp))

    def __repr__(self) -> str:
        return f"DyadicRational({self})"

    def __str__(self) -> str:
        return str(self.num) if self.exp == 0 else f"{self.num}/{1 << self.exp}"


ZERO = DyadicRational(0)
ONE = DyadicRational(1)


def _log2_ratio(dy: DyadicRational, dx: DyadicRational) -> int:
    """``k`` with ``dy == dx * 2**k``; raises if the ratio is not a power of 2."""
    if dy.num != dx.num:
        raise ValueError(f"slope {dy}/{dx} is not a power of two")
    return dx.exp - dy.exp


Point = Tuple[DyadicRational, DyadicRational]


class PLMap:
    """Increasing dyadic PL homeomorphism of [0, 1] in canonical form."""

    __slots__ = ("xs", "ys", "slopes")

    def __init__(self, breakpoints: Iterable[Point]):
        pts = list(breakpoints)
        if not pts or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise ValueError("breakpoints must start at (0,0) and end at (1,1)")
        xs = [pts[0][0]]
        ys = [pts[0][1]]
        slopes: List[int] = []
        for x, y in pts[1:]:
            if not (xs[-1] < x and ys[-1] < y):
                raise ValueError("breakpoints must be strictly increasing")
            k = _log2_ratio(y - ys[-1], x - xs[-1])
            if slopes and slopes[-1] == k:
                xs[-1], ys[-1] = x, y
            else:
                slopes.append(k)
                xs.append(x)
                ys.append(y)
        self.xs: Tuple[DyadicRational, ...] = tuple(xs)
        self.ys: Tuple[DyadicRational, ...] = tuple(ys)
        self.slopes: Tuple[int, ...] = tuple(slopes)

    @classmethod
    def identity(cls) -> "PLMap":
        return cls([(ZERO, ZERO), (ONE, ONE)])

    @property
    def breakpoints(self) -> List[Point]:
        return list(zip(self.xs, self.ys))

    def __call__(self, t: DyadicRational) -> DyadicRational:
        xs = self.xs
        lo, hi = 0, len(xs) - 1
        if t < ZERO or ONE < t:
            raise ValueError("argument outside [0, 1]")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] < t or xs[mid] == t:
                lo = mid
            else:
                hi = mid
        return self.ys[lo] + (t - xs[lo]).scale(self.slopes[lo])

    def is_identity(self) -> bool:
        return len(self.xs) == 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        return hash((self.xs, self.ys))

    def __repr__(self) -> str:
        return "PLMap(" + ", ".join(f"({x},{y})" for x, y in zip(self.xs, self.ys)) + ")"


def pl_compose(f: PLMap, g: PLMap) -> PLMap:
    """``f`` then ``g``: the map ``t -> g(f(t))``."""
    fx, fy, fs = f.xs, f.ys, f.slopes
    gx, gy, gs = g.xs, g.ys, g.slopes
    pts: List[Point] = [(ZERO, ZERO)]
    i = 0  # segment of f
    j = 0  # segment of g
    nf, ng = len(fs), len(gs)
    while i < nf:
        # next event: end of f segment i or a g breakpoint inside it
        fend = fy[i + 1]
        gnext = gx[j + 1]
        if gnext < fend:
            u = gnext
            x = fx[i] + (u - fy[i]).scale(-fs[i])
            pts.append((x, gy[j + 1]))
            j += 1
        else:
            u = fend
            x = fx[i + 1]
            z = gy[j] + (u - gx[j]).scale(gs[j])
            pts.append((x, z))
            i += 1
            if u == gnext:
                j += 1
    return PLMap(pts)


def pl_invert(f: PLMap) -> PLMap:
    return PLMap(zip(f.ys, f.xs))


def pl_is_identity(f: PLMap) -> bool:
    return f.is_identity()


def _d(text: str) -> DyadicRational:
    return DyadicRational.parse(text)


def thompson_generator(which: str) -> PLMap:
    if which == "x0":
        return PLMap([(ZERO, ZERO), (_d("1/4"), _d("1/2")), (_d("1/2"), _d("3/4")), (ONE, ONE)])
    if which == "x1":
        return PLMap([(ZERO, ZERO), (_d("1/2"), _d("1/2")), (_d("5/8"), _d("3/4")),
                      (_d("3/4"), _d("7/8")), (ONE, ONE)])
    raise ValueError(f"unknown generator {which!r}")


@lru_cache(maxsize=None)
def _letter_maps() -> Dict[str, PLMap]:
    x0, x1 = thompson_generator("x0"), thompson_generator("x1")
    return {"x0": x0, "x0'": pl_invert(x0), "x1": x1, "x1'": pl_invert(x1),
            PAD: PLMap.identity()}


def thompson_eval(w: Sequence[str]) -> PLMap:
    """Fold a word into its PL map (after free reduction)."""
    maps = _letter_maps()
    for x in w:
        if x not in maps:
            raise WordError(f"letter {x!r} is not a generator of F")
    w = free_reduce(w, ALPHABET)
    if len(w) <= 64:
        f = PLMap.identity()
        for x in w:
            f = pl_compose(f, maps[x])
        return f
    # balanced product keeps intermediate breakpoint counts small
    mid = len(w) // 2
    return pl_compose(thompson_eval(w[:mid]), thompson_eval(w[mid:]))


def thompson_is_trivial(w: Sequence[str]) -> bool:
    return thompson_eval(w).is_identity()


class ThompsonOracle:
    alphabet = ALPHABET

    def is_trivial(self, word: Sequence[str]) -> bool:
        return thompson_is_trivial(word)


# -- named words -------------------------------------------------------------

def inv(w: Sequence[str]) -> Word:
    return tuple(x[:-1] if x.endswith("'") else (x if x == PAD else x + "'") for x in reversed(w))


def power(w: Sequence[str], e: int) -> Word:
    return tuple(w) * e if e >= 0 else inv(w) * (-e)


X0: Word = ("x0",)
X1: Word = ("x1",)
# x_{k+1} = x_k conjugated by x0
X2: Word = inv(X0) + X1 + X0
X3: Word = power(X0, -2) + X1 + power(X0, 2)
SENS_BASE: Word = X3 + inv(X2)

RELATORS: Tuple[Word, ...] = (
    inv(X0 + inv(X1)) + inv(X2) + X0 + inv(X1) + X2,
    inv(X0 + inv(X1)) + inv(X3) + X0 + inv(X1) + X3,
)


def conjugator(v: str) -> Word:
    """``c_eps = eps``, ``c_{v0} = x1 c_v``, ``c_{v1} = x0^-1 x1 c_v``."""
    c: Word = ()
    for bit in v:
        c = (X1 + c) if bit == "0" else (inv(X0) + X1 + c)
    return c


def sens_leaf_length(d: int) -> int:
    return max(4, next_pow2(4 * d + 8))


def thompson_sens_leaf(d: int, v: str) -> Word:
    """``c_v^-1 g c_v`` with ``g = x3 x2^-1``, padded to a uniform power of 2."""
    if len(v) != d or any(b not in "01" for b in v):
        raise ValueError(f"vertex {v!r} is not a binary string of length {d}")
    c = conjugator(v)
    return pad_word(inv(c) + SENS_BASE + c, sens_leaf_length(d))


WREATH_LEVEL_BOUND = 8
COPY_WORDS: Dict[int, Word] = {
    1: X1 + X2 + power(X1, -2),
    2: power(X1, 2) + X2 + power(X1, -3),
}


def thompson_wreath_image(gen, level_bound: int = WREATH_LEVEL_BOUND) -> Word:
    """Image in F of a generator of F wr Z.

    ``gen`` is ``"shift"`` or a pair ``(k, i)`` naming copy generator ``k``
    (1 or 2) at level ``i``.
    """
    if gen == "shift":
        return X0
    k, i = gen
    if k not in COPY_WORDS:
        raise ValueError(f"copy generator index must be 1 or 2, not {k}")
    if abs(i) > level_bound:
        raise ValueError(f"level {i} exceeds the bound {level_bound}")
    return power(X0, -i) + COPY_WORDS[k] + power(X0, i)
