"""Straight-line programs: acyclic grammars that derive exactly one word.

A rule head is a variable; every other token in a right-hand side is a
terminal.  Lengths, letter counts and positions are Python integers, so
programs deriving words of length ``4**100`` are handled exactly.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from itertools import count as _count
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .words import PAD, GenAlphabet, Word, WordError, prime

DEFAULT_EXPAND_LIMIT = 10**8


class SlpError(ValueError):
    """Structural problem with a program (cycle, undefined start, ...)."""


class SlpCycleError(SlpError):
    def __init__(self, variable: str):
        super().__init__(f"cycle through variable {variable!r}")
        self.variable = variable


class ExpansionLimitError(SlpError):
    def __init__(self, length: int, limit: int):
        super().__init__(f"derived word has length {length}, above the expansion limit {limit}")
        self.length = length
        self.limit = limit


class OutOfRange(IndexError):
    """Position outside the derived word (the distinguished answer of ``at``)."""


def expand_limit() -> int:
    raw = os.environ.get("GWP_EXPAND_LIMIT")
    if raw:
        return int(raw)
    return DEFAULT_EXPAND_LIMIT


class Slp:
    """An immutable straight-line program with cached length tables."""

    __slots__ = ("rules", "start", "order", "_len", "_prefix", "_counts")

    def __init__(self, rules: Mapping[str, Sequence[str]], start: str):
        self.rules: Dict[str, Tuple[str, ...]] = {v: tuple(r) for v, r in rules.items()}
        self.start = start
        if start not in self.rules:
            raise SlpError(f"start variable {start!r} has no rule")
        self.order = self._topological_order()
        lens: Dict[str, int] = {}
        prefix: Dict[str, Tuple[int, ...]] = {}
        rules_ = self.rules
        for v in self.order:
            acc = 0
            pre = [0]
            for x in rules_[v]:
                acc += lens[x] if x in rules_ else 1
                pre.append(acc)
            lens[v] = acc
            prefix[v] = tuple(pre)
        self._len = lens
        self._prefix = prefix
        self._counts: Optional[Dict[str, Dict[str, int]]] = None

    def _topological_order(self) -> List[str]:
        """Children before parents; only variables reachable from start."""
        rules = self.rules
        state: Dict[str, int] = {}
        order: List[str] = []
        stack = [(self.start, iter(rules[self.start]))]
        state[self.start] = 1
        while stack:
            v, it = stack[-1]
            for x in it:
                if x not in rules:
                    continue
                s = state.get(x)
                if s == 1:
                    raise SlpCycleError(x)
                if s is None:
                    state[x] = 1
                    stack.append((x, iter(rules[x])))
                    break
            else:
                stack.pop()
                state[v] = 2
                order.append(v)
        return order

    # -- basic queries -------------------------------------------------

    def is_variable(self, x: str) -> bool:
        return x in self.rules

    @property
    def size(self) -> int:
        """Sum of right-hand side lengths over reachable variables."""
        return sum(len(self.rules[v]) for v in self.order)

    def length(self, symbol: Optional[str] = None) -> int:
        if symbol is None:
            symbol = self.start
        if symbol in self.rules:
            return self._len[symbol]
        return 1

    def terminals(self) -> List[str]:
        seen: Dict[str, None] = {}
        for v in self.order:
            for x in self.rules[v]:
                if x not in self.rules:
                    seen.setdefault(x)
        return list(seen)

    def _count_table(self) -> Dict[str, Dict[str, int]]:
        if self._counts is None:
            table: Dict[str, Dict[str, int]] = {}
            rules = self.rules
            for v in self.order:
                c: Dict[str, int] = {}
                for x in rules[v]:
                    if x in rules:
                        for a, k in table[x].items():
                            c[a] = c.get(a, 0) + k
                    else:
                        c[x] = c.get(x, 0) + 1
                table[v] = c
            self._counts = table
        return self._counts

    def count(self, letter: str, symbol: Optional[str] = None) -> int:
        if symbol is None:
            symbol = self.start
        if symbol not in self.rules:
            return int(symbol == letter)
        return self._count_table()[symbol].get(letter, 0)

    def depth(self) -> int:
        d: Dict[str, int] = {}
        for v in self.order:
            d[v] = 1 + max((d[x] for x in self.rules[v] if x in self.rules), default=0)
        return d[self.start]

    def at(self, p: int, symbol: Optional[str] = None) -> str:
        """Letter at 0-based position ``p`` by descending cached lengths."""
        v = self.start if symbol is None else symbol
        if not 0 <= p < self.length(v):
            raise OutOfRange(f"position {p} outside [0, {self.length(v)})")
        rules, prefix = self.rules, self._prefix
        while v in rules:
            pre = prefix[v]
            k = bisect_right(pre, p) - 1
            p -= pre[k]
            v = rules[v][k]
        return v

    # -- expansion -----------------------------------------------------

    def expand(self, limit: Optional[int] = None, symbol: Optional[str] = None) -> Word:
        v = self.start if symbol is None else symbol
        if limit is None:
            limit = expand_limit()
        n = self.length(v)
        if n > limit:
            raise ExpansionLimitError(n, limit)
        if v not in self.rules:
            return (v,)
        rules = self.rules
        memo: Dict[str, Tuple[str, ...]] = {}
        for u in self.order:
            if self._len[u] <= 4096:
                memo[u] = tuple(y for x in rules[u] for y in (memo[x] if x in rules else (x,)))
        if v in memo:
            return memo[v]
        out: List[str] = []
        stack = [iter(rules[v])]
        while stack:
            for x in stack[-1]:
                m = memo.get(x)
                if m is not None:
                    out.extend(m)
                elif x in rules:
                    stack.append(iter(rules[x]))
                    break
                else:
                    out.append(x)
            else:
                stack.pop()
        return tuple(out)

    # -- text format ---------------------------------------------------

    def to_text(self) -> str:
        lines = [f"start {self.start}"]
        for v in reversed(self.order):
            lines.append(f"{v} -> {' '.join(self.rules[v])}".rstrip())
        return "\n".join(lines) + "\n"

    def pruned(self) -> "Slp":
        return Slp({v: self.rules[v] for v in self.order}, self.start)

    def __repr__(self) -> str:
        return f"Slp(start={self.start!r}, variables={len(self.order)}, size={self.size})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Slp):
            return NotImplemented
        return self.start == other.start and self.rules == other.rules

    def __hash__(self):
        return hash((self.start, tuple(sorted(self.rules.items()))))


def parse_slp(text: str) -> Slp:
    """Read the line format ``start X`` / ``X -> tok tok ...``."""
    start = None
    rules: Dict[str, Tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if start is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "start":
                raise SlpError(f"line {lineno}: expected 'start <Var>'")
            start = parts[1]
            continue
        if "->" not in line:
            raise SlpError(f"line {lineno}: expected '<Var> -> ...'")
        head, rhs = line.split("->", 1)
        head = head.strip()
        if not head or len(head.split()) != 1:
            raise SlpError(f"line {lineno}: bad rule head")
        if head in rules:
            raise SlpError(f"line {lineno}: variable {head!r} defined twice")
        rules[head] = tuple(rhs.split())
    if start is None:
        raise SlpError("missing 'start' line")
    return Slp(rules, start)


# -- construction helpers ------------------------------------------------


class SlpBuilder:
    """Accumulates fresh rules; variable names start with ``_`` plus a tag."""

    def __init__(self, tag: str = ""):
        self.rules: Dict[str, Tuple[str, ...]] = {}
        self._ids = _count()
        self.tag = tag

    def fresh(self, hint: str = "") -> str:
        return f"_{self.tag}{hint}{next(self._ids)}"

    def add(self, rhs: Iterable[str], hint: str = "") -> str:
        name = self.fresh(hint)
        self.rules[name] = tuple(rhs)
        return name

    def power(self, symbols: Sequence[str], e: int, hint: str = "p") -> List[str]:
        """Symbols deriving ``symbols**e`` using binary doubling."""
        if e < 0:
            raise SlpError("negative exponent; invert the base first")
        if e == 0 or not symbols:
            return []
        base = symbols[0] if len(symbols) == 1 else self.add(symbols, hint)
        if e == 1:
            return [base]
        parts: List[str] = []
        cur = base
        while True:
            if e & 1:
                parts.append(cur)
            e >>= 1
            if not e:
                break
            cur = self.add((cur, cur), hint)
        return parts

    def embed(self, g: Slp, subst: Optional[Mapping[str, Sequence[str]]] = None,
              hint: str = "v") -> str:
        """Copy ``g`` with fresh variable names; terminals mapped by ``subst``."""
        names = {v: self.fresh(hint) for v in g.order}
        for v in g.order:
            rhs: List[str] = []
            for x in g.rules[v]:
                if x in names:
                    rhs.append(names[x])
                elif subst is not None and x in subst:
                    rhs.extend(subst[x])
                else:
                    rhs.append(x)
            self.rules[names[v]] = tuple(rhs)
        return names[g.start]

    def build(self, start: str) -> Slp:
        return Slp(self.rules, start).pruned()


def slp_from_word(w: Sequence[str]) -> Slp:
    return Slp({"S": tuple(w)}, "S")


def slp_validate(g: Slp) -> None:
    """Programs are validated on construction; this re-checks the invariants."""
    Slp(g.rules, g.start)


def slp_expand(g: Slp, limit: Optional[int] = None) -> Word:
    return g.expand(limit)


def slp_length(g: Slp) -> int:
    return g.length()


def slp_count(g: Slp, letter: str) -> int:
    return g.count(letter)


def slp_at(g: Slp, p: int) -> str:
    return g.at(p)


def slp_substring(g: Slp, p: int, q: int) -> Slp:
    """Program for ``val(g)[p..q]`` (both ends inclusive)."""
    n = g.length()
    if not 0 <= p <= q < n:
        raise OutOfRange(f"range [{p}, {q}] invalid for length {n}")
    b = SlpBuilder("x")
    rules, prefix = g.rules, g._prefix
    suffix_memo: Dict[Tuple[str, int], List[str]] = {}
    prefix_memo: Dict[Tuple[str, int], List[str]] = {}

    def suffix(v: str, i: int) -> List[str]:
        """Symbols deriving val(v)[i:] (0 < i < len(v))."""
        if i == 0:
            return [v]
        key = (v, i)
        if key in suffix_memo:
            return suffix_memo[key]
        pre = prefix[v]
        k = bisect_right(pre, i) - 1
        out = suffix(rules[v][k], i - pre[k]) + list(rules[v][k + 1:])
        res = [b.add(out, "s")] if len(out) > 1 else out
        suffix_memo[key] = res
        return res

    def prefix_of(v: str, j: int) -> List[str]:
        """Symbols deriving val(v)[:j] (0 < j <= len(v))."""
        if j == g.length(v):
            return [v]
        key = (v, j)
        if key in prefix_memo:
            return prefix_memo[key]
        pre = prefix[v]
        k = bisect_right(pre, j - 1) - 1
        out = list(rules[v][:k]) + prefix_of(rules[v][k], j - pre[k])
        res = [b.add(out, "q")] if len(out) > 1 else out
        prefix_memo[key] = res
        return res

    v, lo, hi = g.start, p, q + 1
    while True:
        if v not in rules:
            body = [v]
            break
        pre = prefix[v]
        k1 = bisect_right(pre, lo) - 1
        k2 = bisect_right(pre, hi - 1) - 1
        if k1 == k2:
            lo -= pre[k1]
            hi -= pre[k1]
            v = rules[v][k1]
            continue
        left = rules[v][k1]
        right = rules[v][k2]
        body = (suffix(left, lo - pre[k1]) + list(rules[v][k1 + 1:k2])
                + prefix_of(right, hi - pre[k2]))
        break
    for u in g.order:
        b.rules.setdefault(u, rules[u])
    start = b.add(body, "S")
    return b.build(start)


def slp_invert(g: Slp, alphabet: Optional[GenAlphabet] = None) -> Slp:
    """Reverse every right-hand side and invert every terminal."""
    inv: Callable[[str], str] = alphabet.inverse if alphabet is not None else prime
    rules = g.rules
    new = {v: tuple(x if x in rules else inv(x) for x in reversed(rules[v])) for v in g.order}
    return Slp(new, g.start)


def slp_power(w: Sequence[str], e: int) -> Slp:
    """Program for ``w`` repeated ``e`` times, of size ``O(|w| + log e)``."""
    b = SlpBuilder()
    parts = b.power(tuple(w), e)
    if len(parts) == 1 and parts[0] in b.rules:
        return b.build(parts[0])
    return b.build(b.add(parts, "S"))


def slp_concat(*gs: Slp) -> Slp:
    b = SlpBuilder("c")
    starts = [b.embed(g) for g in gs]
    return b.build(b.add(starts, "S"))


def slp_substitute(g: Slp, images: Mapping[str, Sequence[str]]) -> Slp:
    """Apply a letter-to-word morphism to every terminal."""
    b = SlpBuilder("m")
    for x in g.terminals():
        if x not in images:
            raise WordError(f"letter {x!r} has no image")
    return b.build(b.embed(g, images))


def slp_morphism_tower(a0: str, phis: Sequence[Mapping[str, Sequence[str]]]) -> Slp:
    """Program for ``phis[0](phis[1](... phis[-1](a0) ...))``.

    One variable layer per morphism: the variable for letter ``c`` at layer
    ``k`` derives ``phis[0](...phis[k-1](c))``.
    """
    rules: Dict[str, Tuple[str, ...]] = {}
    names: Dict[Tuple[int, str], str] = {}

    def var(k: int, c: str) -> str:
        if k == 0:
            return c
        key = (k, c)
        if key in names:
            return names[key]
        phi = phis[k - 1]
        if c not in phi:
            raise WordError(f"letter {c!r} has no image under morphism {k}")
        name = f"_U{k}_{len(names)}"
        names[key] = name
        rules[name] = tuple(var(k - 1, y) for y in phi[c])
        return name

    # iterative build so long towers do not hit the recursion limit
    n = len(phis)
    pending = {a0}
    layers: List[set] = [pending]
    for k in range(n, 0, -1):
        nxt = set()
        for c in layers[-1]:
            if c not in phis[k - 1]:
                raise WordError(f"letter {c!r} has no image under morphism {k}")
            nxt.update(phis[k - 1][c])
        layers.append(nxt)
    for k in range(1, n + 1):
        for c in sorted(layers[n - k]):
            var(k, c)
    top = var(n, a0)
    if n == 0:
        return Slp({"S": (a0,)}, "S")
    return Slp(rules, top)


def slp_size_bound_holds(g: Slp) -> bool:
    """``|val(g)| <= 3**(|g|/3)``, compared exactly as ``len**3 <= 3**|g|``."""
    return g.length() ** 3 <= 3 ** g.size
