"""Balanced nand-tree circuits and their compilation into group programs.

A program is a list of instructions ``<j, on_one, on_zero>``; on input
``x`` it emits ``on_one`` if bit ``j`` (1-based) is set and ``on_zero``
otherwise.  The compiled program for the root evaluates to the identity
exactly when the circuit outputs 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .sens import SensProvider
from .words import PAD, GenAlphabet, Word, WordError


class CircuitError(ValueError):
    pass


def nand(a: int, b: int) -> int:
    return 0 if (a and b) else 1


@dataclass(frozen=True)
class NandTreeCircuit:
    """Complete binary tree of nand gates of depth ``depth``.

    ``query[v] = (j, a, b)``: leaf ``v`` is ``a`` when input bit ``j`` is 1
    and ``b`` otherwise.
    """

    depth: int
    n_inputs: int
    query: Mapping[str, Tuple[int, int, int]]

    def __post_init__(self):
        if self.depth < 0 or self.n_inputs < 1:
            raise CircuitError("need depth >= 0 and at least one input")
        for i in range(2**self.depth):
            v = format(i, f"0{self.depth}b") if self.depth else ""
            if v not in self.query:
                raise CircuitError(f"leaf {v!r} has no query")
            j, a, b = self.query[v]
            if not 1 <= j <= self.n_inputs or a not in (0, 1) or b not in (0, 1):
                raise CircuitError(f"bad query at leaf {v!r}: {(j, a, b)}")
        if len(self.query) != 2**self.depth:
            raise CircuitError("query defined on vertices that are not leaves")

    def leaves(self) -> List[str]:
        return [format(i, f"0{self.depth}b") if self.depth else "" for i in range(2**self.depth)]


def _check_input(n: int, x: str) -> None:
    if len(x) != n or any(b not in "01" for b in x):
        raise CircuitError(f"input must be a bit string of length {n}, got {x!r}")


def leaf_value(c: NandTreeCircuit, v: str, x: str) -> int:
    j, a, b = c.query[v]
    return a if x[j - 1] == "1" else b


def circuit_eval(c: NandTreeCircuit, x: str) -> int:
    _check_input(c.n_inputs, x)
    level = [leaf_value(c, v, x) for v in c.leaves()]
    while len(level) > 1:
        level = [nand(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


@dataclass(frozen=True)
class Instruction:
    index: int
    on_one: str
    on_zero: str


@dataclass(frozen=True)
class GProgram:
    alphabet: GenAlphabet
    instructions: Tuple[Instruction, ...]
    n_inputs: int

    def __post_init__(self):
        for ins in self.instructions:
            if not 1 <= ins.index <= self.n_inputs:
                raise CircuitError(f"instruction index {ins.index} out of range")
            self.alphabet.check((ins.on_one, ins.on_zero))

    def __len__(self) -> int:
        return len(self.instructions)


def run_program(p: GProgram, x: str) -> Word:
    _check_input(p.n_inputs, x)
    return tuple(ins.on_one if x[ins.index - 1] == "1" else ins.on_zero
                 for ins in p.instructions)


Block = Tuple[Instruction, ...]


def _inverse_block(block: Block, alphabet: GenAlphabet) -> Block:
    inv = alphabet.inverse
    return tuple(Instruction(i.index, inv(i.on_one), inv(i.on_zero)) for i in reversed(block))


def _constant(word: Sequence[str]) -> Block:
    return tuple(Instruction(1, a, a) for a in word)


@dataclass
class CompiledNode:
    """The five programs attached to one tree vertex."""

    p: Block
    p_inv: Block
    g: Block
    g_inv: Block
    one: Block


def _compile_node(c: NandTreeCircuit, prov: SensProvider, v: str) -> CompiledNode:
    d = c.depth
    alph = prov.alphabet
    if len(v) == d:
        word = prov.leaf(d, v)
        j, a, b = c.query[v]
        p = tuple(Instruction(j, x if a == 1 else PAD, x if b == 1 else PAD) for x in word)
        g = _constant(word)
        return CompiledNode(p, _inverse_block(p, alph), g, _inverse_block(g, alph),
                            _constant((PAD,) * len(word)))
    n0 = _compile_node(c, prov, v + "0")
    n1 = _compile_node(c, prov, v + "1")
    return CompiledNode(
        p=n0.g_inv + n1.g_inv + n0.g + n1.g + n1.p_inv + n0.p_inv + n1.p + n0.p,
        p_inv=n0.p_inv + n1.p_inv + n0.p + n1.p + n1.g_inv + n0.g_inv + n1.g + n0.g,
        g=n0.g_inv + n1.g_inv + n0.g + n1.g + n0.one * 4,
        g_inv=n1.g_inv + n0.g_inv + n1.g + n0.g + n0.one * 4,
        one=n0.one * 8,
    )


def compile_node(c: NandTreeCircuit, prov: SensProvider, v: str = "") -> CompiledNode:
    if len(v) > c.depth:
        raise ValueError("vertex below the leaves")
    return _compile_node(c, prov, v)


def compile_program(c: NandTreeCircuit, prov: SensProvider) -> GProgram:
    """Program for the root; its length is ``8**depth * L(depth)``."""
    node = _compile_node(c, prov, "")
    return GProgram(prov.alphabet, node.p, c.n_inputs)


def compiled_length(d: int, leaf_length: int) -> int:
    return 2 ** (3 * d) * leaf_length


# -- file formats ------------------------------------------------------------

def _lines(text: str) -> List[List[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            out.append(line)
    return out


def parse_nandtree(text: str) -> NandTreeCircuit:
    lines = _lines(text)
    if len(lines) < 3 or lines[0] != ["nandtree"]:
        raise CircuitError("expected header line 'nandtree'")
    try:
        if lines[1][0] != "depth" or lines[2][0] != "inputs":
            raise CircuitError("expected 'depth <d>' and 'inputs <n>' lines")
        depth, n = int(lines[1][1]), int(lines[2][1])
    except (IndexError, ValueError) as exc:
        raise CircuitError(f"bad header: {exc}") from None
    query: Dict[str, Tuple[int, int, int]] = {}
    for parts in lines[3:]:
        if parts[0] != "leaf":
            raise CircuitError(f"unexpected line {' '.join(parts)!r}")
        if len(parts) == 4 and depth == 0:
            parts = ["leaf", "-"] + parts[1:]
        if len(parts) != 5:
            raise CircuitError(f"bad leaf line {' '.join(parts)!r}")
        v = "" if parts[1] == "-" else parts[1]
        if v in query:
            raise CircuitError(f"leaf {v!r} given twice")
        query[v] = (int(parts[2]), int(parts[3]), int(parts[4]))
    return NandTreeCircuit(depth, n, query)


def format_nandtree(c: NandTreeCircuit) -> str:
    lines = ["nandtree", f"depth {c.depth}", f"inputs {c.n_inputs}"]
    for v in c.leaves():
        j, a, b = c.query[v]
        lines.append(f"leaf {v or '-'} {j} {a} {b}")
    return "\n".join(lines) + "\n"


def parse_program(text: str, alphabet: GenAlphabet) -> GProgram:
    lines = _lines(text)
    if not lines or lines[0][0] != "gprogram" or len(lines[0]) != 2:
        raise CircuitError("expected header 'gprogram <n_inputs>'")
    n = int(lines[0][1])
    ins = []
    for parts in lines[1:]:
        if len(parts) != 3:
            raise CircuitError(f"bad instruction line {' '.join(parts)!r}")
        ins.append(Instruction(int(parts[0]), alphabet.parse_token(parts[1]),
                               alphabet.parse_token(parts[2])))
    return GProgram(alphabet, tuple(ins), n)


def format_program(p: GProgram) -> str:
    lines = [f"gprogram {p.n_inputs}"]
    lines += [f"{i.index} {i.on_one} {i.on_zero}" for i in p.instructions]
    return "\n".join(lines) + "\n"
