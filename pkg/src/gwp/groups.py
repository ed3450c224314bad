"""Named groups for the command line: ``a5 f2 f3 grigorchuk thompson`` and
``wreath:<base>`` with an optional ``@mod=<t>`` suffix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

from . import grigorchuk, thompson, wreath
from .perm import a5
from .words import PAD, FreeGroupOracle, GenAlphabet, GroupOracle, WordError, prime

BASE_NAMES = ("a5", "f2", "f3", "grigorchuk", "thompson")
WREATH_BASES = ("a5", "f2", "grigorchuk", "thompson")


def free_oracle(rank: int) -> FreeGroupOracle:
    return FreeGroupOracle(GenAlphabet.from_generators([f"x{i}" for i in range(rank)]))


_ORACLES: Dict[str, Callable[[], GroupOracle]] = {
    "a5": a5,
    "f2": lambda: free_oracle(2),
    "f3": lambda: free_oracle(3),
    "grigorchuk": grigorchuk.GrigorchukOracle,
    "thompson": thompson.ThompsonOracle,
}


def base_handle(name: str) -> wreath.BaseGroupHandle:
    if name == "a5":
        return wreath.PermHandle(a5())
    if name == "f2":
        return wreath.FreeHandle(free_oracle(2).alphabet)
    if name == "grigorchuk":
        return wreath.GrigorchukHandle()
    if name == "thompson":
        return wreath.ThompsonHandle()
    raise KeyError(f"no wreath base named {name!r}; choose from {list(WREATH_BASES)}")


@dataclass
class GroupSpec:
    name: str
    alphabet: GenAlphabet
    oracle: Optional[GroupOracle] = None
    handle: Optional[wreath.BaseGroupHandle] = None
    modulus: Optional[int] = None
    shift: Optional[str] = None

    @property
    def is_wreath(self) -> bool:
        return self.handle is not None

    def is_trivial(self, word: Sequence[str]) -> bool:
        self.alphabet.check(word)
        if self.is_wreath:
            return wreath.wreath_is_trivial(word, self.handle, self.modulus, self.shift)
        return self.oracle.is_trivial(word)


def lookup(selector: str) -> GroupSpec:
    """Resolve a group selector such as ``grigorchuk`` or ``wreath:a5@mod=7``."""
    if selector.startswith("wreath:"):
        rest = selector[len("wreath:"):]
        modulus = None
        if "@" in rest:
            rest, suffix = rest.split("@", 1)
            if not suffix.startswith("mod="):
                raise KeyError(f"unknown wreath suffix {suffix!r}; expected mod=<t>")
            modulus = int(suffix[4:])
            if modulus < 1:
                raise KeyError("wreath modulus must be positive")
        handle = base_handle(rest)
        shift = wreath.default_shift_letter(handle.alphabet.letters)
        shifts = GenAlphabet((shift, prime(shift), PAD), {shift: prime(shift), prime(shift): shift, PAD: PAD})
        return GroupSpec(selector, handle.alphabet.union(shifts), handle=handle,
                         modulus=modulus, shift=shift)
    if selector not in _ORACLES:
        raise KeyError(f"unknown group {selector!r}; choose from "
                       f"{list(BASE_NAMES) + ['wreath:' + b for b in WREATH_BASES]}")
    oracle = _ORACLES[selector]()
    return GroupSpec(selector, oracle.alphabet, oracle=oracle)


def group_names() -> list:
    return list(BASE_NAMES) + [f"wreath:{b}" for b in WREATH_BASES]
