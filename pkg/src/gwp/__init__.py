"""Word problems for non-solvable groups, straight-line programs, group
programs for nand-tree circuits and the circuit-to-compressed-word
reduction over wreath products."""

from .words import GenAlphabet, GroupOracle, free_reduce, word_inverse, commutator_word
from .slp import Slp, parse_slp

__all__ = ["GenAlphabet", "GroupOracle", "Slp", "commutator_word", "free_reduce",
           "parse_slp", "word_inverse"]
__version__ = "0.1.0"
