import random

import pytest
from hypothesis import given, settings, strategies as st

from gwp.perm import A5_S, A5_T, Permutation, a5, commutator, perm_group_oracle
from gwp.words import (
    PAD, GenAlphabet, WordError, commutator_word, free_group, free_reduce, parse_word,
    word_inverse,
)

F2 = free_group(2)
F2_LETTERS = ["x0", "x0'", "x1", "x1'", PAD]
words_f2 = st.lists(st.sampled_from(F2_LETTERS), max_size=100).map(tuple)
words_a5 = st.lists(st.sampled_from(["s", "s'", "t", "t'", PAD]), max_size=60).map(tuple)


def test_word_inverse_examples():
    assert word_inverse(()) == ()
    assert word_inverse(("a", "b")) == ("b'", "a'")
    assert word_inverse(("1", "x'")) == ("x", "1")


@given(words_f2)
def test_word_inverse_is_involution(w):
    assert word_inverse(word_inverse(w)) == w


def test_commutator_word_examples():
    assert commutator_word((), ("a",)) == ("a'", "a")
    u, v = ("s",), ("t", "t")
    assert len(commutator_word(u, v)) == 2 * len(u) + 2 * len(v)


@given(words_a5)
def test_commutator_with_itself_trivial(u):
    assert a5().is_trivial(commutator_word(u, u))
    assert F2.is_trivial(commutator_word(("x0",) * len(u), ("x0",) * len(u)))


def test_commutator_s_t_nontrivial_in_a5():
    assert not a5().is_trivial(commutator_word(("s",), ("t",)))


def test_free_reduce_examples():
    assert free_reduce(("a", "a'")) == ()
    assert free_reduce(("x0", "x1", "x1'", "x0")) == ("x0", "x0")
    assert free_reduce(("x0", "1", "x0'")) == ()


def _reduce_random_order(w, rng):
    w = [x for x in w if x != PAD]
    while True:
        spots = [i for i in range(len(w) - 1) if F2.alphabet.inv[w[i]] == w[i + 1]]
        if not spots:
            return tuple(w)
        i = rng.choice(spots)
        del w[i:i + 2]


@settings(max_examples=200)
@given(st.lists(st.sampled_from(F2_LETTERS), max_size=200), st.integers(0, 2**32))
def test_free_reduce_confluent_and_idempotent(w, seed):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert _reduce_random_order(w, random.Random(seed)) == r


@given(words_f2, words_f2)
def test_conjugation_closure_free(u, v):
    if F2.is_trivial(u + v):
        assert F2.is_trivial(u + v + word_inverse(v) + word_inverse(u))


@given(words_a5, words_a5)
def test_conjugation_closure_a5(u, v):
    g = a5()
    assert g.is_trivial(u + word_inverse(u))
    if g.is_trivial(u + v):
        assert g.is_trivial(u + v + word_inverse(v) + word_inverse(u))


@given(words_a5, st.integers(0, 60))
def test_pad_insertion_invisible(w, k):
    k = min(k, len(w))
    g = a5()
    assert g.is_trivial(w) == g.is_trivial(w[:k] + (PAD,) + w[k:])


def test_alphabet_validation():
    with pytest.raises(WordError):
        GenAlphabet(("a",), {"a": "a"})
    with pytest.raises(WordError):
        GenAlphabet(("a", "b", PAD), {"a": "b", "b": "b", PAD: PAD})
    al = GenAlphabet.from_generators(["a"])
    assert al.inverse("a'") == "a" and al.inverse(PAD) == PAD
    assert parse_word("a a' # comment\n1 a", al) == ("a", "a'", "1", "a")
    with pytest.raises(WordError):
        parse_word("b", al)


# -- permutations ------------------------------------------------------------

def test_perm_oracle_examples():
    g = a5()
    assert g.is_trivial(())
    assert g.is_trivial(("s",) * 5)
    assert not g.is_trivial(("s", "t"))


def test_perm_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        perm_group_oracle({"s": A5_S, "u": Permutation.from_cycles(4, (0, 1))})
    with pytest.raises(ValueError):
        perm_group_oracle({"s": A5_S, "s'": A5_S})
    with pytest.raises(WordError):
        a5().is_trivial(("q",))


def test_a5_against_sympy():
    sp = pytest.importorskip("sympy.combinatorics")
    S = sp.Permutation([[0, 1, 2, 3, 4]])
    T = sp.Permutation([[0, 1, 2]], size=5)
    ref = sp.PermutationGroup([S, T])
    els = a5().elements()
    assert len(els) == ref.order() == 60
    # sympy also composes left to right: (p*q)(i) = q(p(i))
    table = {"s": S, "t": T, "s'": S**-1, "t'": T**-1}
    for perm, word in els.items():
        acc = sp.Permutation(list(range(5)))
        for x in word:
            acc = acc * table[x]
        assert list(acc.array_form) == list(perm.images)
        assert a5().is_trivial(word) == acc.is_Identity


def test_a5_bfs_words_and_perfect():
    g = a5()
    els = g.elements()
    for perm, word in els.items():
        assert g.evaluate(word) == perm
        assert g.is_trivial(word) == perm.is_identity()
    perms = list(els)
    comms = {commutator(x, y) for x in perms for y in perms}
    assert comms == set(perms)  # every element of A5 is a commutator


def test_permutation_basics():
    assert str(A5_T) == "(0 1 2)"
    assert (A5_S * A5_S.inverse()).is_identity()
    assert (A5_S * A5_T).images == tuple(A5_T.images[A5_S.images[i]] for i in range(5))
