import random

import pytest
from hypothesis import given, settings, strategies as st

from gwp.grigorchuk import grig_is_trivial
from gwp.perm import a5
from gwp.slp import Slp, SlpBuilder, slp_expand, slp_morphism_tower, slp_power
from gwp.words import WordError
from gwp.wreath import (
    FreeHandle, GrigorchukHandle, PermHandle, SupportLimitExceeded, ThompsonHandle,
    phi_n_slps, wreath_equal, wreath_eta, wreath_eval, wreath_eval_slp, wreath_is_trivial,
    wreath_mul,
)
from gwp.groups import free_oracle
from strategies import random_slps

A5 = PermHandle(a5())
A5_LETTERS = ["s", "s'", "tau", "tau'", "t", "t'", "1"]
a5_words = st.lists(st.sampled_from(A5_LETTERS), max_size=100).map(tuple)
F2_LETTERS = ["x0", "x0'", "x1", "x1'", "t", "t'"]


def naive_wreath(word, shift="tau", modulus=None):
    """Pairs (f, h) multiplied by the law (f1,h1)(f2,h2) = (f1 * f2(. + h1), h1+h2),
    with permutations of A5 as base values."""
    g = a5()
    ident = g.identity
    f, h = {}, 0
    for x in word:
        if x == "1":
            continue
        if x in (shift, shift + "'"):
            h += 1 if x == shift else -1
            continue
        # (f, h) * (delta_0^x, 0): x lands at position -h
        pos = -h if modulus is None else (-h) % modulus
        f[pos] = f.get(pos, ident) * g.images[x]
    f = {p: v for p, v in f.items() if not v.is_identity()}
    return f, (h if modulus is None else h % modulus)


def test_eta():
    assert wreath_eta(("t", "t", "t'")) == 1
    assert wreath_eta(()) == 0
    assert wreath_eta(("s", "s'", "1")) == 0


def test_eval_examples():
    e = wreath_eval((), A5, shift="tau")
    assert e.is_trivial()
    e = wreath_eval(("tau", "s", "tau'", "s'"), A5, shift="tau")
    assert e.shift == 0
    assert e.as_dict() == {-1: A5.letter("s"), 0: A5.letter("s'")}
    assert wreath_is_trivial(("s", "tau", "s'", "tau'"), A5, modulus=1, shift="tau")
    assert wreath_is_trivial(("tau", "tau'"), A5, shift="tau")
    assert not wreath_is_trivial(("tau", "s", "tau'"), A5, shift="tau")


@settings(max_examples=200, deadline=None)
@given(a5_words)
def test_eval_matches_naive_law(w):
    e = wreath_eval(w, A5, shift="tau")
    f, h = naive_wreath(w)
    assert e.shift == h
    assert {p: A5.elements[v] for p, v in e.support.items()} == f


@settings(max_examples=200, deadline=None)
@given(a5_words, a5_words)
def test_homomorphism(u, v):
    for mod in (None, 7):
        eu = wreath_eval(u, A5, mod, shift="tau")
        ev = wreath_eval(v, A5, mod, shift="tau")
        assert wreath_equal(wreath_eval(u + v, A5, mod, shift="tau"), wreath_mul(eu, ev, A5), A5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["s", "t", "s'", "t'"]), max_size=6),
       st.lists(st.sampled_from(["s", "t", "s'", "t'"]), max_size=6))
def test_base_commutator_matches_base_group(u, v):
    from gwp.words import commutator_word
    c = commutator_word(u, v)
    assert wreath_is_trivial(c, A5, shift="tau") == a5().is_trivial(c)


@st.composite
def eta_zero_words(draw, max_len=300):
    w = draw(st.lists(st.sampled_from(A5_LETTERS[:6]), max_size=max_len))
    eta = wreath_eta(w, "tau")
    fix = ("tau'",) * eta if eta > 0 else ("tau",) * (-eta)
    return tuple(w) + fix


@settings(max_examples=150, deadline=None)
@given(eta_zero_words(), st.integers(0, 5))
def test_cyclic_quotient_agrees_for_large_modulus(w, extra):
    s = len(w)
    want = wreath_is_trivial(w, A5, shift="tau")
    for t in (2 * s + 1, 2 * s + 1 + extra, 3 * s + 7):
        assert wreath_is_trivial(w, A5, t, shift="tau") == want


def test_cyclic_quotient_small_modulus_counterexample():
    w = ("s", "tau", "s'", "tau'")
    assert not wreath_is_trivial(w, A5, shift="tau")
    assert wreath_is_trivial(w, A5, 1, shift="tau")
    w = ("s",) + ("tau",) * 3 + ("s'",) + ("tau'",) * 3
    assert not wreath_is_trivial(w, A5, shift="tau")
    assert wreath_is_trivial(w, A5, 3, shift="tau")
    assert not wreath_is_trivial(w, A5, 2 * len(w) + 1, shift="tau")


def test_compressed_examples():
    g = slp_power(("t",), 2**20)
    e = wreath_eval_slp(g, FreeHandle(free_oracle(2).alphabet))
    assert e.shift == 2**20 and len(e.support) == 0
    g = Slp({"S": ("A", "A"), "A": ("s", "tau")}, "S")
    e = wreath_eval_slp(g, A5, shift="tau")
    assert e.shift == 2
    assert e.as_dict() == {0: A5.letter("s"), -1: A5.letter("s")}


def test_support_limit():
    b = SlpBuilder()
    parts = b.power(("s", "tau"), 5000)
    g = b.build(b.add(parts))
    with pytest.raises(SupportLimitExceeded):
        wreath_eval_slp(g, A5, support_limit=1000, shift="tau")
    assert len(wreath_eval_slp(g, A5, support_limit=5000, shift="tau").support) == 5000


@settings(max_examples=200, deadline=None)
@given(random_slps(letters=("s", "s'", "tau", "tau'", "t", "1"), max_len=10**4),
       st.sampled_from([None, 1, 2, 5, 64]))
def test_compressed_matches_expansion_a5(g, mod):
    w = slp_expand(g)
    assert wreath_equal(wreath_eval_slp(g, A5, mod, shift="tau"), wreath_eval(w, A5, mod, shift="tau"), A5)


@settings(max_examples=60, deadline=None)
@given(random_slps(letters=tuple(F2_LETTERS), max_len=2000), st.sampled_from([None, 3]))
def test_compressed_matches_expansion_free(g, mod):
    h = FreeHandle(free_oracle(2).alphabet)
    w = slp_expand(g)
    assert wreath_equal(wreath_eval_slp(g, h, mod), wreath_eval(w, h, mod), h)


@settings(max_examples=40, deadline=None)
@given(random_slps(letters=("a", "b", "c", "d", "t", "t'"), max_len=400))
def test_compressed_matches_expansion_grigorchuk(g):
    h = GrigorchukHandle()
    w = slp_expand(g)
    assert wreath_equal(wreath_eval_slp(g, h), wreath_eval(w, h), h)


@settings(max_examples=30, deadline=None)
@given(random_slps(letters=("x0", "x1'", "t", "t'"), max_len=300))
def test_compressed_matches_expansion_thompson(g):
    h = ThompsonHandle()
    w = slp_expand(g)
    assert wreath_equal(wreath_eval_slp(g, h), wreath_eval(w, h), h)


def test_grigorchuk_values_compared_by_oracle():
    h = GrigorchukHandle()
    e = wreath_eval(("b", "c", "d"), h)
    assert e.is_trivial()
    e = wreath_eval(("a", "t", "a"), h)
    assert not e.is_trivial() and e.as_dict() == {0: ("a",), -1: ("a",)}
    # values are kept as words; equality goes through the word problem
    e1 = wreath_eval(("b", "c"), h)
    e2 = wreath_eval(("d",), h)
    assert wreath_equal(e1, e2, h)
    assert grig_is_trivial(e1.as_dict()[0] + e2.as_dict()[0])


# -- iterated embeddings -----------------------------------------------------

TOY = {"a": ("b",), "b": ("a", "b"), "t": ("a", "b", "a")}


def _direct(phi, word, k):
    for _ in range(k):
        word = tuple(y for x in word for y in phi[x])
    return word


def _complete(phi):
    out = dict(phi)
    for x, w in phi.items():
        out[x + "'"] = tuple(y[:-1] if y.endswith("'") else y + "'" for y in reversed(w))
    return out


@pytest.mark.parametrize("n", range(1, 6))
def test_phi_n_matches_direct_iteration(n):
    imgs = phi_n_slps(TOY, 2, n)
    phi = _complete(TOY)
    want_tau = ()
    for k in range(n, 0, -1):
        want_tau += _direct(phi, ("t",), k)
    assert slp_expand(imgs["t"]) == want_tau
    assert slp_expand(imgs["t'"]) == tuple(
        y[:-1] if y.endswith("'") else y + "'" for y in reversed(want_tau))
    for x in ("a", "b", "a'"):
        assert slp_expand(imgs[x]) == _direct(phi, (x,), n)


def test_phi_small_cases():
    assert slp_expand(phi_n_slps(TOY, 2, 1)["t"]) == TOY["t"]
    phi = _complete(TOY)
    two = _direct(phi, ("t",), 2) + _direct(phi, ("t",), 1)
    assert slp_expand(phi_n_slps(TOY, 2, 2)["t"]) == two


def test_phi_sizes_linear():
    sizes = [sum(g.size for g in phi_n_slps(TOY, 3, n).values()) for n in range(1, 40)]
    steps = {b - a for a, b in zip(sizes[5:], sizes[6:])}
    assert len(steps) == 1  # constant increment per level
    (step,) = steps
    # one layer per level in each of the output programs
    completed = 2 * sum(len(w) for w in TOY.values()) + 1
    assert step <= len(phi_n_slps(TOY, 3, 1)) * completed


def test_phi_errors():
    with pytest.raises(WordError):
        phi_n_slps({"a": ("a",), "a'": ("a",), "t": ()}, 2, 1)
    with pytest.raises(WordError):
        phi_n_slps({"a": ("t",), "t": ("a",)}, 2, 1)
    with pytest.raises(WordError):
        phi_n_slps({"a": ("a",)}, 2, 1)
    with pytest.raises(ValueError):
        phi_n_slps(TOY, 2, 0)
