import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from gwp.barrington import (
    CircuitError, GProgram, Instruction, NandTreeCircuit, circuit_eval, compile_node,
    compile_program, compiled_length, format_nandtree, format_program, parse_nandtree,
    parse_program, run_program,
)
from gwp.sens import PROVIDER_NAMES, nested_commutator, provider
from gwp.words import PAD, free_reduce, word_inverse


def random_circuit(rng, depth, n):
    query = {}
    for bits in product("01", repeat=depth):
        query["".join(bits)] = (rng.randint(1, n), rng.randint(0, 1), rng.randint(0, 1))
    return NandTreeCircuit(depth, n, query)


def ref_eval(c, x):
    """Bottom-up level evaluation, independent of the recursive evaluator."""
    level = []
    for v in c.leaves():
        j, a, b = c.query[v]
        level.append(a if x[j - 1] == "1" else b)
    while len(level) > 1:
        level = [1 - (level[i] & level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def test_circuit_eval_examples():
    c = NandTreeCircuit(0, 1, {"": (1, 1, 0)})
    assert circuit_eval(c, "1") == 1
    c = NandTreeCircuit(1, 1, {"0": (1, 1, 0), "1": (1, 1, 0)})
    assert circuit_eval(c, "1") == 0
    with pytest.raises(CircuitError):
        circuit_eval(c, "10")
    with pytest.raises(CircuitError):
        NandTreeCircuit(1, 1, {"0": (1, 1, 0)})
    with pytest.raises(CircuitError):
        NandTreeCircuit(1, 1, {"0": (2, 1, 0), "1": (1, 1, 0)})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.integers(1, 5), st.integers(0, 2**32))
def test_circuit_eval_matches_reference(d, n, seed):
    rng = random.Random(seed)
    c = random_circuit(rng, d, n)
    for bits in product("01", repeat=n):
        x = "".join(bits)
        assert circuit_eval(c, x) == ref_eval(c, x)


@pytest.mark.parametrize("name", PROVIDER_NAMES)
def test_provider_leaves_uniform(name):
    prov = provider(name)
    for d in range(0, 6):
        lengths = {len(prov.leaf(d, "".join(v))) for v in product("01", repeat=d)}
        assert lengths == {prov.leaf_length(d)}
        L = prov.leaf_length(d)
        assert L & (L - 1) == 0
        for v in product("01", repeat=d):
            prov.alphabet.check(prov.leaf(d, "".join(v)))


@pytest.mark.parametrize("name", PROVIDER_NAMES)
@pytest.mark.parametrize("d", range(0, 7))
def test_nested_commutator_nontrivial(name, d):
    prov = provider(name)
    g = nested_commutator(prov, d)
    assert len(g) == prov.leaf_length(d) * 4**d
    assert not prov.oracle.is_trivial(g)


def test_nested_commutator_small_cases():
    prov = provider("a5")
    assert nested_commutator(prov, 0) == prov.leaf(0, "")
    g = nested_commutator(prov, 1)
    l0, l1 = prov.leaf(1, "0"), prov.leaf(1, "1")
    assert g == word_inverse(l0, prov.alphabet) + word_inverse(l1, prov.alphabet) + l0 + l1


def test_free_leaves():
    f2 = provider("f2")
    assert free_reduce(f2.leaf(2, "10")) == ("x0'", "x0'", "x1", "x0", "x0")
    assert f2.leaf_length(2) == 16
    f3 = provider("f3")
    assert [f3.leaf(2, v) for v in ("00", "01", "10", "11")] == [("x0",), ("x1",), ("x2",), ("x0",)]


def test_a5_commutator_table():
    prov = provider("a5")
    from gwp.perm import commutator
    assert len(prov.table) == 60
    for g, (h1, h2) in prov.table.items():
        assert commutator(h1, h2) == g
        # lexicographically least pair in the element order
        for a in prov.elements:
            if a == h1:
                break
            assert all(commutator(a, b) != g for b in prov.elements)


def test_run_program_examples():
    al = provider("f2").alphabet
    assert run_program(GProgram(al, (), 1), "0") == ()
    p = GProgram(al, (Instruction(1, "x0", PAD),), 1)
    assert run_program(p, "0") == (PAD,)
    assert run_program(p, "1") == ("x0",)
    with pytest.raises(CircuitError):
        run_program(p, "11")


@pytest.mark.parametrize("name", PROVIDER_NAMES)
def test_compiled_length_and_blocks(name):
    prov = provider(name)
    rng = random.Random(5)
    for d in range(0, 6 if name in ("f3", "a5") else 4):
        c = random_circuit(rng, d, 3)
        prog = compile_program(c, prov)
        assert len(prog) == compiled_length(d, prov.leaf_length(d)) == 8**d * prov.leaf_length(d)
        for ins in prog.instructions:
            assert ins.on_one in prov.alphabet and ins.on_zero in prov.alphabet
        node = compile_node(c, prov, "")
        sizes = {len(node.p), len(node.p_inv), len(node.g), len(node.g_inv), len(node.one)}
        assert len(sizes) == 1
        for block in (node.g, node.g_inv, node.one):
            assert all(i.on_one == i.on_zero and i.index == 1 for i in block)


def test_depth_zero_program_is_leaf():
    prov = provider("a5")
    c = NandTreeCircuit(0, 2, {"": (2, 1, 0)})
    prog = compile_program(c, prov)
    leaf = prov.leaf(0, "")
    assert [i.on_one for i in prog.instructions] == list(leaf)
    assert all(i.on_zero == PAD and i.index == 2 for i in prog.instructions)


@pytest.mark.parametrize("name", PROVIDER_NAMES)
def test_barrington_correctness_and_inverse(name):
    prov = provider(name)
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(6):
        d, n = rng.randint(0, 2), rng.randint(1, 3)
        c = random_circuit(rng, d, n)
        prog = compile_program(c, prov)
        for v in ("", "0", "1")[: 1 + 2 * (d > 0)]:
            node = compile_node(c, prov, v)
            for bits in product("01", repeat=n):
                x = "".join(bits)
                pw = run_program(GProgram(prov.alphabet, node.p, n), x)
                pi = run_program(GProgram(prov.alphabet, node.p_inv, n), x)
                assert prov.oracle.is_trivial(pw + pi)
        for bits in product("01", repeat=n):
            x = "".join(bits)
            assert prov.oracle.is_trivial(run_program(prog, x)) == (circuit_eval(c, x) == 0)


def test_file_formats_round_trip():
    rng = random.Random(2)
    for d in range(0, 4):
        c = random_circuit(rng, d, 3)
        text = format_nandtree(c)
        assert parse_nandtree(text) == c
        prog = compile_program(c, provider("a5"))
        assert parse_program(format_program(prog), provider("a5").alphabet) == prog
    assert parse_nandtree("nandtree\ndepth 0\ninputs 1\nleaf 1 1 0\n").query == {"": (1, 1, 0)}
    with pytest.raises(CircuitError):
        parse_nandtree("nandtree\ndepth 1\ninputs 1\nleaf 0 1 1 0\n")
    with pytest.raises(CircuitError):
        parse_program("gprogram 1\n1 s\n", provider("a5").alphabet)
