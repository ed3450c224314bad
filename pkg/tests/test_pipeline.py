import pytest

from gwp.reduction import DagCircuit, build_pipeline, pipeline_lengths, preprocess_inputs
from gwp.slp import slp_count, slp_length, slp_validate


def circuit_on(x):
    return DagCircuit(2, {"g": (x, x), "y0": (x, x), "y1": ("g", "g")}, ("y0", "y1"))


@pytest.fixture(scope="module")
def built():
    return build_pipeline(circuit_on("x2"), 1, ("s", "t"), shift="tau")


def test_shift_sum_vanishes(built):
    for g in (built.slp_I, built.slp_J, built.slp_sigma):
        slp_validate(g)
        assert slp_count(g, "tau") == slp_count(g, "tau'")


def test_lengths_match_closed_form(built):
    L = built.lengths
    assert slp_length(built.slp_I) == L["I"]
    assert slp_length(built.slp_J) == L["J"]
    assert slp_length(built.slp_sigma) == L["sigma"]
    assert L == pipeline_lengths(built.data, built.m1, 2, built.ell)


def test_constants(built):
    d = built.data
    r1, r2 = d.r[:1], d.r[1:]
    assert built.h == sum(d.s) + 1
    assert built.pi == built.ell + sum(r2)
    assert built.ell >= sum(r1) + max(d.q) + 1
    assert built.ell >= sum(d.s) - sum(r2) - min(d.q) + 1
    assert built.ell >= 2
    assert built.d_offset == sum(r1) + 1 + 2 * built.pi
    assert built.position("1") == -built.pi and built.position("0") == 0


def test_base_letter_counts(built):
    # every base letter in sigma is one 1 of some S(s) copy
    k = len(built.data.s)
    assert slp_count(built.slp_sigma, "s") == 2**k
    assert slp_count(built.slp_sigma, "t") == 2**k
    # I contains 2^m copies of sigma
    assert slp_count(built.slp_I, "s") == 2**built.circuit.m * 2**k


def test_preprocessed_input_accepted():
    c = preprocess_inputs(circuit_on("x1"))
    out = build_pipeline(c, 1, ("s", "t"), shift="tau")
    assert out.circuit is c
