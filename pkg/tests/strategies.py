"""Shared hypothesis strategies and small reference implementations."""

from hypothesis import strategies as st

from gwp.slp import Slp

LETTERS = ("a", "a'", "b", "b'")


@st.composite
def random_slps(draw, letters=LETTERS, max_vars=8, max_rhs=4, max_len=10**5):
    """A random valid SLP; rules only reference previously created variables."""
    n = draw(st.integers(1, max_vars))
    rules = {}
    lengths = {}
    for i in range(n):
        pool = list(letters) + list(rules)
        rhs = draw(st.lists(st.sampled_from(pool), min_size=0, max_size=max_rhs))
        ln = sum(lengths.get(x, 1) for x in rhs)
        if ln > max_len:
            rhs = rhs[:1]
            ln = sum(lengths.get(x, 1) for x in rhs)
        rules[f"V{i}"] = tuple(rhs)
        lengths[f"V{i}"] = ln
    return Slp(rules, f"V{n - 1}")


def naive_expand(g: Slp, symbol=None):
    """Recursive expansion, independent of the library's iterative one."""
    v = g.start if symbol is None else symbol
    if v not in g.rules:
        return (v,)
    out = ()
    for x in g.rules[v]:
        out += naive_expand(g, x)
    return out
