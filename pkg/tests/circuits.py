"""Enumeration of small nand circuits and the pointwise subset-sum check."""

from itertools import combinations_with_replacement, product

from gwp.reduction import DagCircuit, circuit_to_subsetsum, greedy_subsetsum, preprocess_inputs


def all_circuits(m, p):
    """Every circuit with ``m`` inputs and ``p`` nand gates, outputs = sinks.

    Gates are listed so that each reads only inputs, constants and earlier
    gates; every input is read at least once and inputs first appear in the
    order x1, x2, ... (other labelings are the same circuit up to renaming).
    """
    sources = [f"x{i}" for i in range(1, m + 1)] + ["c0", "c1"]

    def rec(j, gates):
        if j == p:
            yield gates
            return
        avail = sources + [f"g{i}" for i in range(j)]
        for pair in combinations_with_replacement(avail, 2):
            yield from rec(j + 1, gates + [pair])

    for gates in rec(0, []):
        seen = []
        for pair in gates:
            for s in pair:
                if s[0] == "x" and s not in seen:
                    seen.append(s)
        if seen != sources[:m]:
            continue
        used = {s for pair in gates for s in pair}
        outs = tuple(f"g{i}" for i in range(p) if f"g{i}" not in used)
        yield DagCircuit(m, {f"g{i}": pair for i, pair in enumerate(gates)}, outs)


def subsetsum_mismatches(c):
    """Inputs where greedy membership disagrees with the circuit.

    Only inputs with exactly one hot output are compared; returns
    (mismatches, number of inputs compared).
    """
    data = circuit_to_subsetsum(preprocess_inputs(c))
    bad = []
    checked = 0
    for alpha in product((0, 1), repeat=c.m):
        out = c.evaluate(alpha)
        if sum(out) != 1:
            continue
        checked += 1
        base = sum(b * r for b, r in zip(alpha, data.r))
        for i, v in enumerate(out):
            if (greedy_subsetsum(data.q[i] + base, data.s) is not None) != bool(v):
                bad.append((alpha, i))
    return bad, checked
