"""From multi-output nand circuits to compressed words over ``G wr Z``.

The chain is: circuit -> super-decreasing subset-sum numbers -> SLPs for
the solution-set strings -> the programs ``I`` (planting the product of
leaf letters for each prefix ``beta`` at position ``-bin(beta) * pi``) and
``J`` (commutators of ``I``'s values with every generator).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .slp import Slp, SlpBuilder, slp_invert
from .words import PAD, prime

CONSTANTS = ("c0", "c1")


class CircuitError(ValueError):
    pass


class OneHotViolation(CircuitError):
    def __init__(self, alpha: str, hot: Sequence[int]):
        super().__init__(f"input {alpha} makes outputs {list(hot)} true; exactly one is required")
        self.alpha = alpha
        self.hot = tuple(hot)


def _nand(a: int, b: int) -> int:
    return 0 if (a and b) else 1


@dataclass(frozen=True)
class DagCircuit:
    """Inputs ``x1..xm``, constants ``c0 c1``, named nand gates, outputs.

    ``gate_order`` lists the gates as ``g_1 .. g_p`` (every edge runs from a
    higher to a lower index); it is filled in by ``preprocess_inputs``.
    """

    n_inputs: int
    gates: Mapping[str, Tuple[str, str]]
    outputs: Tuple[str, ...]
    gate_order: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "gates", dict(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        inputs = {f"x{i}" for i in range(1, self.n_inputs + 1)}
        for g in self.gates:
            if g in inputs or g in CONSTANTS:
                raise CircuitError(f"gate name {g!r} clashes with an input or constant")
        for g, srcs in self.gates.items():
            for s in srcs:
                if s not in self.gates and s not in inputs and s not in CONSTANTS:
                    raise CircuitError(f"gate {g!r} reads undefined source {s!r}")
        if not self.outputs:
            raise CircuitError("circuit needs at least one output")
        fanout = self.fanout()
        for y in self.outputs:
            if y not in self.gates:
                raise CircuitError(f"output {y!r} is not a nand gate")
            if fanout[y]:
                raise CircuitError(f"output gate {y!r} has fan-out {fanout[y]}")
        if len(set(self.outputs)) != len(self.outputs):
            raise CircuitError("an output gate is listed twice")
        order = self.topological_order()  # raises on cycles
        if self.gate_order is not None:
            pos = {g: i for i, g in enumerate(self.gate_order)}
            if sorted(pos) != sorted(self.gates):
                raise CircuitError("gate_order must list every gate once")
            for g, srcs in self.gates.items():
                for s in srcs:
                    if s in self.gates and pos[s] <= pos[g]:
                        raise CircuitError("gate_order is not a reverse topological order")
        del order

    @property
    def m(self) -> int:
        return self.n_inputs

    @property
    def n(self) -> int:
        return len(self.outputs)

    @property
    def p(self) -> int:
        return len(self.gates)

    def fanout(self) -> Dict[str, int]:
        out = {s: 0 for s in list(self.gates) + [f"x{i}" for i in range(1, self.m + 1)] + list(CONSTANTS)}
        for srcs in self.gates.values():
            for s in srcs:
                out[s] += 1
        return out

    def topological_order(self) -> List[str]:
        """Sources before consumers, ties broken by definition order."""
        order: List[str] = []
        done = set()
        indeg = {g: sum(1 for s in srcs if s in self.gates) for g, srcs in self.gates.items()}
        users: Dict[str, List[str]] = {g: [] for g in self.gates}
        for g, srcs in self.gates.items():
            for s in srcs:
                if s in self.gates:
                    users[s].append(g)
        ready = [g for g in self.gates if indeg[g] == 0]
        names = list(self.gates)
        rank = {g: i for i, g in enumerate(names)}
        while ready:
            ready.sort(key=rank.__getitem__)
            g = ready.pop(0)
            order.append(g)
            done.add(g)
            for u in users[g]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
        if len(order) != len(self.gates):
            raise CircuitError("circuit has a cycle")
        return order

    def evaluate(self, alpha: Sequence[int]) -> Tuple[int, ...]:
        if len(alpha) != self.m:
            raise CircuitError(f"expected {self.m} input bits, got {len(alpha)}")
        val: Dict[str, int] = {"c0": 0, "c1": 1}
        for i, b in enumerate(alpha, 1):
            val[f"x{i}"] = int(b)
        for g in self.topological_order():
            a, b = self.gates[g]
            val[g] = _nand(val[a], val[b])
        return tuple(val[y] for y in self.outputs)

    def one_hot_violation(self) -> Optional[OneHotViolation]:
        for alpha in product((0, 1), repeat=self.m):
            out = self.evaluate(alpha)
            hot = [i for i, v in enumerate(out) if v]
            if len(hot) != 1:
                return OneHotViolation("".join(map(str, alpha)), hot)
        return None


def _fresh(base: str, taken) -> str:
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def preprocess_inputs(c: DagCircuit) -> DagCircuit:
    """Give every input a single out-edge through two negation gates.

    ``x~i = nand(xi, c1)`` and ``x~~i = nand(x~i, x~i)``; the latter takes
    over the old out-edges of ``xi``.  The returned circuit fixes the gate
    numbering: the other gates in reverse topological order, then
    ``x~m, ..., x~1`` so that ``r_1 > r_2 > ... > r_m``.
    """
    taken = set(c.gates)
    bars: List[str] = []
    rename: Dict[str, str] = {}
    new_gates: Dict[str, Tuple[str, str]] = {}
    for i in range(1, c.m + 1):
        x = f"x{i}"
        bar = _fresh(f"x{i}~", taken)
        taken.add(bar)
        dbl = _fresh(f"x{i}~~", taken)
        taken.add(dbl)
        bars.append(bar)
        new_gates[bar] = (x, "c1")
        new_gates[dbl] = (bar, bar)
        rename[x] = dbl
    for g, (a, b) in c.gates.items():
        new_gates[g] = (rename.get(a, a), rename.get(b, b))
    tmp = DagCircuit(c.m, new_gates, c.outputs)
    others = [g for g in tmp.topological_order() if g not in bars]
    order = tuple(reversed(others)) + tuple(reversed(bars))
    return DagCircuit(c.m, new_gates, c.outputs, order)


@dataclass(frozen=True)
class SubsetsumData:
    q: Tuple[int, ...]
    r: Tuple[int, ...]
    s: Tuple[int, ...]
    gate_order: Tuple[str, ...]
    edge_of_input: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.s)


def circuit_to_subsetsum(c: DagCircuit) -> SubsetsumData:
    """Numbers ``q_i``, ``r_i`` and ``s_j`` in base 4, one digit per edge.

    Gate ``g_i`` (1-based in ``gate_order``) receives edges ``2i+n-2`` and
    ``2i+n-1`` from its first and second source; edge ``i < n`` is the
    imaginary out-edge of output ``y_i``.
    """
    if c.gate_order is None:
        raise CircuitError("circuit must be preprocessed first")
    n, p = c.n, c.p
    index = {g: i for i, g in enumerate(c.gate_order, 1)}
    source_of: Dict[int, str] = {}
    out_edges: Dict[str, List[int]] = {}
    for g, srcs in c.gates.items():
        i = index[g]
        for e, s in zip((2 * i + n - 2, 2 * i + n - 1), srcs):
            source_of[e] = s
            out_edges.setdefault(s, []).append(e)
    for j, y in enumerate(c.outputs):
        source_of[j] = y
        out_edges.setdefault(y, []).append(j)
    inputs = []
    for i in range(1, c.m + 1):
        edges = out_edges.get(f"x{i}", [])
        if len(edges) != 1:
            raise CircuitError(f"input x{i} must have exactly one out-edge, has {len(edges)}")
        inputs.append(edges[0])
    live = [e for e, s in source_of.items() if s == "c1" or s in c.gates]
    total = sum(4**e for e in live)
    q = tuple(total - (4**i if i in live else 0) for i in range(n))
    r = tuple(4**e for e in inputs)
    t: Dict[int, int] = {}
    for g, i in index.items():
        hi, lo = 4 ** (2 * i + n - 1), 4 ** (2 * i + n - 2)
        t[3 * i] = hi + lo + sum(4**e for e in out_edges.get(g, []))
        t[3 * i - 1] = 3 * lo
        t[3 * i - 2] = lo
    s = tuple(t[j] for j in range(3 * p, 0, -1))
    return SubsetsumData(q, r, s, tuple(c.gate_order), tuple(inputs))


def greedy_subsetsum(target: int, s: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """For super-decreasing ``s``: the unique 0/1 vector with ``delta . s == target``."""
    delta = []
    acc = target
    for x in s:
        if acc >= x:
            acc -= x
            delta.append(1)
        else:
            delta.append(0)
    return tuple(delta) if acc == 0 else None


def is_superdecreasing(t: Sequence[int]) -> bool:
    rest = 0
    for x in reversed(t):
        if x <= rest:
            return False
        rest += x
    return True


def superdecreasing_slp(t: Sequence[int], builder: Optional[SlpBuilder] = None,
                        zero: str = "0", one: str = "1") -> Slp:
    """Program for the 0/1 string marking all subset sums of ``t``.

    ``S() = 1`` and ``S(t1..tk) = S(t2..tk) 0^(t1 - t2 - ... - tk - 1) S(t2..tk)``.
    """
    b = builder if builder is not None else SlpBuilder("ss")
    cur = b.add([one], "S")
    rest = 0
    for x in reversed(t):
        gap = x - rest - 1
        if gap < 0:
            raise ValueError(f"sequence is not super-decreasing at {x}")
        cur = b.add([cur] + b.power([zero], gap, "z") + [cur], "S")
        rest += x
    return b.build(cur)


def subset_sum_string(t: Sequence[int]) -> str:
    """Definitional reference: enumerate all ``2**k`` subset sums."""
    total = sum(t)
    marks = bytearray(b"0" * (total + 1))
    for alpha in product((0, 1), repeat=len(t)):
        marks[sum(a * x for a, x in zip(alpha, t))] = ord("1")
    return marks.decode()


# -- the pipeline --------------------------------------------------------------

@dataclass
class PipelineOutput:
    slp_I: Slp
    slp_J: Slp
    slp_sigma: Slp
    ell: int
    pi: int
    d_offset: int
    h: int
    m1: int
    m2: int
    generators: Tuple[str, ...]
    shift: str
    data: SubsetsumData
    circuit: DagCircuit
    lengths: Dict[str, int] = field(default_factory=dict)

    def position(self, beta: str) -> int:
        """``p_beta = -bin(beta) * pi``."""
        return -int(beta, 2) * self.pi if beta else 0


def pipeline_lengths(data: SubsetsumData, m1: int, n: int, ell: int) -> Dict[str, int]:
    """Closed-form word lengths of the pipeline components."""
    r1, r2 = data.r[:m1], data.r[m1:]
    m2 = len(r2)
    k = len(data.s)
    h = sum(data.s) + 1
    pi = ell + sum(r2)
    T = h + 2**k
    sigma = n * (2 * h + 2**k)
    u = sum(r2) + 1 + 2**m2 * sigma
    S1 = (sum(r1) + 1 - 2**m1) + 2**m1 * (u + ell)
    d = sum(r1) + 1 + 2**m1 * pi
    I = S1 + d
    w = 2**m1 * (1 + pi) + 2**m1 * pi
    J = n * (2 * I + 2 * w) + 2 * (n - 1)
    return {"T": T, "sigma": sigma, "u": u, "S1": S1, "I": I, "w": w, "J": J}


def build_pipeline(c: DagCircuit, m1: int, base_generators: Sequence[str],
                   shift: str = "t", trust_one_hot: bool = False) -> PipelineOutput:
    """Assemble the programs ``I`` and ``J`` for a one-hot circuit."""
    if c.gate_order is None:
        c = preprocess_inputs(c)
    n, m = c.n, c.m
    gens = tuple(base_generators)
    if len(gens) != n:
        raise CircuitError(f"{n} outputs need {n} base generators, got {len(gens)}")
    if shift in gens or prime(shift) in gens:
        raise CircuitError(f"shift letter {shift!r} collides with a base generator")
    if not 1 <= m1 < m:
        raise CircuitError(f"need 1 <= m1 < m = {m}, got m1 = {m1}")
    if m <= 20:
        bad = c.one_hot_violation()
        if bad is not None:
            raise bad
    elif not trust_one_hot:
        raise CircuitError("one-hot property cannot be checked for m > 20; pass trust_one_hot")

    data = circuit_to_subsetsum(c)
    q, s = data.q, data.s
    r1, r2 = data.r[:m1], data.r[m1:]
    m2 = m - m1
    ell = max(sum(r1) + max(q) + 1, sum(s) - sum(r2) - min(q) + 1)
    ell = max(ell, n)
    pi = ell + sum(r2)
    h = sum(s) + 1
    d = sum(r1) + 1 + 2**m1 * pi
    t, ti = shift, prime(shift)

    b = SlpBuilder("P")
    tau = {}

    def tau_pow(e: int) -> List[str]:
        if e not in tau:
            tau[e] = b.power([t], e, "t") if e >= 0 else b.power([ti], -e, "ti")
        return tau[e]

    H = superdecreasing_slp(s, SlpBuilder("H"))
    T = [b.embed(H, {"0": [ti], "1": [a, ti]}, f"H{i}_") for i, a in enumerate(gens)]
    sigma_rhs: List[str] = []
    for i in range(n):
        sigma_rhs += tau_pow(q[i]) + [T[i]] + tau_pow(h - q[i])
    sigma = b.add(sigma_rhs, "sigma")
    G2 = superdecreasing_slp(r2, SlpBuilder("G2"))
    S2 = b.embed(G2, {"0": [t], "1": [sigma, t]}, "G2_")
    G1 = superdecreasing_slp(r1, SlpBuilder("G1"))
    S1 = b.embed(G1, {"0": [t], "1": [S2] + tau_pow(ell)}, "G1_")
    I_start = b.add([S1] + tau_pow(-d), "I")
    slp_I = b.build(I_start)
    slp_sigma = b.build(sigma)

    I_inv = b.embed(slp_invert(slp_I), None, "Iinv_")
    J_parts: List[str] = []
    for i, a in enumerate(gens):
        base = b.add([a] + tau_pow(pi), f"wb{i}_")
        w = b.add(b.power([base], 2**m1, f"wp{i}_") + tau_pow(-(2**m1) * pi), f"w{i}_")
        w_inv = b.embed(slp_invert(b.build(w)), None, f"winv{i}_")
        J_i = b.add([I_inv, w_inv, I_start, w], f"J{i}_")
        if i:
            J_parts.append(t)
        J_parts.append(J_i)
    J_parts += tau_pow(-(n - 1))
    slp_J = b.build(b.add(J_parts, "J"))

    out = PipelineOutput(slp_I=slp_I, slp_J=slp_J, slp_sigma=slp_sigma, ell=ell, pi=pi,
                         d_offset=d, h=h, m1=m1, m2=m2, generators=gens, shift=shift,
                         data=data, circuit=c)
    out.lengths = pipeline_lengths(data, m1, n, ell)
    return out


def leafstring_brute(c: DagCircuit, base_generators: Sequence[str], m1: int,
                     base) -> Dict[str, object]:
    """``lambda_beta``: product over ``gamma`` (lexicographic) of the hot generator."""
    m = c.m
    if m > 20:
        raise CircuitError("brute force is limited to m <= 20")
    m2 = m - m1
    gens = tuple(base_generators)
    out: Dict[str, object] = {}
    for beta in product("01", repeat=m1):
        acc = base.identity
        for gamma in product("01", repeat=m2):
            alpha = "".join(beta + gamma)
            vals = c.evaluate([int(ch) for ch in alpha])
            hot = [i for i, v in enumerate(vals) if v]
            if len(hot) != 1:
                raise OneHotViolation(alpha, hot)
            acc = base.mul(acc, base.letter(gens[hot[0]]))
        out["".join(beta)] = acc
    return out


# -- circuit file format ---------------------------------------------------------

def parse_circuit(text: str) -> DagCircuit:
    m = None
    gates: Dict[str, Tuple[str, str]] = {}
    outputs: Dict[int, str] = {}
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if not header:
            if parts != ["circuit"]:
                raise CircuitError(f"line {lineno}: expected 'circuit'")
            header = True
        elif parts[0] == "inputs" and len(parts) == 2:
            m = int(parts[1])
        elif parts[0] == "gate" and len(parts) == 6 and parts[2] == "=" and parts[3] == "nand":
            if parts[1] in gates:
                raise CircuitError(f"line {lineno}: gate {parts[1]!r} defined twice")
            gates[parts[1]] = (parts[4], parts[5])
        elif parts[0] == "output" and len(parts) == 3:
            outputs[int(parts[1])] = parts[2]
        else:
            raise CircuitError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if m is None:
        raise CircuitError("missing 'inputs <m>' line")
    if sorted(outputs) != list(range(len(outputs))):
        raise CircuitError("outputs must be numbered 0..n-1")
    return DagCircuit(m, gates, tuple(outputs[i] for i in range(len(outputs))))


def format_circuit(c: DagCircuit) -> str:
    lines = ["circuit", f"inputs {c.m}"]
    names = list(c.gate_order) if c.gate_order is not None else list(c.gates)
    for g in names:
        a, b = c.gates[g]
        lines.append(f"gate {g} = nand {a} {b}")
    for i, y in enumerate(c.outputs):
        lines.append(f"output {i} {y}")
    return "\n".join(lines) + "\n"


def format_subsetsum(data: SubsetsumData) -> str:
    lines = ["# gate order g_1 .. g_p: " + " ".join(data.gate_order)]
    lines += [f"q {i} {v}" for i, v in enumerate(data.q)]
    lines += [f"r {i} {v}" for i, v in enumerate(data.r, 1)]
    lines += [f"s {i} {v}" for i, v in enumerate(data.s, 1)]
    return "\n".join(lines) + "\n"


# -- desk-scale verification -------------------------------------------------------

@dataclass
class PipelineReport:
    leaf_products: Dict[str, object]
    planted: Dict[str, object]
    claim_holds: bool
    foreign_blocks_clear: bool
    j_trivial: bool
    expected_trivial: bool

    @property
    def consistent(self) -> bool:
        return self.claim_holds and self.foreign_blocks_clear and self.j_trivial == self.expected_trivial


def verify_pipeline(out: PipelineOutput, base, support_limit: int = 10**8) -> PipelineReport:
    """Check the planted values and the triviality criterion by brute force.

    ``J`` is trivial exactly when every ``lambda_beta`` commutes with every
    base generator; the planted value at ``p_beta`` must equal
    ``lambda_beta``; and shifted copies of the ``sigma`` block belonging to
    other prefixes must miss the positions that feed ``p_beta``.
    """
    from .wreath import wreath_eval_slp

    lam = leafstring_brute(out.circuit, out.generators, out.m1, base)
    f = wreath_eval_slp(out.slp_I, base, None, support_limit, out.shift)
    planted = {beta: f.get(out.position(beta), base.identity) for beta in lam}
    claim = f.shift == 0 and all(base.equal(planted[b], lam[b]) for b in lam)

    fv = wreath_eval_slp(out.slp_sigma, base, None, support_limit, out.shift)
    q, s = out.data.q, out.data.s
    lo, hi = -max(q), sum(s) - min(q)
    sup = fv.support
    keys = sup.positions if hasattr(sup, "positions") else sorted(sup)
    in_window = len(keys) == 0 or (int(keys[0]) >= lo and int(keys[-1]) <= hi)
    r1, r2 = out.data.r[:out.m1], out.data.r[out.m1:]
    clear = in_window and fv.shift == 0
    betas = list(lam)
    for beta in betas:
        for other in betas:
            if other == beta:
                continue
            dot1 = sum(int(ch) * r for ch, r in zip(other, r1))
            for gamma in product("01", repeat=out.m2):
                dot2 = sum(int(ch) * r for ch, r in zip(gamma, r2))
                x = out.position(beta) - out.position(other) + dot1 + dot2
                if x in sup:
                    clear = False
    j = wreath_eval_slp(out.slp_J, base, None, support_limit, out.shift)
    expected = True
    for beta in betas:
        for a in out.generators:
            g = base.letter(a)
            comm = base.mul(base.mul(base.inverse(lam[beta]), base.inverse(g)), base.mul(lam[beta], g))
            if not base.is_identity(comm):
                expected = False
    return PipelineReport(lam, planted, claim, clear, j.is_trivial(), expected)
