"""Command-line front end.

Exit codes: 0 for trivial / success, 1 for nontrivial / failed check,
2 for usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import barrington, reduction, slp as slpmod, wreath
from .groups import WREATH_BASES, base_handle, group_names, lookup
from .sens import PROVIDER_NAMES, nested_commutator, provider
from .words import PAD, format_word, parse_word, prime

EXIT_OK, EXIT_NO, EXIT_ERR = 0, 1, 2
VERIFY_SUPPORT_LIMIT = 10**8


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit(args, verdict: Optional[bool], payload: Dict) -> int:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    elif verdict is not None:
        print("TRIVIAL" if verdict else "NONTRIVIAL")
    return EXIT_OK if verdict or verdict is None else EXIT_NO


def _expand_limit(args) -> int:
    return args.expand_limit if args.expand_limit is not None else slpmod.expand_limit()


# -- wp / cwp ----------------------------------------------------------------------

def cmd_wp(args) -> int:
    g = lookup(args.group)
    word = parse_word(_read(args.word_file), g.alphabet)
    verdict = g.is_trivial(word)
    return _emit(args, verdict, {"command": "wp", "group": g.name, "length": len(word),
                                 "trivial": verdict})


def cmd_cwp(args) -> int:
    g = lookup(args.group)
    prog = slpmod.parse_slp(_read(args.slp_file))
    for x in prog.terminals():
        g.alphabet.parse_token(x)
    prog = slpmod.slp_substitute(prog, {x: (g.alphabet.parse_token(x),) for x in prog.terminals()})
    n = prog.length()
    if g.is_wreath:
        limit = args.support_limit if args.support_limit is not None else wreath.DEFAULT_SUPPORT_LIMIT
        elem = wreath.wreath_eval_slp(prog, g.handle, g.modulus, limit, g.shift)
        verdict = elem.is_trivial()
        method = "compressed"
    else:
        word = prog.expand(_expand_limit(args))
        verdict = g.oracle.is_trivial(word)
        method = "expanded"
    return _emit(args, verdict, {"command": "cwp", "group": g.name, "length": n,
                                 "method": method, "trivial": verdict})


# -- slp ---------------------------------------------------------------------------

def cmd_slp(args) -> int:
    prog = slpmod.parse_slp(_read(args.slp_file))
    op = args.op
    if op == "expand":
        print(format_word(prog.expand(_expand_limit(args))))
    elif op == "length":
        print(prog.length())
    elif op == "count":
        print(prog.count(args.letter))
    elif op == "at":
        try:
            print(prog.at(args.position))
        except slpmod.OutOfRange as exc:
            print(f"OUT_OF_RANGE: {exc}")
            return EXIT_NO
    elif op == "invert":
        alphabet = lookup(args.group).alphabet if args.group else None
        _write(args.out, slpmod.slp_invert(prog, alphabet).to_text())
    elif op == "substring":
        _write(args.out, slpmod.slp_substring(prog, args.p, args.q).to_text())
    return EXIT_OK


# -- barrington ----------------------------------------------------------------------

def cmd_barrington(args) -> int:
    prov = provider(args.group)
    if args.sub == "compile":
        circ = barrington.parse_nandtree(_read(args.circuit))
        prog = barrington.compile_program(circ, prov)
        _write(args.out, barrington.format_program(prog))
        if args.out not in (None, "-"):
            print(f"wrote {len(prog)} instructions (8^{circ.depth} * {prov.leaf_length(circ.depth)})")
        return EXIT_OK
    if args.sub == "run":
        prog = barrington.parse_program(_read(args.program), prov.alphabet)
        word = barrington.run_program(prog, args.input)
        verdict = prov.oracle.is_trivial(word)
        if args.json:
            print(json.dumps({"command": "barrington run", "group": prov.name, "input": args.input,
                              "word": list(word), "trivial": verdict}, sort_keys=True))
        else:
            print(format_word(word))
            print("TRIVIAL" if verdict else "NONTRIVIAL")
        return EXIT_OK if verdict else EXIT_NO
    # check
    circ = barrington.parse_nandtree(_read(args.circuit))
    if circ.n_inputs > 20:
        raise CliError("check sweeps all inputs and is limited to 20 input bits")
    if args.program:
        prog = barrington.parse_program(_read(args.program), prov.alphabet)
    else:
        prog = barrington.compile_program(circ, prov)
    mismatches: List[str] = []
    for bits in product("01", repeat=circ.n_inputs):
        x = "".join(bits)
        if prov.oracle.is_trivial(barrington.run_program(prog, x)) != (barrington.circuit_eval(circ, x) == 0):
            mismatches.append(x)
    ok = not mismatches
    payload = {"command": "barrington check", "group": prov.name, "inputs": 2**circ.n_inputs,
               "mismatches": mismatches, "ok": ok, "program_length": len(prog)}
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("OK" if ok else f"MISMATCH on {len(mismatches)} inputs: {' '.join(mismatches[:10])}")
    return EXIT_OK if ok else EXIT_NO


# -- sens ----------------------------------------------------------------------------

def cmd_sens(args) -> int:
    prov = provider(args.group)
    d = args.depth
    if d < 0:
        raise CliError("depth must be non-negative")
    if args.leaf is not None:
        v = "" if args.leaf == "-" else args.leaf
        print(format_word(prov.leaf(d, v)))
        return EXIT_OK
    for i in range(2**d):
        v = format(i, f"0{d}b") if d else ""
        print(f"{v or '-'}: {format_word(prov.leaf(d, v))}")
    if args.check:
        word = nested_commutator(prov, d)
        verdict = prov.oracle.is_trivial(word)
        print(f"nested commutator length {len(word)}: {'TRIVIAL' if verdict else 'NONTRIVIAL'}")
        return EXIT_NO if verdict else EXIT_OK
    return EXIT_OK


# -- cwpreduce ---------------------------------------------------------------------------

def _parse_morphism(text: str) -> Dict[str, tuple]:
    out: Dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise CliError(f"morphism line {lineno}: expected '<letter> -> <word>'")
        head, rhs = line.split("->", 1)
        out[head.strip()] = tuple(rhs.split())
    return out


def cmd_cwpreduce(args) -> int:
    circ = reduction.parse_circuit(_read(args.circuit_file))
    handle = base_handle(args.group)
    if args.generators:
        gens = tuple(x.strip() for x in args.generators.split(","))
    else:
        positive = [x for x in handle.alphabet.letters if x != PAD and not x.endswith("'")]
        gens = tuple(positive[: len(circ.outputs)])
    for a in gens:
        handle.letter(a)
    shift = wreath.default_shift_letter(handle.alphabet.letters)
    out = reduction.build_pipeline(circ, args.m1, gens, shift=shift, trust_one_hot=args.trust_one_hot)
    result_slp = out.slp_J
    summary = {"command": "cwpreduce", "group": args.group, "generators": list(gens),
               "shift": shift, "m1": out.m1, "m2": out.m2, "ell": str(out.ell),
               "pi": str(out.pi), "d": str(out.d_offset), "h": str(out.h),
               "gate_order": list(out.data.gate_order), "J_size": out.slp_J.size,
               "J_length": str(out.slp_J.length()), "I_length": str(out.slp_I.length())}
    if args.embed:
        try:
            phi_path, p, n = args.embed.split(",")
            p, n = int(p), int(n)
        except ValueError:
            raise CliError("--embed expects phi1_file,p,n") from None
        phi1 = _parse_morphism(_read(phi_path))
        if shift not in phi1 and "t" in phi1 and "t" not in handle.alphabet.letters:
            phi1[shift] = phi1.pop("t")
        images = wreath.phi_n_slps(phi1, p, n, shift=shift)
        b = slpmod.SlpBuilder("E")
        starts = {x: [b.embed(g, None, "e")] for x, g in images.items()}
        for x in result_slp.terminals():
            if x not in starts:
                raise CliError(f"morphism has no image for letter {x!r}")
        start = b.embed(result_slp, starts, "j")
        result_slp = b.build(start)
        bound = 2 * out.slp_J.length() + 1
        summary.update({"embed_p": p, "embed_n": n, "embedded_size": result_slp.size,
                        "modulus_ok": p**n >= bound})
        if p**n < bound:
            print(f"warning: p^n = {p**n} is below 2|val(J)|+1 = {bound}", file=sys.stderr)
    _write(args.out, result_slp.to_text())
    if args.out_i:
        _write(args.out_i, out.slp_I.to_text())
    if args.subsetsum:
        _write(args.subsetsum, reduction.format_subsetsum(out.data))
    code = EXIT_OK
    if args.verify:
        if args.group not in ("a5",) and handle.table is None and out.slp_J.length() > 10**7:
            raise CliError("verification needs a finite base group or a small instance")
        limit = args.support_limit if args.support_limit is not None else VERIFY_SUPPORT_LIMIT
        report = reduction.verify_pipeline(out, handle, limit)
        summary.update({
            "claim_holds": report.claim_holds,
            "foreign_blocks_clear": report.foreign_blocks_clear,
            "J_trivial": report.j_trivial,
            "expected_trivial": report.expected_trivial,
            "leaf_products": {b: handle.format(v) for b, v in report.leaf_products.items()},
            "verified": report.consistent,
        })
        code = EXIT_OK if report.consistent else EXIT_NO
        if not args.json:
            print(f"claim f(p_beta) = lambda_beta: {'yes' if report.claim_holds else 'NO'}")
            print(f"foreign blocks clear: {'yes' if report.foreign_blocks_clear else 'NO'}")
            print(f"val(J) trivial: {report.j_trivial}; expected: {report.expected_trivial}")
            print("VERIFIED" if report.consistent else "MISMATCH")
    if args.json:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return code


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gwp", description="Word problems, SLPs, group programs "
                                 "and the circuit-to-compressed-word reduction.")
    ap.add_argument("--expand-limit", type=int, default=None,
                    help="maximum length of a decompressed word (default: $GWP_EXPAND_LIMIT or 10^8)")
    ap.add_argument("--support-limit", type=int, default=None,
                    help="maximum support size during compressed wreath evaluation "
                         f"(default {wreath.DEFAULT_SUPPORT_LIMIT} for cwp, {VERIFY_SUPPORT_LIMIT} "
                         "for cwpreduce --verify)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    groups = ", ".join(group_names())

    p = sub.add_parser("wp", help="decide whether a word is trivial")
    p.add_argument("--group", required=True, help=groups)
    p.add_argument("word_file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("cwp", help="decide whether the word derived by an SLP is trivial")
    p.add_argument("--group", required=True, help=groups)
    p.add_argument("slp_file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cwp)

    p = sub.add_parser("slp", help="query a straight-line program")
    p.add_argument("op", choices=["expand", "length", "at", "count", "invert", "substring"])
    p.add_argument("slp_file")
    p.add_argument("--position", type=int, help="position for 'at' (0-based)")
    p.add_argument("--letter", help="letter for 'count'")
    p.add_argument("--p", type=int, help="first position for 'substring'")
    p.add_argument("--q", type=int, help="last position (inclusive) for 'substring'")
    p.add_argument("--group", help="alphabet used by 'invert' (default: the x / x' convention)")
    p.add_argument("--out", help="output file for 'invert'/'substring' (default stdout)")
    p.set_defaults(func=cmd_slp)

    p = sub.add_parser("barrington", help="compile and run group programs")
    bsub = p.add_subparsers(dest="sub", required=True)
    for name in ("compile", "run", "check"):
        q = bsub.add_parser(name)
        q.add_argument("--group", required=True, choices=PROVIDER_NAMES)
        q.add_argument("--json", action="store_true")
        if name in ("compile", "check"):
            q.add_argument("--circuit", required=True)
        if name == "compile":
            q.add_argument("--out")
        if name in ("run", "check"):
            q.add_argument("--program", required=(name == "run"))
        if name == "run":
            q.add_argument("--input", required=True)
        q.set_defaults(func=cmd_barrington)

    p = sub.add_parser("sens", help="print nested-commutator leaves")
    p.add_argument("--group", required=True, choices=PROVIDER_NAMES)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--leaf", help="binary string v of length depth ('-' for the empty string)")
    p.add_argument("--check", action="store_true", help="also test the nested commutator")
    p.set_defaults(func=cmd_sens)

    p = sub.add_parser("cwpreduce", help="circuit to compressed wreath-product word")
    p.add_argument("circuit_file")
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--group", default="a5", choices=WREATH_BASES)
    p.add_argument("--generators", help="comma separated base letters a_0,...,a_{n-1}")
    p.add_argument("--out", help="file for the SLP J (default stdout)")
    p.add_argument("--out-i", dest="out_i", help="file for the SLP I")
    p.add_argument("--subsetsum", help="file for the subset-sum numbers")
    p.add_argument("--verify", action="store_true", help="brute-force end-to-end check")
    p.add_argument("--embed", help="phi1_file,p,n: compose with the iterated embedding")
    p.add_argument("--trust-one-hot", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cwpreduce)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except slpmod.ExpansionLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERR
    except (CliError, ValueError, KeyError, IndexError, RuntimeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
