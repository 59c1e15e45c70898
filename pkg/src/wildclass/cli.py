"""``wildclass`` command line.

Exit codes: 0 = yes / property holds / pattern absent, 1 = no / fails /
pattern found, 2 = error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import formats
from .groups import FiniteGroup, group_iso, make_group
from .iso import digraph_iso, graph_iso, lattice_iso, poset_iso
from .lattices import birkhoff_crosscheck, find_sublattice, is_distributive, is_modular
from .matrices import MatrixPair, PrimeFieldMatrix, sim_similar, skew_congruent
from .reductions import extended_incidence, extended_incidence_poset, gamma, gamma_inverse, incidence
from .structures import ColoredDigraph, FiniteLattice, FinitePoset, UndirectedGraph, WildclassError
from .verify import pipeline_verify


@dataclass
class CliVerdict:
    code: int
    payload: Any = None
    text: str = ""
    outputs: dict[str, str] = field(default_factory=dict)
    emit_json: bool = False


class UsageError(WildclassError):
    pass


def _expect(obj, cls, path) -> Any:
    if not isinstance(obj, cls):
        raise UsageError(f"{path}: expected a {cls.__name__}, got {type(obj).__name__}")
    return obj


def _write(path: str | None, text: str, verdict: CliVerdict) -> None:
    if path:
        Path(path).write_text(text)
        verdict.outputs[path] = text


# ---------------------------------------------------------------------------
# group


def _family_group(text: str) -> FiniteGroup:
    """``cyclic:6``, ``dihedral:4``, ``heisenberg:3`` or ``quaternion``."""
    name, _, arg = text.partition(":")
    key = {"cyclic": "n", "dihedral": "k", "heisenberg": "p"}.get(name)
    return make_group(name, **({key: int(arg)} if key else {}))


def cmd_group_gen(args) -> CliVerdict:
    fam = args.family
    if fam == "direct_product":
        if not args.factor or len(args.factor) != 2:
            raise UsageError("direct_product needs exactly two --factor specs")
        G = make_group(fam, G=_family_group(args.factor[0]), H=_family_group(args.factor[1]))
    else:
        params = {k: getattr(args, k) for k in ("n", "k", "p") if getattr(args, k) is not None}
        G = make_group(fam, **params)
    text = formats.serialize(G)
    v = CliVerdict(0, {"order": G.n, "abelian": G.is_abelian()}, f"group of order {G.n}")
    if args.output:
        _write(args.output, text, v)
    else:
        v.text = text.rstrip()
    return v


def cmd_group_iso(args) -> CliVerdict:
    A = _expect(formats.load(args.a), FiniteGroup, args.a)
    B = _expect(formats.load(args.b), FiniteGroup, args.b)
    return _iso_verdict(group_iso(A, B), args.witness)


def _iso_verdict(iso, witness: bool) -> CliVerdict:
    if iso is None:
        return CliVerdict(1, {"isomorphic": False}, "not isomorphic")
    payload = {"isomorphic": True, "mapping": [x + 1 for x in iso.mapping]}
    text = "isomorphic"
    if witness:
        text += "\n" + " ".join(f"{i + 1}->{j + 1}" for i, j in enumerate(iso.mapping))
    return CliVerdict(0, payload, text)


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce_gamma(args) -> CliVerdict:
    G = _expect(formats.load(args.input), FiniteGroup, args.input)
    D = gamma(G, pruned=args.pruned).underlying
    v = CliVerdict(0, {"nodes": D.N, "arcs": D.M, "colors": {str(c): k for c, k in D.color_counts().items()}},
                   f"gamma: {D.N} nodes, {D.M} arcs")
    _write(args.output, formats.serialize(D), v)
    return v


def cmd_reduce_gamma_inv(args) -> CliVerdict:
    D = _expect(formats.load(args.input), ColoredDigraph, args.input)
    G = gamma_inverse(D)
    v = CliVerdict(0, {"order": G.n}, f"recovered group of order {G.n}")
    _write(args.output, formats.serialize(G), v)
    return v


def cmd_reduce_incidence(args) -> CliVerdict:
    G = _expect(formats.load(args.input), UndirectedGraph, args.input)
    if not args.extended:
        D = incidence(G)
        v = CliVerdict(0, {"nodes": D.N, "arcs": D.M}, f"incidence graph: {D.N} nodes, {D.M} arcs")
        _write(args.output, formats.serialize(D), v)
        return v
    E = extended_incidence(G)
    P = extended_incidence_poset(G)
    roles = {"roles": list(E.roles), "inf": E.inf + 1, "sup": E.sup + 1}
    v = CliVerdict(0, {"elements": P.N, "covers": len(P.covers()), **roles},
                   f"extended incidence lattice: {P.N} elements, {len(P.covers())} covers")
    if args.output:
        _write(args.output, formats.serialize(P), v)
        _write(str(Path(args.output).with_suffix(".roles.json")), json.dumps(roles, indent=2) + "\n", v)
    return v


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice_check(args) -> CliVerdict:
    L = _expect(formats.load(args.input), FiniteLattice, args.input)
    if args.distributive:
        ok, w = is_distributive(L)
        payload = {"distributive": ok, "witness": None if w is None else
                   {"x": w.x + 1, "y": w.y + 1, "z": w.z + 1, "lhs": w.lhs + 1, "rhs": w.rhs + 1}}
        return CliVerdict(0 if ok else 1, payload, "distributive" if ok else f"not distributive: {payload['witness']}")
    if args.modular:
        ok, w = is_modular(L)
        payload = {"modular": ok, "witness": None if w is None else dict(zip("xab", (t + 1 for t in w)))}
        return CliVerdict(0 if ok else 1, payload, "modular" if ok else f"not modular: {payload['witness']}")
    if args.find:
        emb = find_sublattice(L, args.find)
        pat = args.find.upper()
        if emb is None:
            return CliVerdict(0, {"pattern": pat, "found": False}, f"no {pat} sublattice")
        elems = [e + 1 for e in emb.elements]
        return CliVerdict(1, {"pattern": pat, "found": True, "elements": elems}, f"{pat} sublattice at {elems}")
    rep = birkhoff_crosscheck(L)
    d = rep.as_dict()
    shift = lambda xs: None if xs is None else [x + 1 for x in xs]
    payload = {k: (shift(val) if isinstance(val, list) else val) for k, val in d.items()}
    payload["equivalences_hold"] = True
    text = f"distributive={rep.distributive} modular={rep.modular}; Birkhoff equivalences hold"
    return CliVerdict(0, payload, text)


# ---------------------------------------------------------------------------
# iso


ISO_KINDS = {
    "graph": (UndirectedGraph, graph_iso, None),
    "cdigraph": (ColoredDigraph, digraph_iso, None),
    "poset": (FinitePoset, poset_iso, "poset"),
    "lattice": (FiniteLattice, lattice_iso, None),
    "group": (FiniteGroup, group_iso, None),
}


def cmd_iso(args) -> CliVerdict:
    cls, fn, load_kind = ISO_KINDS[args.kind]
    A = _expect(formats.load(args.a, load_kind), cls, args.a)
    B = _expect(formats.load(args.b, load_kind), cls, args.b)
    return _iso_verdict(fn(A, B), args.witness)


# ---------------------------------------------------------------------------
# matrix


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise formats.FormatError(f"{path}: invalid JSON: {exc}") from None


def _matrix(data, p: int) -> PrimeFieldMatrix:
    if isinstance(data, dict):
        data = data.get("matrix")
    return PrimeFieldMatrix(data, p)


def cmd_matrix_simsim(args) -> CliVerdict:
    data = _read_json(args.input)
    p = args.p if args.p is not None else (data.get("p") if isinstance(data, dict) else None)
    if p is None:
        raise UsageError("modulus missing: pass --p or a top-level \"p\"")
    pairs = data["pairs"] if isinstance(data, dict) else data
    if len(pairs) != 2:
        raise UsageError("pairs file must hold exactly two pairs")
    P1, P2 = (MatrixPair(_matrix(pr[0] if isinstance(pr, list) else pr["A"], p),
                         _matrix(pr[1] if isinstance(pr, list) else pr["B"], p)) for pr in pairs)
    S = sim_similar(P1, P2)
    if S is None:
        return CliVerdict(1, {"similar": False}, "not simultaneously similar")
    return CliVerdict(0, {"similar": True, "S": S.tolist()}, f"simultaneously similar via S={S.tolist()}")


def cmd_matrix_skewcong(args) -> CliVerdict:
    if args.p is None:
        raise UsageError("--p is required")
    M1 = _matrix(_read_json(args.m1), args.p)
    M2 = _matrix(_read_json(args.m2), args.p)
    S = skew_congruent(M1, M2)
    if S is None:
        return CliVerdict(1, {"congruent": False}, "not congruent")
    return CliVerdict(0, {"congruent": True, "S": S.tolist()}, f"congruent via S={S.tolist()}")


# ---------------------------------------------------------------------------
# verify / export


def cmd_verify(args) -> CliVerdict:
    default = {"theorem2": 8, "theorem3": 4, "theorem4": 4}[args.kind]
    report = pipeline_verify(args.kind, args.scale or default)
    code = 0 if report["holds"] else 1
    v = CliVerdict(code, report, _verify_text(report))
    if args.output:
        _write(args.output, json.dumps(report, indent=2, sort_keys=True) + "\n", v)
    return v


def _verify_text(r: dict) -> str:
    if r["kind"] == "theorem2":
        lines = [f"theorem2 (orders <= {r['scale']}): {r['pairs_checked']} pairs, "
                 f"{len(r['disagreements'])} disagreements"]
        lines += [f"  order {k}: {v['pairs']} same-order pairs, {v['isomorphic']} isomorphic"
                  for k, v in r["per_order"].items()]
    elif r["kind"] == "theorem3":
        lines = [f"theorem3 (n = {r['scale']}): {r['graph_classes']} graph classes -> "
                 f"{r['non_isomorphic_lattices']} non-isomorphic lattices; "
                 f"{len(r['relabel_failures'])}/{r['relabel_trials']} relabel failures"]
    else:
        lines = [f"theorem4 (n <= {r['scale']}): {r['lattices']} lattices, "
                 f"{r['contradicting_claim']} contradict the no-M3/no-N5 claim"]
        lines.append("n | edges | size | distributive | modular | M3 | N5")
        for row in r["rows"]:
            lines.append(f"{row['n']} | {row['edges']} | {row['size']} | {row['distributive']} | "
                         f"{row['modular']} | {row['m3']} | {row['n5']}")
    return "\n".join(lines)


def cmd_export(args) -> CliVerdict:
    obj = formats.load(args.input)
    text = formats.serialize(obj, args.format)
    v = CliVerdict(0, {"format": args.format}, "")
    if args.output:
        _write(args.output, text, v)
    else:
        v.text = text.rstrip()
        v.payload = {"format": args.format, "text": text}
    return v


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the structured payload as JSON")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="output file")

    parser = argparse.ArgumentParser(prog="wildclass", parents=[common],
                                     description="Reductions and checkers for classification problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group", help="finite groups").add_subparsers(dest="action", required=True)
    gen = group.add_parser("gen", parents=[common], help="generate a group table")
    gen.add_argument("--family", required=True,
                     choices=["cyclic", "dihedral", "direct_product", "heisenberg", "quaternion"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--p", type=int)
    gen.add_argument("--factor", action="append", help="direct_product factor, e.g. cyclic:2")
    gen.set_defaults(func=cmd_group_gen)
    giso = group.add_parser("iso", parents=[common], help="decide group isomorphism")
    giso.add_argument("a")
    giso.add_argument("b")
    giso.add_argument("--witness", action="store_true")
    giso.set_defaults(func=cmd_group_iso)

    red = sub.add_parser("reduce", help="apply a reduction").add_subparsers(dest="action", required=True)
    g = red.add_parser("gamma", parents=[common], help="group -> colored digraph")
    g.add_argument("input")
    g.add_argument("--pruned", action="store_true")
    g.set_defaults(func=cmd_reduce_gamma)
    gi = red.add_parser("gamma-inv", parents=[common], help="colored digraph -> group")
    gi.add_argument("input")
    gi.set_defaults(func=cmd_reduce_gamma_inv)
    inc = red.add_parser("incidence", parents=[common], help="graph -> (extended) incidence structure")
    inc.add_argument("input")
    inc.add_argument("--extended", action="store_true")
    inc.set_defaults(func=cmd_reduce_incidence)

    lat = sub.add_parser("lattice", help="lattice properties").add_subparsers(dest="action", required=True)
    chk = lat.add_parser("check", parents=[common], help="check a lattice property")
    chk.add_argument("input")
    mode = chk.add_mutually_exclusive_group(required=True)
    mode.add_argument("--distributive", action="store_true")
    mode.add_argument("--modular", action="store_true")
    mode.add_argument("--find", type=str.upper, choices=["M3", "N5"])
    mode.add_argument("--crosscheck", action="store_true")
    chk.set_defaults(func=cmd_lattice_check)

    iso = sub.add_parser("iso", parents=[common], help="decide isomorphism")
    iso.add_argument("--kind", required=True, choices=sorted(ISO_KINDS))
    iso.add_argument("a")
    iso.add_argument("b")
    iso.add_argument("--witness", action="store_true")
    iso.set_defaults(func=cmd_iso)

    mat = sub.add_parser("matrix", help="matrix oracles").add_subparsers(dest="action", required=True)
    ss = mat.add_parser("simsim", parents=[common], help="simultaneous similarity of two pairs")
    ss.add_argument("input")
    ss.add_argument("--p", type=int)
    ss.set_defaults(func=cmd_matrix_simsim)
    sc = mat.add_parser("skewcong", parents=[common], help="congruence of skew-symmetric matrices")
    sc.add_argument("m1")
    sc.add_argument("m2")
    sc.add_argument("--p", type=int)
    sc.set_defaults(func=cmd_matrix_skewcong)

    ver = sub.add_parser("verify", parents=[common], help="run a theorem pipeline")
    ver.add_argument("kind", choices=["theorem2", "theorem3", "theorem4"])
    ver.add_argument("--scale", type=int)
    ver.set_defaults(func=cmd_verify)

    exp = sub.add_parser("export", parents=[common], help="convert a structure file")
    exp.add_argument("input")
    exp.add_argument("--format", required=True, choices=["native", "json", "dot"])
    exp.set_defaults(func=cmd_export)
    return parser


def run(argv: Sequence[str] | None = None) -> CliVerdict:
    """Parse and dispatch; never raises for bad input (code 2 instead)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CliVerdict(2 if exc.code else 0, None, "")
    args.json = getattr(args, "json", False)
    args.output = getattr(args, "output", None)
    try:
        verdict = args.func(args)
    except (WildclassError, OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        return CliVerdict(2, {"error": str(exc)}, f"error: {exc}")
    verdict.emit_json = args.json
    return verdict


def main(argv: Sequence[str] | None = None) -> int:
    verdict = run(argv)
    if verdict.code == 2 and verdict.payload and "error" in verdict.payload:
        print(verdict.text, file=sys.stderr)
    if verdict.emit_json:
        print(json.dumps(verdict.payload, sort_keys=True))
    elif verdict.text and verdict.code != 2:
        print(verdict.text)
    return verdict.code


if __name__ == "__main__":
    sys.exit(main())
