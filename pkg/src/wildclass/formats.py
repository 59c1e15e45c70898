"""Text formats for every structure kind.

Native formats are line oriented with 1-based indices:

``.graph``  header ``n m``, then ``m`` lines ``u v``
``.cdg``    header ``N M``, then ``M`` lines ``u v c`` (arc u -> v, color c >= 1)
``.grp``    header ``n``, then ``n`` rows of ``n`` entries; row i, column j is i*j
``.lat``    header ``N K``, then ``K`` lines ``u v`` meaning u is covered by v

JSON mirrors carry a ``"kind"`` key; see docs/formats.md. DOT is export only.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .groups import FiniteGroup, GroupError, validate_group
from .reductions import poset_to_lattice
from .structures import (
    ColoredDigraph,
    FiniteLattice,
    FinitePoset,
    StructureError,
    UndirectedGraph,
    WildclassError,
    order_from_covers,
)


class FormatError(WildclassError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((no, body.split()))
    return out


def _ints(tokens: list[str], count: int, line: int, what: str) -> list[int]:
    if len(tokens) != count:
        raise FormatError(f"{what}: expected {count} integers, got {len(tokens)}", line)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"{what}: non-integer token in {' '.join(tokens)!r}", line) from None


def _header(rows, count: int, what: str) -> list[int]:
    if not rows:
        raise FormatError(f"empty {what} file: missing header", 1)
    no, tokens = rows[0]
    vals = _ints(tokens, count, no, f"{what} header")
    if any(v < 0 for v in vals):
        raise FormatError(f"{what} header has a negative count", no)
    return vals


def _body(rows, expected: int, what: str):
    body = rows[1:]
    if len(body) != expected:
        last = rows[-1][0] if rows else 1
        raise FormatError(f"{what}: header announces {expected} lines, found {len(body)}", last)
    return body


# ---------------------------------------------------------------------------
# parsers


def parse_graph(text: str) -> UndirectedGraph:
    rows = _lines(text)
    n, m = _header(rows, 2, "graph")
    seen = set()
    edges = []
    for no, tokens in _body(rows, m, "graph"):
        u, v = _ints(tokens, 2, no, "edge")
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"endpoint out of range 1..{n} in edge {u} {v}", no)
        if u == v:
            raise FormatError(f"self-loop at vertex {u}", no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {key[0]} {key[1]}", no)
        seen.add(key)
        edges.append((u - 1, v - 1))
    return UndirectedGraph(n, edges)


def parse_cdg(text: str) -> ColoredDigraph:
    rows = _lines(text)
    N, M = _header(rows, 2, "cdg")
    seen = set()
    arcs = []
    for no, tokens in _body(rows, M, "cdg"):
        u, v, c = _ints(tokens, 3, no, "arc")
        if not (1 <= u <= N and 1 <= v <= N):
            raise FormatError(f"endpoint out of range 1..{N} in arc {u} {v}", no)
        if c < 1:
            raise FormatError(f"color must be >= 1, got {c}", no)
        if (u, v, c) in seen:
            raise FormatError(f"duplicate arc {u} {v} with color {c}", no)
        seen.add((u, v, c))
        arcs.append((u - 1, v - 1, c))
    return ColoredDigraph(N, arcs)


def parse_grp(text: str) -> FiniteGroup:
    rows = _lines(text)
    (n,) = _header(rows, 1, "grp")
    table = []
    for no, tokens in _body(rows, n, "grp"):
        row = _ints(tokens, n, no, "table row")
        if any(not 1 <= x <= n for x in row):
            raise FormatError(f"table entry out of range 1..{n}", no)
        table.append([x - 1 for x in row])
    try:
        return validate_group(table)
    except GroupError as exc:
        raise FormatError(f"not a group: {exc}") from None


def parse_poset(text: str) -> FinitePoset:
    rows = _lines(text)
    N, K = _header(rows, 2, "lat")
    covers = []
    for no, tokens in _body(rows, K, "lat"):
        u, v = _ints(tokens, 2, no, "cover")
        if not (1 <= u <= N and 1 <= v <= N):
            raise FormatError(f"element out of range 1..{N} in cover {u} {v}", no)
        if u == v:
            raise FormatError(f"element {u} cannot cover itself", no)
        covers.append((u - 1, v - 1))
    try:
        return FinitePoset(order_from_covers(N, covers))
    except StructureError as exc:
        raise FormatError(f"covers do not generate a partial order: {exc}") from None


def parse_lattice(text: str) -> FiniteLattice:
    P = parse_poset(text)
    try:
        return poset_to_lattice(P)
    except StructureError as exc:
        raise FormatError(f"order is not a lattice: {exc}") from None


# ---------------------------------------------------------------------------
# serializers


def _kind(obj: Any) -> str:
    kinds = [(UndirectedGraph, "graph"), (ColoredDigraph, "cdigraph"), (FiniteGroup, "group"),
             (FiniteLattice, "lattice"), (FinitePoset, "poset")]
    for cls, name in kinds:
        if isinstance(obj, cls):
            return name
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _covers(obj) -> list[tuple[int, int]]:
    P = obj if isinstance(obj, FinitePoset) else FinitePoset(obj.leq(), check=False)
    return P.covers()


def to_native(obj) -> str:
    kind = _kind(obj)
    if kind == "graph":
        lines = [f"{obj.n} {obj.m}"] + [f"{u + 1} {v + 1}" for u, v in obj.edges]
    elif kind == "cdigraph":
        lines = [f"{obj.N} {obj.M}"] + [f"{u + 1} {v + 1} {c}" for u, v, c in obj.arcs]
    elif kind == "group":
        lines = [str(obj.n)] + [" ".join(str(x + 1) for x in row) for row in obj.table.tolist()]
    else:
        covers = _covers(obj)
        lines = [f"{obj.N} {len(covers)}"] + [f"{u + 1} {v + 1}" for u, v in covers]
    return "\n".join(lines) + "\n"


def to_json_obj(obj) -> dict:
    kind = _kind(obj)
    if kind == "graph":
        return {"kind": kind, "n": obj.n, "edges": [[u + 1, v + 1] for u, v in obj.edges]}
    if kind == "cdigraph":
        out = {"kind": kind, "N": obj.N, "arcs": [[u + 1, v + 1, c] for u, v, c in obj.arcs]}
        if obj.node_labels is not None:
            out["labels"] = list(obj.node_labels)
        return out
    if kind == "group":
        return {"kind": kind, "n": obj.n, "table": (obj.table + 1).tolist()}
    return {"kind": kind, "N": obj.N, "covers": [[u + 1, v + 1] for u, v in _covers(obj)]}


def to_dot(obj) -> str:
    kind = _kind(obj)
    if kind == "graph":
        body = [f"  {i + 1};" for i in range(obj.n)]
        body += [f"  {u + 1} -- {v + 1};" for u, v in obj.edges]
        return "graph G {\n" + "\n".join(body) + "\n}\n"
    if kind == "cdigraph":
        labels = obj.node_labels
        body = ["  edge [colorscheme=set19];"]
        for i in range(obj.N):
            lab = f' [label="{labels[i]}"]' if labels else ""
            body.append(f"  {i + 1}{lab};")
        body += [f'  {u + 1} -> {v + 1} [color="{c}"];' for u, v, c in obj.arcs]
        return "digraph G {\n" + "\n".join(body) + "\n}\n"
    if kind == "group":
        raise TypeError("groups have no DOT form; export gamma(G) instead")
    body = ["  rankdir=BT;"] + [f"  {i + 1};" for i in range(obj.N)]
    body += [f"  {u + 1} -> {v + 1};" for u, v in _covers(obj)]
    return "digraph Hasse {\n" + "\n".join(body) + "\n}\n"


def serialize(obj, format: str = "native") -> str:
    if format == "native":
        return to_native(obj)
    if format == "json":
        return json.dumps(to_json_obj(obj), sort_keys=True) + "\n"
    if format == "dot":
        return to_dot(obj)
    raise ValueError(f"unknown format {format!r}")


def from_json(text: str):
    try:
        data = json.loads(text)
        kind = data["kind"]
        if kind == "graph":
            return parse_graph(to_native(UndirectedGraph(data["n"], [(u - 1, v - 1) for u, v in data["edges"]])))
        if kind == "cdigraph":
            return ColoredDigraph(data["N"], [(u - 1, v - 1, c) for u, v, c in data["arcs"]],
                                  data.get("labels"))
        if kind == "group":
            return validate_group(np.asarray(data["table"]) - 1)
        covers = [(u - 1, v - 1) for u, v in data["covers"]]
        P = FinitePoset(order_from_covers(data["N"], covers))
        return poset_to_lattice(P) if kind == "lattice" else P
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, WildclassError):
            raise FormatError(str(exc)) from None
        raise FormatError(f"malformed JSON structure: {exc}") from None


PARSERS = {
    ".graph": parse_graph,
    ".cdg": parse_cdg,
    ".grp": parse_grp,
    ".lat": parse_lattice,
}


def load(path: str | Path, kind: str | None = None):
    """Read a structure file; ``kind='poset'`` reads a .lat file as a bare poset."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return from_json(text)
    if kind == "poset":
        return parse_poset(text)
    try:
        parser = PARSERS[path.suffix]
    except KeyError:
        raise FormatError(f"unrecognised file extension {path.suffix!r}") from None
    return parser(text)
