import json

import pytest

from wildclass import formats
from wildclass.formats import FormatError, parse_graph, serialize
from wildclass.groups import catalog
from wildclass.lattices import boolean, chain, enumerate_lattices, m3, n5
from wildclass.reductions import extended_incidence, extended_incidence_lattice, gamma, incidence
from wildclass.structures import ColoredDigraph, FinitePoset, UndirectedGraph
from wildclass.verify import labeled_graphs


def test_parse_graph_examples():
    G = parse_graph("2 1\n1 2")
    assert (G.n, G.edges) == (2, ((0, 1),))
    E = parse_graph("3 0")
    assert (E.n, E.m) == (3, 0)


@pytest.mark.parametrize("text, line, fragment", [
    ("2 1\n1 1", 2, "self-loop"),
    ("2 1\n1 3", 2, "out of range"),
    ("3 2\n1 2\n2 1", 3, "duplicate"),
    ("x y", 1, "header"),
    ("", 1, "header"),
    ("2 2\n1 2", 2, "announces"),
])
def test_parse_graph_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_serialize_graph_example():
    assert serialize(UndirectedGraph(2, [(0, 1)])) == "2 1\n1 2\n"


def test_dot_encodes_arc_color():
    dot = serialize(ColoredDigraph(2, [(0, 1, 1)]), "dot")
    edges = [line for line in dot.splitlines() if "->" in line]
    assert edges == ['  1 -> 2 [color="1"];']


def _catalog_structures():
    out = []
    out += list(labeled_graphs(3)) + [UndirectedGraph(4, [(0, 1), (2, 3)])]
    out += [gamma(G, pruned).underlying for G in list(catalog().values())[:9] for pruned in (False, True)]
    out += [incidence(UndirectedGraph(3, [(0, 1), (1, 2)]))]
    out += list(catalog().values())[:14]
    lattices = [L for k in range(1, 7) for L in enumerate_lattices(k)]
    lattices += [chain(5), m3(), n5(), boolean(3)]
    lattices += [extended_incidence_lattice(G) for G in labeled_graphs(3)]
    out += lattices
    out += [FinitePoset(L.leq()) for L in lattices[:10]]
    return out


CATALOG = _catalog_structures()


def _reparse(text: str, obj):
    kind = formats._kind(obj)
    return {
        "graph": formats.parse_graph,
        "cdigraph": formats.parse_cdg,
        "group": formats.parse_grp,
        "lattice": formats.parse_lattice,
        "poset": formats.parse_poset,
    }[kind](text)


@pytest.mark.parametrize("obj", CATALOG, ids=lambda o: type(o).__name__)
def test_native_round_trip(obj):
    assert _reparse(serialize(obj), obj) == obj


@pytest.mark.parametrize("obj", CATALOG, ids=lambda o: type(o).__name__)
def test_json_round_trip(obj):
    text = serialize(obj, "json")
    assert json.loads(text)["kind"] == formats._kind(obj)
    assert formats.from_json(text) == obj


def test_cdg_round_trip_keeps_labels_in_json():
    D = extended_incidence(UndirectedGraph(2, [(0, 1)])).underlying
    back = formats.from_json(serialize(D, "json"))
    assert back.node_labels == D.node_labels


def test_grp_rejects_non_group():
    with pytest.raises(FormatError, match="not a group"):
        formats.parse_grp("2\n1 2\n2 2")


def test_lat_rejects_non_lattice():
    # two maximal elements, no top
    with pytest.raises(FormatError, match="not a lattice"):
        formats.parse_lattice("3 2\n1 2\n1 3")


def test_lat_rejects_cyclic_covers():
    with pytest.raises(FormatError):
        formats.parse_poset("2 2\n1 2\n2 1")


def test_hasse_dot_for_lattice():
    dot = serialize(chain(3), "dot")
    assert "rankdir=BT" in dot and "1 -> 2" in dot and "2 -> 3" in dot


def test_load_by_extension(tmp_path):
    p = tmp_path / "g.graph"
    p.write_text("3 1\n1 3\n")
    assert formats.load(p) == UndirectedGraph(3, [(0, 2)])
    odd = tmp_path / "x.unknown"
    odd.write_text("")
    with pytest.raises(FormatError):
        formats.load(odd)
