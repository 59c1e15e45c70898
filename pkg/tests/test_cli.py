import json
import subprocess
import sys

import pytest

from wildclass import formats
from wildclass.cli import main, run
from wildclass.groups import FiniteGroup, group_iso, is_homomorphism
from wildclass.iso import verify_graph_iso
from wildclass.lattices import SublatticeEmbedding, verify_embedding
from wildclass.matrices import PrimeFieldMatrix
from wildclass.reductions import extended_incidence_lattice
from wildclass.structures import Isomorphism, UndirectedGraph


@pytest.fixture
def files(tmp_path):
    """A small working set: C4, V4, the single-edge graph and its lattice."""
    def gen(name, *argv):
        path = tmp_path / name
        assert run(["group", "gen", *argv, "-o", str(path)]).code == 0
        return str(path)

    out = {
        "c4": gen("c4.grp", "--family", "cyclic", "--n", "4"),
        "v4": gen("v4.grp", "--family", "direct_product", "--factor", "cyclic:2", "--factor", "cyclic:2"),
        "q8": gen("q8.grp", "--family", "quaternion"),
    }
    g = tmp_path / "p2.graph"
    g.write_text("2 1\n1 2\n")
    out["p2"] = str(g)
    lat = tmp_path / "p2ext.lat"
    assert run(["reduce", "incidence", str(g), "--extended", "-o", str(lat)]).code == 0
    out["p2ext"] = str(lat)
    out["tmp"] = tmp_path
    return out


def test_group_iso_cyclic_vs_klein(files):
    assert run(["group", "iso", files["c4"], files["v4"]]).code == 1
    v = run(["group", "iso", files["c4"], files["c4"], "--witness"])
    assert v.code == 0 and v.payload["mapping"] == [1, 2, 3, 4]


def test_group_iso_witness_reverifies(files, tmp_path):
    rel = tmp_path / "c4r.grp"
    G = formats.load(files["c4"])
    rel.write_text(formats.serialize(G.relabel([2, 0, 3, 1])))
    v = run(["group", "iso", files["c4"], str(rel)])
    assert v.code == 0
    mapping = [x - 1 for x in v.payload["mapping"]]
    assert is_homomorphism(G, formats.load(rel), mapping)


def test_crosscheck_on_single_edge_lattice(files):
    v = run(["lattice", "check", files["p2ext"], "--crosscheck"])
    assert v.code == 0
    assert v.payload["distributive"] is False and v.payload["modular"] is False
    assert v.payload["equivalences_hold"] is True
    L = formats.load(files["p2ext"])
    emb = SublatticeEmbedding("N5", tuple(x - 1 for x in v.payload["n5"]))
    assert verify_embedding(L, emb)


def test_lattice_check_modes(files):
    assert run(["lattice", "check", files["p2ext"], "--distributive"]).code == 1
    assert run(["lattice", "check", files["p2ext"], "--modular"]).code == 1
    found = run(["lattice", "check", files["p2ext"], "--find", "n5"])
    assert found.code == 1 and found.payload["found"]
    assert run(["lattice", "check", files["p2ext"], "--find", "M3"]).code == 0


def test_extended_incidence_writes_roles(files):
    roles = json.loads((files["tmp"] / "p2ext.roles.json").read_text())
    assert roles["roles"][roles["inf"] - 1] == "Inf"
    L = formats.load(files["p2ext"])
    assert L == extended_incidence_lattice(UndirectedGraph(2, [(0, 1)]))


def test_iso_graph_identity_witness(files):
    v = run(["iso", "--kind", "graph", files["p2"], files["p2"], "--witness"])
    assert v.code == 0 and v.payload["mapping"] == [1, 2]
    assert "1->1" in v.text
    G = formats.load(files["p2"])
    assert verify_graph_iso(G, G, Isomorphism([x - 1 for x in v.payload["mapping"]]))


def test_iso_kind_mismatch_is_an_error(files):
    assert run(["iso", "--kind", "graph", files["c4"], files["c4"]]).code == 2


def test_gamma_round_trip_through_files(files, tmp_path):
    cdg = tmp_path / "q8.cdg"
    v = run(["reduce", "gamma", files["q8"], "-o", str(cdg), "--pruned"])
    assert v.code == 0 and v.payload == {"nodes": 72, "arcs": 192, "colors": {"1": 64, "2": 64, "3": 64}}
    back = tmp_path / "back.grp"
    assert run(["reduce", "gamma-inv", str(cdg), "-o", str(back)]).code == 0
    assert group_iso(formats.load(files["q8"]), formats.load(back)) is not None


def test_simsim(tmp_path):
    A, B = [[1, 1], [0, 1]], [[0, 1], [1, 0]]
    S = PrimeFieldMatrix([[1, 0], [1, 1]], 2)
    Sa, Sb = (S @ PrimeFieldMatrix(m, 2) @ S.inverse() for m in (A, B))
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps([[A, B], [Sa.tolist(), Sb.tolist()]]))
    v = run(["matrix", "simsim", str(path), "--p", "2"])
    assert v.code == 0
    T = PrimeFieldMatrix(v.payload["S"], 2)
    assert T @ PrimeFieldMatrix(A, 2) @ T.inverse() == Sa
    assert T @ PrimeFieldMatrix(B, 2) @ T.inverse() == Sb
    path.write_text(json.dumps({"p": 2, "pairs": [[A, B], [[[0, 0], [0, 0]], B]]}))
    assert run(["matrix", "simsim", str(path)]).code == 1


def test_skewcong(tmp_path):
    m1, m2, z = tmp_path / "m1.json", tmp_path / "m2.json", tmp_path / "z.json"
    m1.write_text("[[0, 1], [2, 0]]")
    m2.write_text("[[0, 2], [1, 0]]")
    z.write_text("[[0, 0], [0, 0]]")
    assert run(["matrix", "skewcong", str(m1), str(m2), "--p", "3"]).code == 0
    assert run(["matrix", "skewcong", str(m1), str(z), "--p", "3"]).code == 1
    assert run(["matrix", "skewcong", str(m1), str(m2)]).code == 2


def test_scale_guard_is_an_error(tmp_path):
    big = [[0] * 4 for _ in range(4)]
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps([[big, big], [big, big]]))
    v = run(["matrix", "simsim", str(path), "--p", "3"])
    assert v.code == 2 and "exceeds" in v.payload["error"]


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["group", "iso", "/nonexistent/a.grp", "/nonexistent/b.grp"],
    ["verify", "theorem3", "--scale", "9"],
    ["group", "gen", "--family", "heisenberg", "--p", "4"],
])
def test_errors_exit_two(argv):
    assert run(argv).code == 2


def test_bad_file_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("2\n1 2\n2 2\n")
    assert main(["group", "iso", str(bad), str(bad)]) == 2
    assert "not a group" in capsys.readouterr().err


def test_verify_exit_codes():
    assert run(["verify", "theorem2", "--scale", "4"]).code == 0
    assert run(["verify", "theorem3", "--scale", "3"]).code == 0
    assert run(["verify", "theorem4", "--scale", "2"]).code == 1


def test_export_formats(files):
    for fmt in ("native", "json", "dot"):
        assert run(["export", files["p2ext"], "--format", fmt]).code == 0
    v = run(["export", files["c4"], "--format", "json"])
    assert isinstance(formats.from_json(v.payload["text"]), FiniteGroup)


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "wildclass.cli", *argv],
                          capture_output=True, text=True, check=False)


def test_json_output_is_byte_identical(files):
    runs = [_cli("--json", "lattice", "check", files["p2ext"], "--crosscheck") for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    json.loads(runs[0].stdout)
    a = _cli("verify", "theorem4", "--scale", "3", "--json")
    b = _cli("verify", "theorem4", "--scale", "3", "--json")
    assert a.returncode == 1 and a.stdout == b.stdout


def test_json_flag_at_leaf_level(files, capsys):
    assert main(["group", "iso", files["c4"], files["v4"], "--json"]) == 1
    assert json.loads(capsys.readouterr().out) == {"isomorphic": False}
