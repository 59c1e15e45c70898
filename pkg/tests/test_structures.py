import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_poset_table
from wildclass.structures import (
    ColoredDigraph,
    CycleDetected,
    FiniteLattice,
    FinitePoset,
    Isomorphism,
    NotAntisymmetric,
    NotReflexive,
    NotTransitive,
    StructureError,
    UndirectedGraph,
    validate_poset,
)
from wildclass.reductions import reachability
from wildclass.lattices import boolean, chain, m3, n5


def test_graph_normalises_edges():
    G = UndirectedGraph(3, [(2, 0), (1, 2)])
    assert G.edges == ((0, 2), (1, 2))
    assert G.m == 2


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)]])
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(StructureError):
        UndirectedGraph(3, edges)


def test_colored_digraph_parallel_arcs_need_distinct_colors():
    D = ColoredDigraph(2, [(0, 1, 1), (0, 1, 2)])
    assert D.M == 2
    with pytest.raises(StructureError):
        ColoredDigraph(2, [(0, 1, 1), (0, 1, 1)])
    with pytest.raises(StructureError):
        ColoredDigraph(2, [(0, 1, 0)])


def test_labels_do_not_affect_equality():
    assert ColoredDigraph(2, [(0, 1, 1)], ["a", "b"]) == ColoredDigraph(2, [(0, 1, 1)])


def test_cycle_witness():
    D = ColoredDigraph(4, [(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1)])
    with pytest.raises(CycleDetected) as info:
        D.topological_order()
    cyc = info.value.cycle
    arcs = {(u, v) for u, v, _ in D.arcs}
    assert all((cyc[i], cyc[(i + 1) % len(cyc)]) in arcs for i in range(len(cyc)))


def test_validate_poset_examples():
    assert validate_poset([[True]]).N == 1
    with pytest.raises(NotAntisymmetric) as info:
        validate_poset([[True, True], [True, True]])
    assert (info.value.x, info.value.y) == (0, 1)
    with pytest.raises(NotReflexive):
        validate_poset([[True, False], [False, False]])
    with pytest.raises(NotTransitive):
        validate_poset([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(StructureError):
        validate_poset([[True, False]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_dag_reachability_is_a_poset(data):
    n, pairs = data
    # orient every pair low -> high so the digraph is acyclic
    arcs = {(min(u, v), max(u, v), 1) for u, v in pairs if u != v}
    leq = reachability(ColoredDigraph(n, arcs))
    validate_poset(leq)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: [bits[i * n:(i + 1) * n] for i in range(n)])))
def test_validate_poset_matches_triple_loop(table):
    expected = is_poset_table(table)
    try:
        validate_poset(table)
        accepted = True
    except StructureError:
        accepted = False
    assert accepted == expected


def test_lattice_rejects_broken_absorption():
    L = chain(3)
    join = np.array(L.join)
    join[0, 1] = join[1, 0] = 0
    with pytest.raises(StructureError):
        FiniteLattice(L.meet, join)


@pytest.mark.parametrize("L", [chain(1), chain(4), m3(), n5(), boolean(3)])
def test_absorption_holds_on_catalog(L):
    for x, y in itertools.product(range(L.N), repeat=2):
        assert L.meet[x, L.join[x, y]] == x
        assert L.join[x, L.meet[x, y]] == x


def test_lattice_bounds_inferred():
    L = m3()
    assert (L.bottom, L.top) == (0, 4)
    with pytest.raises(StructureError):
        FiniteLattice(L.meet, L.join, bottom=1, top=4)


def test_lattice_relabel_preserves_validity():
    L = n5()
    perm = [3, 0, 4, 1, 2]
    R = L.relabel(perm)
    FiniteLattice(R.meet, R.join, R.bottom, R.top)
    assert R.bottom == perm[L.bottom]


def test_poset_covers_of_chain():
    P = FinitePoset(np.triu(np.ones((3, 3), dtype=bool)))
    assert P.covers() == [(0, 1), (1, 2)]


def test_isomorphism_inverse_and_compose():
    f = Isomorphism([2, 0, 1])
    assert f.compose(f.inverse()).mapping == (0, 1, 2)
    with pytest.raises(StructureError):
        Isomorphism([0, 0, 1])
