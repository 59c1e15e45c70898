import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_digraph_iso, brute_graph_classes
from wildclass.groups import catalog
from wildclass.iso import (
    color_refine,
    digraph_iso,
    graph_iso,
    lattice_iso,
    poset_iso,
    verify_digraph_iso,
    verify_lattice_iso,
)
from wildclass.lattices import boolean, chain, enumerate_lattices, m3, n5
from wildclass.reductions import extended_incidence, extended_incidence_lattice, gamma, lattice_to_poset
from wildclass.structures import ColoredDigraph, FinitePoset, Isomorphism, UndirectedGraph
from wildclass.verify import graph_classes


def test_color_refine_examples():
    # directed path 0 -> 1 -> 2: source, middle and sink are all distinguished
    P = color_refine(ColoredDigraph(3, [(0, 1, 1), (1, 2, 1)]))
    assert P.num_classes == 3
    # directed 3-cycle: refinement cannot split anything
    C = color_refine(ColoredDigraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]))
    assert C.num_classes == 1 and C.size_profile() == [3]
    # arc colors matter
    Q = color_refine(ColoredDigraph(3, [(0, 1, 1), (0, 2, 2)]))
    assert Q.num_classes == 3


def test_color_refine_respects_initial_colouring():
    C = ColoredDigraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    assert color_refine(C, initial=[1, 0, 0]).num_classes == 3


def test_refinement_is_isomorphism_invariant():
    D = gamma(catalog()["D3"]).underlying
    perm = list(range(D.N))
    random.Random(1).shuffle(perm)
    assert color_refine(D).size_profile() == color_refine(D.relabel(perm)).size_profile()


@st.composite
def digraph_pairs(draw):
    N = draw(st.integers(1, 7))
    colors = draw(st.integers(1, 2))
    arcs = draw(st.sets(st.tuples(st.integers(0, N - 1), st.integers(0, N - 1),
                                  st.integers(1, colors)), max_size=12))
    arcs = {(u, v, c) for u, v, c in arcs if u != v}
    D1 = ColoredDigraph(N, arcs)
    if draw(st.booleans()):
        perm = draw(st.permutations(range(N)))
        D2 = D1.relabel(perm)
    else:
        arcs2 = draw(st.sets(st.tuples(st.integers(0, N - 1), st.integers(0, N - 1),
                                       st.integers(1, colors)), max_size=12))
        D2 = ColoredDigraph(N, {(u, v, c) for u, v, c in arcs2 if u != v})
    return D1, D2


@settings(max_examples=300, deadline=None)
@given(digraph_pairs())
def test_digraph_iso_matches_exhaustive_search(pair):
    D1, D2 = pair
    ours = digraph_iso(D1, D2)
    ref = brute_digraph_iso(D1.N, D1.arcs, D2.arcs)
    if ref is None:
        assert ours is None
    else:
        assert ours is not None and ours.mapping == tuple(ref)


def test_symmetric_instance_takes_lexicographically_least():
    # 8-cycle against itself rotated: identity is the least isomorphism
    N = 8
    C = ColoredDigraph(N, [(i, (i + 1) % N, 1) for i in range(N)])
    assert digraph_iso(C, C).mapping == tuple(range(N))
    R = C.relabel([(i + 3) % N for i in range(N)])
    assert digraph_iso(C, R).mapping == tuple(brute_digraph_iso(N, C.arcs, R.arcs))


def test_isolated_nodes_and_empty():
    assert digraph_iso(ColoredDigraph(0), ColoredDigraph(0)).mapping == ()
    D1 = ColoredDigraph(4, [(2, 3, 1)])
    D2 = ColoredDigraph(4, [(0, 1, 1)])
    assert digraph_iso(D1, D2).mapping == (2, 3, 0, 1)


def test_invariant_rejections():
    assert digraph_iso(ColoredDigraph(2), ColoredDigraph(3)) is None
    assert digraph_iso(ColoredDigraph(2, [(0, 1, 1)]), ColoredDigraph(2, [(0, 1, 2)])) is None


def test_graph_classes_pairwise():
    classes = graph_classes(4)
    assert len(classes) == 11 == brute_graph_classes(4)
    for G1, G2 in itertools.combinations(classes, 2):
        assert graph_iso(G1, G2) is None
    for G in classes:
        perm = list(range(4))
        random.Random(G.m).shuffle(perm)
        assert graph_iso(G, G.relabel(perm)) is not None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_graph_class_counts(n):
    assert len(graph_classes(n)) == brute_graph_classes(n)


def test_graph_iso_example():
    P3 = UndirectedGraph(3, [(0, 1), (1, 2)])
    Q = UndirectedGraph(3, [(0, 2), (1, 2)])
    assert graph_iso(P3, Q).mapping == (0, 2, 1)


def test_poset_iso_m3_vs_n5():
    P = FinitePoset(m3().leq())
    Q = FinitePoset(n5().leq())
    assert poset_iso(P, Q) is None
    assert poset_iso(P, P).mapping == tuple(range(5))


def test_gamma_iso_of_relabelled_groups():
    for G in list(catalog().values())[:10]:
        perm = list(range(G.n))
        random.Random(G.n).shuffle(perm)
        D1, D2 = gamma(G).underlying, gamma(G.relabel(perm)).underlying
        iso = digraph_iso(D1, D2)
        assert iso is not None and verify_digraph_iso(D1, D2, iso)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_lattice_iso_on_enumerated(k):
    lats = enumerate_lattices(k)
    for L1, L2 in itertools.combinations(lats, 2):
        assert lattice_iso(L1, L2) is None
    rng = random.Random(k)
    for L in lats:
        perm = list(range(k))
        rng.shuffle(perm)
        R = L.relabel(perm)
        iso = lattice_iso(L, R)
        assert iso is not None and verify_lattice_iso(L, R, iso)


def test_lattice_iso_examples():
    assert lattice_iso(chain(4), boolean(2)) is None
    iso = lattice_iso(boolean(2), boolean(2).relabel([0, 2, 1, 3]))
    assert iso.mapping == (0, 1, 2, 3)
    assert not verify_lattice_iso(chain(3), chain(3), Isomorphism([2, 1, 0]))


def test_verify_rejects_wrong_mapping():
    D = ColoredDigraph(3, [(0, 1, 1)])
    assert not verify_digraph_iso(D, D, Isomorphism([1, 0, 2]))


def test_gamma_c2_separates_elements_from_valid_triples():
    D = gamma(catalog()["C2"]).underlying
    cls = color_refine(D).class_of
    elements = {cls[v] for v in range(2)}
    valid = {cls[2 + u * 4 + v * 2 + (u ^ v)] for u in range(2) for v in range(2)}
    assert elements.isdisjoint(valid)


def test_directed_four_cycle_is_one_class():
    C = ColoredDigraph(4, [(i, (i + 1) % 4, 1) for i in range(4)])
    assert color_refine(C).num_classes == 1


def test_extended_incidence_roles_get_distinct_classes():
    E = extended_incidence(UndirectedGraph(2, [(0, 1)]))
    H = lattice_to_poset(extended_incidence_lattice(UndirectedGraph(2, [(0, 1)]))).hasse()
    cls = color_refine(H).class_of
    by_role: dict[str, set[int]] = {}
    for node, role in enumerate(E.roles):
        by_role.setdefault(role.rstrip("0123456789-"), set()).add(cls[node])
    assert sorted(by_role) == ["Inf", "Sup", "a", "b", "p", "v"]
    assert all(len(c) == 1 for c in by_role.values())
    assert len(set().union(*by_role.values())) == 6


def test_small_named_examples():
    assert graph_iso(UndirectedGraph(2, [(0, 1)]), UndirectedGraph(2, [(1, 0)])) is not None
    K3 = UndirectedGraph(3, [(0, 1), (0, 2), (1, 2)])
    assert graph_iso(K3, UndirectedGraph(3, [(0, 1), (1, 2)])) is None
    assert poset_iso(FinitePoset(chain(3).leq()), FinitePoset(chain(3).leq())).mapping == (0, 1, 2)
    cat = catalog()
    assert digraph_iso(gamma(cat["C4"]).underlying, gamma(cat["C2xC2"]).underlying) is None
