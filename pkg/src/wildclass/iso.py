"""Isomorphism decisions for colored digraphs, graphs, posets and lattices.

One engine serves every structure kind: color refinement on the disjoint
union of the two inputs, then individualization/refinement backtracking.
Branching always takes the least-index node of the first input whose cell
is not yet a singleton, and tries targets in increasing index order, so the
first isomorphism found is the lexicographically least one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .structures import (
    ColoredDigraph,
    FiniteLattice,
    FinitePoset,
    Isomorphism,
    UndirectedGraph,
)


@dataclass(frozen=True)
class RefinementPartition:
    class_of: tuple[int, ...]
    num_classes: int

    def cells(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for v, c in enumerate(self.class_of):
            out[c].append(v)
        return out

    def size_profile(self) -> list[int]:
        return sorted(len(c) for c in self.cells())


def _adjacency(N: int, arcs) -> tuple[list[list[tuple[int, int]]], list[list[tuple[int, int]]]]:
    out: list[list[tuple[int, int]]] = [[] for _ in range(N)]
    inc: list[list[tuple[int, int]]] = [[] for _ in range(N)]
    for u, v, c in arcs:
        out[u].append((c, v))
        inc[v].append((c, u))
    return out, inc


def _refine(cls: list[int], out, inc) -> tuple[list[int], int]:
    """Iterate neighbourhood signatures to the coarsest stable refinement.

    New class ids are ranks of sorted signatures, so they depend only on the
    isomorphism type of (graph, initial colouring).
    """
    count = len(set(cls))
    while True:
        sigs = [
            (cls[v],
             tuple(sorted((c, cls[w]) for c, w in out[v])),
             tuple(sorted((c, cls[w]) for c, w in inc[v])))
            for v in range(len(cls))
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == count:
            # no split happened; canonicalise ids once more and stop
            return new, count
        cls, count = new, len(rank)


def color_refine(D: ColoredDigraph, initial: Sequence[int] | None = None) -> RefinementPartition:
    """Coarsest stable partition of ``D`` refining ``initial`` (default: one cell)."""
    start = [0] * D.N if initial is None else [int(c) for c in initial]
    if len(start) != D.N:
        raise ValueError("initial classes must cover every node")
    out, inc = _adjacency(D.N, D.arcs)
    cls, k = _refine(start, out, inc)
    return RefinementPartition(tuple(cls), k)


# ---------------------------------------------------------------------------
# colored digraphs


def _degree_profile(D: ColoredDigraph) -> list:
    outs: list[list[int]] = [[] for _ in range(D.N)]
    ins: list[list[int]] = [[] for _ in range(D.N)]
    for u, v, c in D.arcs:
        outs[u].append(c)
        ins[v].append(c)
    return sorted((tuple(sorted(o)), tuple(sorted(i))) for o, i in zip(outs, ins))


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finaliser, elementwise on uint64."""
    with np.errstate(over="ignore"):
        z = x.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


class _Search:
    """Backtracking over the disjoint union of two digraphs.

    Refinement inside the search hashes each node's neighbourhood multiset
    (sum of 64-bit mixes of direction, color and neighbour class). A hash
    collision can only merge cells, which keeps the partition
    isomorphism-invariant; leaf mappings are verified arc by arc.
    """

    def __init__(self, D1: ColoredDigraph, D2: ColoredDigraph, nodes1: list[int], nodes2: list[int]):
        self.n = len(nodes1)
        pos1 = {v: i for i, v in enumerate(nodes1)}
        pos2 = {v: i + self.n for i, v in enumerate(nodes2)}
        arcs = [(pos1[u], pos1[v], c) for u, v, c in D1.arcs]
        arcs += [(pos2[u], pos2[v], c) for u, v, c in D2.arcs]
        a = np.array(arcs, dtype=np.int64).reshape(-1, 3)
        self.src, self.dst, self.color = a[:, 0], a[:, 1], a[:, 2].astype(np.uint64)
        self.arcs1 = {(u, v, c) for u, v, c in arcs if u < self.n}
        self.arcs2 = {(u - self.n, v - self.n, c) for u, v, c in arcs if u >= self.n}

    def refine(self, cls: np.ndarray) -> np.ndarray:
        count = len(np.unique(cls))
        while True:
            c = cls.astype(np.uint64)
            with np.errstate(over="ignore"):
                out_h = _mix(c[self.dst] * np.uint64(4096) + self.color * np.uint64(2))
                in_h = _mix(c[self.src] * np.uint64(4096) + self.color * np.uint64(2) + np.uint64(1))
                sig = _mix(c * np.uint64(7919) + np.uint64(17))
                np.add.at(sig, self.src, out_h)
                np.add.at(sig, self.dst, in_h)
            _, new = np.unique(sig, return_inverse=True)
            new = new.astype(np.int64)
            k = int(new.max()) + 1
            if k == count:
                return new
            cls, count = new, k

    def run(self) -> list[int] | None:
        return self._search(self.refine(np.zeros(2 * self.n, dtype=np.int64)))

    def _search(self, cls: np.ndarray) -> list[int] | None:
        n = self.n
        left = np.bincount(cls[:n], minlength=int(cls.max()) + 1)
        right = np.bincount(cls[n:], minlength=int(cls.max()) + 1)
        if not np.array_equal(left, right):
            return None
        open_nodes = np.flatnonzero(left[cls[:n]] > 1)
        if open_nodes.size == 0:
            target = np.empty(int(cls.max()) + 1, dtype=np.int64)
            target[cls[n:]] = np.arange(n)
            mapping = target[cls[:n]].tolist()
            image = {(mapping[u], mapping[v], c) for u, v, c in self.arcs1}
            return mapping if image == self.arcs2 else None
        branch = int(open_nodes[0])
        fresh = int(cls.max()) + 1
        for y in np.flatnonzero(cls[n:] == cls[branch]) + n:
            trial = cls.copy()
            trial[branch] = trial[y] = fresh
            found = self._search(self.refine(trial))
            if found is not None:
                return found
        return None


def digraph_iso(D1: ColoredDigraph, D2: ColoredDigraph) -> Isomorphism | None:
    """Lexicographically least color- and direction-preserving node bijection."""
    if D1.N != D2.N or D1.M != D2.M or D1.color_counts() != D2.color_counts():
        return None
    if _degree_profile(D1) != _degree_profile(D2):
        return None
    touched1 = sorted({u for u, _, _ in D1.arcs} | {v for _, v, _ in D1.arcs})
    touched2 = sorted({u for u, _, _ in D2.arcs} | {v for _, v, _ in D2.arcs})
    # isolated nodes are interchangeable; pairing them in order is the
    # lexicographically least choice independent of the rest
    iso1 = sorted(set(range(D1.N)) - set(touched1))
    iso2 = sorted(set(range(D2.N)) - set(touched2))
    partial = _Search(D1, D2, touched1, touched2).run() if touched1 else []
    if partial is None:
        return None
    mapping = [0] * D1.N
    for x, y in zip(touched1, partial):
        mapping[x] = touched2[y]
    for x, y in zip(iso1, iso2):
        mapping[x] = y
    result = Isomorphism(mapping)
    if not verify_digraph_iso(D1, D2, result):
        raise AssertionError("digraph_iso produced a mapping that fails verification")
    return result


def verify_digraph_iso(D1: ColoredDigraph, D2: ColoredDigraph, iso: Isomorphism) -> bool:
    if len(iso) != D1.N or D1.N != D2.N:
        return False
    image = {(iso(u), iso(v), c) for u, v, c in D1.arcs}
    return image == set(D2.arcs)


# ---------------------------------------------------------------------------
# adapters


def graph_to_digraph(G: UndirectedGraph) -> ColoredDigraph:
    """Each undirected edge becomes two opposite arcs of color 1."""
    return ColoredDigraph(G.n, [a for u, v in G.edges for a in ((u, v, 1), (v, u, 1))])


def graph_iso(G1: UndirectedGraph, G2: UndirectedGraph) -> Isomorphism | None:
    if G1.n != G2.n or G1.m != G2.m:
        return None
    iso = digraph_iso(graph_to_digraph(G1), graph_to_digraph(G2))
    if iso is not None and not verify_graph_iso(G1, G2, iso):
        raise AssertionError("graph_iso produced a mapping that fails verification")
    return iso


def verify_graph_iso(G1: UndirectedGraph, G2: UndirectedGraph, iso: Isomorphism) -> bool:
    if G1.n != G2.n or len(iso) != G1.n:
        return False
    image = {tuple(sorted((iso(u), iso(v)))) for u, v in G1.edges}
    return image == set(G2.edges)


def poset_iso(P1: FinitePoset, P2: FinitePoset) -> Isomorphism | None:
    """Order isomorphism, decided on the Hasse cover digraphs."""
    if P1.N != P2.N or P1.leq.sum() != P2.leq.sum():
        return None
    iso = digraph_iso(P1.hasse(), P2.hasse())
    if iso is not None and not verify_poset_iso(P1, P2, iso):
        raise AssertionError("poset_iso produced a mapping that fails verification")
    return iso


def verify_poset_iso(P1: FinitePoset, P2: FinitePoset, iso: Isomorphism) -> bool:
    if P1.N != P2.N or len(iso) != P1.N:
        return False
    p = np.asarray(iso.mapping)
    return bool(np.array_equal(P1.leq, P2.leq[np.ix_(p, p)]))


def lattice_iso(L1: FiniteLattice, L2: FiniteLattice) -> Isomorphism | None:
    """Lattice isomorphism as order isomorphism of the induced posets."""
    iso = poset_iso(FinitePoset(L1.leq(), check=False), FinitePoset(L2.leq(), check=False))
    if iso is not None and not verify_lattice_iso(L1, L2, iso):
        raise AssertionError("order isomorphism failed to transport meet/join tables")
    return iso


def verify_lattice_iso(L1: FiniteLattice, L2: FiniteLattice, iso: Isomorphism) -> bool:
    """Check that ``iso`` carries the meet and join tables of L1 onto those of L2."""
    if L1.N != L2.N or len(iso) != L1.N:
        return False
    p = np.asarray(iso.mapping)
    return bool(np.array_equal(p[L1.meet], L2.meet[np.ix_(p, p)])
                and np.array_equal(p[L1.join], L2.join[np.ix_(p, p)]))
