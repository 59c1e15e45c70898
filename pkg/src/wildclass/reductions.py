"""Reductions between structure kinds.

* ``gamma``: finite group -> colored digraph on elements plus element triples.
* ``gamma_inverse``: recovers the group from any relabeled image of ``gamma``.
* ``incidence`` / ``extended_incidence``: undirected graph -> acyclic digraph
  whose downward-reachability order is a bounded lattice.
* ``dag_to_poset``, ``poset_to_lattice``, ``lattice_to_poset``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, validate_group
from .structures import (
    ColoredDigraph,
    FiniteLattice,
    FinitePoset,
    StructureError,
    UndirectedGraph,
    WildclassError,
)


class NotGammaImage(WildclassError, ValueError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"digraph is not a gamma image: {reason}")


class NoMeet(StructureError):
    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"elements {x} and {y} have no greatest lower bound")


class NoJoin(StructureError):
    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"elements {x} and {y} have no least upper bound")


# ---------------------------------------------------------------------------
# groups -> colored digraphs


@dataclass(frozen=True)
class GammaGraph:
    """``gamma(G)`` together with its node roles.

    Nodes ``0..n-1`` are the group elements. In faithful mode the triple
    ``(u, v, w)`` is node ``n + u*n^2 + v*n + w`` (all ``n^3`` triples present,
    invalid ones isolated); in pruned mode only valid triples exist and
    ``(u, v, u*v)`` is node ``n + u*n + v``.
    """

    underlying: ColoredDigraph
    group_order: int
    pruned: bool

    def triple_node(self, u: int, v: int, w: int) -> int:
        n = self.group_order
        return n + u * n + v if self.pruned else n + u * n * n + v * n + w

    @property
    def element_nodes(self) -> range:
        return range(self.group_order)


def gamma(G: FiniteGroup, pruned: bool = False) -> GammaGraph:
    n = G.n
    shell = GammaGraph(ColoredDigraph(0), n, pruned)
    arcs = []
    for u in range(n):
        for v in range(n):
            w = G.mul(u, v)
            t = shell.triple_node(u, v, w)
            arcs += [(u, t, 1), (v, t, 2), (t, w, 3)]
    if pruned:
        N = n + n * n
        labels = [f"g{u}" for u in range(n)]
        labels += [f"({u},{v},{G.mul(u, v)})" for u in range(n) for v in range(n)]
    else:
        N = n + n ** 3
        labels = [f"g{u}" for u in range(n)]
        labels += [f"({u},{v},{w})" for u in range(n) for v in range(n) for w in range(n)]
    return GammaGraph(ColoredDigraph(N, arcs, labels), n, pruned)


def gamma_inverse(D: ColoredDigraph) -> FiniteGroup:
    """Read the group back off a (possibly relabeled) gamma image.

    Element nodes are the sources of color-1/2 arcs; each must have ``n``
    outgoing arcs of each of colors 1 and 2 and ``n`` incoming color-3 arcs.
    Element nodes are numbered in increasing node order.
    """
    if any(c not in (1, 2, 3) for _, _, c in D.arcs):
        raise NotGammaImage("arc colors outside {1, 2, 3}")
    elems = sorted({u for u, _, c in D.arcs if c in (1, 2)})
    n = len(elems)
    if n == 0:
        raise NotGammaImage("no color-1 or color-2 arcs")
    index = {v: i for i, v in enumerate(elems)}
    out_c = {v: [0, 0, 0, 0] for v in range(D.N)}
    in_c = {v: [0, 0, 0, 0] for v in range(D.N)}
    for u, v, c in D.arcs:
        out_c[u][c] += 1
        in_c[v][c] += 1
    for v in elems:
        if out_c[v] != [0, n, n, 0] or in_c[v] != [0, 0, 0, n]:
            raise NotGammaImage(f"degree profile mismatch at element node {v} (n={n})")
    triples = sorted({v for _, v, c in D.arcs if c == 1})
    if len(triples) != n * n:
        raise NotGammaImage(f"expected {n * n} triple nodes, found {len(triples)}")
    table = np.full((n, n), -1, dtype=np.int64)
    first = {}
    second = {}
    third = {}
    for u, v, c in D.arcs:
        if c == 1:
            first[v] = u
        elif c == 2:
            second[v] = u
        else:
            third[u] = v
    for t in triples:
        if t in index or out_c[t] != [0, 0, 0, 1] or in_c[t] != [0, 1, 1, 0]:
            raise NotGammaImage(f"degree profile mismatch at triple node {t}")
        if third[t] not in index:
            raise NotGammaImage(f"triple node {t} points to a non-element node")
        u, v, w = index[first[t]], index[second[t]], index[third[t]]
        if table[u, v] != -1:
            raise NotGammaImage(f"inconsistent triples: product of {u} and {v} defined twice")
        table[u, v] = w
    rest = D.N - n - n * n
    if rest not in (0, n ** 3 - n * n):
        raise NotGammaImage(f"{rest} extra nodes fit neither faithful nor pruned mode")
    try:
        return validate_group(table)
    except GroupError as exc:
        raise NotGammaImage(f"group axioms fail: {exc}") from None


# ---------------------------------------------------------------------------
# graphs -> posets


@dataclass(frozen=True)
class ExtendedIncidenceGraph:
    """Acyclic digraph with node roles.

    Node order: ``v_1..v_n``, ``a_1..a_n``, ``p_e`` and ``b_e`` for each edge in
    sorted order, then ``Inf`` and ``Sup``.
    """

    underlying: ColoredDigraph
    roles: tuple[str, ...]
    inf: int
    sup: int


def incidence(G: UndirectedGraph) -> ColoredDigraph:
    """Vertex nodes ``0..n-1`` then one pair node per edge, pointing to both ends."""
    n = G.n
    arcs = []
    for k, (i, j) in enumerate(G.edges):
        arcs += [(n + k, i, 1), (n + k, j, 1)]
    labels = [f"v{i + 1}" for i in range(n)] + [f"p{i + 1}-{j + 1}" for i, j in G.edges]
    return ColoredDigraph(n + G.m, arcs, labels)


def extended_incidence(G: UndirectedGraph) -> ExtendedIncidenceGraph:
    if G.n < 1:
        raise StructureError("extended_incidence needs at least one vertex")
    n, m = G.n, G.m
    v = lambda i: i
    a = lambda i: n + i
    p = lambda k: 2 * n + k
    b = lambda k: 2 * n + m + k
    inf, sup = 2 * n + 2 * m, 2 * n + 2 * m + 1
    arcs = []
    for k, (i, j) in enumerate(G.edges):
        arcs += [(p(k), v(i), 1), (p(k), v(j), 1), (b(k), p(k), 1), (sup, b(k), 1)]
    for i in range(n):
        arcs += [(v(i), a(i), 1), (a(i), inf, 1)]
    roles = ([f"v{i + 1}" for i in range(n)] + [f"a{i + 1}" for i in range(n)]
             + [f"p{i + 1}-{j + 1}" for i, j in G.edges]
             + [f"b{i + 1}-{j + 1}" for i, j in G.edges] + ["Inf", "Sup"])
    D = ColoredDigraph(2 * n + 2 * m + 2, arcs, roles)
    return ExtendedIncidenceGraph(D, tuple(roles), inf, sup)


def reachability(D: ColoredDigraph) -> np.ndarray:
    """``reach[u, v]``: v reachable from u by a directed path (reflexive)."""
    order = D.topological_order()
    reach = np.eye(D.N, dtype=bool)
    succ: list[list[int]] = [[] for _ in range(D.N)]
    for u, v, _ in D.arcs:
        succ[u].append(v)
    for u in reversed(order):
        for v in succ[u]:
            reach[u] |= reach[v]
    return reach


def dag_to_poset(D: ColoredDigraph, force_bounds: tuple[int, int] | None = None) -> FinitePoset:
    """Order ``x <= y`` iff ``y`` reaches ``x``; optionally force a bottom and top."""
    leq = reachability(D).T.copy()
    if force_bounds is not None:
        bottom, top = force_bounds
        leq[bottom, :] = True
        leq[:, top] = True
    return FinitePoset(leq)


def extended_incidence_poset(G: UndirectedGraph) -> FinitePoset:
    E = extended_incidence(G)
    return dag_to_poset(E.underlying, (E.inf, E.sup))


def extended_incidence_lattice(G: UndirectedGraph) -> FiniteLattice:
    return poset_to_lattice(extended_incidence_poset(G))


# ---------------------------------------------------------------------------
# posets <-> lattices


def _bound(mask: np.ndarray, leq: np.ndarray, greatest: bool) -> int | None:
    cand = np.flatnonzero(mask)
    if cand.size == 0:
        return None
    sub = leq[np.ix_(cand, cand)]
    # greatest: column c dominates every candidate; least: row c is below every candidate
    ok = sub.all(axis=0) if greatest else sub.all(axis=1)
    hits = cand[ok]
    return int(hits[0]) if hits.size else None


def poset_to_lattice(P: FinitePoset) -> FiniteLattice:
    """Meet/join tables of ``P``; raises NoMeet/NoJoin at the first failing pair."""
    leq = P.leq
    N = P.N
    meet = np.empty((N, N), dtype=np.int64)
    join = np.empty((N, N), dtype=np.int64)
    for x in range(N):
        for y in range(x, N):
            m = _bound(leq[:, x] & leq[:, y], leq, greatest=True)
            if m is None:
                raise NoMeet(x, y)
            j = _bound(leq[x, :] & leq[y, :], leq, greatest=False)
            if j is None:
                raise NoJoin(x, y)
            meet[x, y] = meet[y, x] = m
            join[x, y] = join[y, x] = j
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    return FiniteLattice(meet, join, bottom, top)


def is_lattice(P: FinitePoset) -> bool:
    try:
        poset_to_lattice(P)
    except (NoMeet, NoJoin):
        return False
    return True


def lattice_to_poset(L: FiniteLattice) -> FinitePoset:
    return FinitePoset(L.leq())
