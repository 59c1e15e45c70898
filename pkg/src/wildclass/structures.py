"""Core value types: undirected graphs, colored digraphs, posets and lattices.

Every structure uses dense 0-based integer indices. Human-readable labels
(where present) are side metadata and never take part in equality or
isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class WildclassError(Exception):
    """Base class for all library errors."""


class StructureError(WildclassError, ValueError):
    """A value violates the invariants of its structure kind."""


class NotReflexive(StructureError):
    def __init__(self, x: int):
        self.x = x
        super().__init__(f"not reflexive: {x} <= {x} fails")


class NotAntisymmetric(StructureError):
    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"not antisymmetric: {x} <= {y} and {y} <= {x}")


class NotTransitive(StructureError):
    def __init__(self, x: int, y: int, z: int):
        self.x, self.y, self.z = x, y, z
        super().__init__(f"not transitive: {x} <= {y} <= {z} but not {x} <= {z}")


class CycleDetected(StructureError):
    def __init__(self, cycle: Sequence[int]):
        self.cycle = tuple(cycle)
        super().__init__(f"digraph has a cycle through {list(self.cycle)}")


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise StructureError(f"negative vertex count {n}")
        seen = set()
        for e in edges:
            u, v = (int(t) for t in e)
            if u == v:
                raise StructureError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise StructureError(f"edge ({u}, {v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise StructureError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def relabel(self, perm: Sequence[int]) -> "UndirectedGraph":
        """Return the copy whose vertex ``perm[v]`` plays the role of ``v``."""
        return UndirectedGraph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = True
        return adj


@dataclass(frozen=True)
class ColoredDigraph:
    """Directed graph with positive integer arc colors.

    Parallel arcs are allowed only when their colors differ, so the arc
    collection is a set of ``(src, dst, color)`` triples, stored sorted.
    """

    N: int
    arcs: tuple[tuple[int, int, int], ...]
    node_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __init__(self, N: int, arcs: Iterable[Sequence[int]] = (),
                 node_labels: Sequence[str] | None = None):
        if N < 0:
            raise StructureError(f"negative node count {N}")
        seen = set()
        for a in arcs:
            u, v, c = (int(t) for t in a)
            if not (0 <= u < N and 0 <= v < N):
                raise StructureError(f"arc ({u}, {v}) out of range for N={N}")
            if c < 1:
                raise StructureError(f"arc ({u}, {v}) has non-positive color {c}")
            if (u, v, c) in seen:
                raise StructureError(f"duplicate arc ({u}, {v}) with color {c}")
            seen.add((u, v, c))
        if node_labels is not None:
            node_labels = tuple(str(s) for s in node_labels)
            if len(node_labels) != N:
                raise StructureError("node_labels length differs from node count")
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "arcs", tuple(sorted(seen)))
        object.__setattr__(self, "node_labels", node_labels)

    @property
    def M(self) -> int:
        return len(self.arcs)

    def out_degrees(self) -> list[int]:
        deg = [0] * self.N
        for u, _, _ in self.arcs:
            deg[u] += 1
        return deg

    def in_degrees(self) -> list[int]:
        deg = [0] * self.N
        for _, v, _ in self.arcs:
            deg[v] += 1
        return deg

    def color_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for _, _, c in self.arcs:
            counts[c] = counts.get(c, 0) + 1
        return dict(sorted(counts.items()))

    def relabel(self, perm: Sequence[int]) -> "ColoredDigraph":
        """Copy with node ``v`` renamed to ``perm[v]`` (labels follow)."""
        labels = None
        if self.node_labels is not None:
            tmp = [""] * self.N
            for v, s in enumerate(self.node_labels):
                tmp[perm[v]] = s
            labels = tmp
        return ColoredDigraph(self.N, [(perm[u], perm[v], c) for u, v, c in self.arcs], labels)

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; raises :class:`CycleDetected` with a witness cycle."""
        indeg = self.in_degrees()
        succ: list[list[int]] = [[] for _ in range(self.N)]
        for u, v, _ in self.arcs:
            succ[u].append(v)
        ready = [v for v in range(self.N) if indeg[v] == 0]
        order = []
        while ready:
            u = ready.pop()
            order.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) < self.N:
            raise CycleDetected(self._find_cycle(set(range(self.N)) - set(order), succ))
        return order

    @staticmethod
    def _find_cycle(nodes: set[int], succ: list[list[int]]) -> list[int]:
        # every leftover node has a leftover successor, so walking must repeat
        start = min(nodes)
        path, pos = [start], {start: 0}
        while True:
            nxt = min(v for v in succ[path[-1]] if v in nodes)
            if nxt in pos:
                return path[pos[nxt]:]
            pos[nxt] = len(path)
            path.append(nxt)

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except CycleDetected:
            return False
        return True


# ---------------------------------------------------------------------------
# orders


def _as_bool_table(table) -> np.ndarray:
    arr = np.array(table, dtype=bool)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise StructureError(f"order table must be square, got shape {arr.shape}")
    return arr


class FinitePoset:
    """Partial order on ``0..N-1`` given by a boolean table ``leq[x, y]`` (x <= y)."""

    __slots__ = ("leq",)

    def __init__(self, leq, *, check: bool = True):
        arr = _as_bool_table(leq)
        if check:
            _check_poset_axioms(arr)
        arr.setflags(write=False)
        self.leq = arr

    @property
    def N(self) -> int:
        return self.leq.shape[0]

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash(self.leq.tobytes())

    def __repr__(self):
        return f"FinitePoset(N={self.N}, covers={self.covers()})"

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(x, y)`` with ``x`` covered by ``y``, sorted."""
        return [tuple(map(int, p)) for p in np.argwhere(cover_table(self.leq))]

    def hasse(self) -> ColoredDigraph:
        """Cover digraph with arcs pointing downward (``y -> x`` for ``x < y``), color 1."""
        return ColoredDigraph(self.N, [(y, x, 1) for x, y in self.covers()])

    def relabel(self, perm: Sequence[int]) -> "FinitePoset":
        p = np.asarray(perm)
        out = np.zeros_like(self.leq)
        out[np.ix_(p, p)] = self.leq
        return FinitePoset(out, check=False)


def cover_table(leq: np.ndarray) -> np.ndarray:
    strict = leq & ~np.eye(leq.shape[0], dtype=bool)
    s = strict.astype(np.int64)
    return strict & ~((s @ s) > 0)


def _check_poset_axioms(leq: np.ndarray) -> None:
    n = leq.shape[0]
    diag = np.diagonal(leq)
    if not diag.all():
        raise NotReflexive(int(np.argmin(diag)))
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        x, y = (int(t) for t in np.argwhere(both)[0])
        raise NotAntisymmetric(x, y)
    # composite[x, z] is true when some y has x<=y<=z
    composite = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    bad = composite & ~leq
    if bad.any():
        x, z = (int(t) for t in np.argwhere(bad)[0])
        y = int(np.argmax(leq[x] & leq[:, z]))
        raise NotTransitive(x, y, z)


def validate_poset(leq) -> FinitePoset:
    """Return the poset for ``leq`` or raise the least axiom violation found."""
    return FinitePoset(leq)


def order_from_covers(N: int, covers: Iterable[Sequence[int]]) -> np.ndarray:
    """Reflexive-transitive closure of a cover (or any acyclic) relation."""
    reach = np.eye(N, dtype=bool)
    for u, v in covers:
        reach[u, v] = True
    # Warshall closure, vectorised per pivot
    for k in range(N):
        reach |= np.outer(reach[:, k], reach[k, :])
    return reach


class FiniteLattice:
    """Lattice as full meet/join tables over ``0..N-1``."""

    __slots__ = ("meet", "join", "bottom", "top")

    def __init__(self, meet, join, bottom: int | None = None, top: int | None = None,
                 *, check: bool = True):
        m = np.array(meet, dtype=np.int64)
        j = np.array(join, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape != j.shape:
            raise StructureError("meet and join must be square tables of one size")
        n = m.shape[0]
        if n == 0:
            raise StructureError("a lattice needs at least one element")
        if bottom is None:
            bottom = _reduce_table(m)
        if top is None:
            top = int(_reduce_table(j))
        if check:
            _check_lattice_axioms(m, j, int(bottom), int(top))
        m.setflags(write=False)
        j.setflags(write=False)
        self.meet, self.join = m, j
        self.bottom, self.top = int(bottom), int(top)

    @property
    def N(self) -> int:
        return self.meet.shape[0]

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice) and self.bottom == other.bottom
                and self.top == other.top and np.array_equal(self.meet, other.meet)
                and np.array_equal(self.join, other.join))

    def __hash__(self):
        return hash((self.meet.tobytes(), self.join.tobytes()))

    def __repr__(self):
        return f"FiniteLattice(N={self.N}, bottom={self.bottom}, top={self.top})"

    def leq(self) -> np.ndarray:
        """Induced order: ``x <= y`` iff ``meet(x, y) == x``."""
        return self.meet == np.arange(self.N)[:, None]

    def relabel(self, perm: Sequence[int]) -> "FiniteLattice":
        p = np.asarray(perm)
        meet = np.empty_like(self.meet)
        join = np.empty_like(self.join)
        meet[np.ix_(p, p)] = p[self.meet]
        join[np.ix_(p, p)] = p[self.join]
        return FiniteLattice(meet, join, int(p[self.bottom]), int(p[self.top]), check=False)


def _reduce_table(table: np.ndarray) -> int:
    acc = 0
    for x in range(table.shape[0]):
        acc = table[acc, x]
    return int(acc)


def _check_lattice_axioms(m: np.ndarray, j: np.ndarray, bottom: int, top: int) -> None:
    n = m.shape[0]
    if m.min() < 0 or m.max() >= n or j.min() < 0 or j.max() >= n:
        raise StructureError("table entry out of range")
    idx = np.arange(n)
    for name, t in (("meet", m), ("join", j)):
        if not np.array_equal(t, t.T):
            x, y = np.argwhere(t != t.T)[0]
            raise StructureError(f"{name} not commutative at ({x}, {y})")
        if not np.array_equal(t[idx, idx], idx):
            x = int(np.argwhere(t[idx, idx] != idx)[0][0])
            raise StructureError(f"{name} not idempotent at {x}")
        for x in range(n):
            # t[t[x, y], z] == t[x, t[y, z]] for all y, z
            lhs = t[t[x]]
            rhs = t[x][t]
            if not np.array_equal(lhs, rhs):
                y, z = np.argwhere(lhs != rhs)[0]
                raise StructureError(f"{name} not associative at ({x}, {y}, {z})")
    # absorption: meet(x, join(x, y)) = x and join(x, meet(x, y)) = x
    if not np.array_equal(m[idx[:, None], j], np.broadcast_to(idx[:, None], (n, n))):
        x, y = np.argwhere(m[idx[:, None], j] != idx[:, None])[0]
        raise StructureError(f"absorption meet(x, join(x, y)) = x fails at ({x}, {y})")
    if not np.array_equal(j[idx[:, None], m], np.broadcast_to(idx[:, None], (n, n))):
        x, y = np.argwhere(j[idx[:, None], m] != idx[:, None])[0]
        raise StructureError(f"absorption join(x, meet(x, y)) = x fails at ({x}, {y})")
    if not (0 <= bottom < n and 0 <= top < n):
        raise StructureError("bottom/top out of range")
    if not (m[:, bottom] == bottom).all():
        raise StructureError(f"{bottom} is not the bottom element")
    if not (j[:, top] == top).all():
        raise StructureError(f"{top} is not the top element")
    # the induced order is a partial order by the identities above; keep the
    # explicit check so a malformed table never slips through
    _check_poset_axioms(m == idx[:, None])


# ---------------------------------------------------------------------------
# isomorphisms


@dataclass(frozen=True)
class Isomorphism:
    """Bijection ``i -> mapping[i]`` between two index sets of equal size."""

    mapping: tuple[int, ...]

    def __init__(self, mapping: Iterable[int]):
        mp = tuple(int(x) for x in mapping)
        if sorted(mp) != list(range(len(mp))):
            raise StructureError("isomorphism mapping is not a bijection")
        object.__setattr__(self, "mapping", mp)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self):
        return len(self.mapping)

    def inverse(self) -> "Isomorphism":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Isomorphism(inv)

    def compose(self, other: "Isomorphism") -> "Isomorphism":
        """``other`` after ``self``."""
        return Isomorphism(other.mapping[i] for i in self.mapping)
