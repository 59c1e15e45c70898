"""Lattice properties: distributivity, modularity, M3/N5 sublattices.

Also a small catalog of named lattices and an enumerator of all lattices of
a given size up to isomorphism, used as an independent source of test cases.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .iso import lattice_iso
from .reductions import NoJoin, NoMeet, poset_to_lattice
from .structures import FiniteLattice, FinitePoset, WildclassError, order_from_covers


class CrosscheckFailed(WildclassError, AssertionError):
    """Two decision procedures disagree; always an implementation bug."""


@dataclass(frozen=True)
class WitnessTriple:
    """Violated identity at ``(x, y, z)``: the two sides evaluate to ``lhs != rhs``."""

    x: int
    y: int
    z: int
    lhs: int
    rhs: int


@dataclass(frozen=True)
class SublatticeEmbedding:
    """Five host elements forming a copy of M3 or N5.

    ``elements`` is ``(bottom, p, q, r, top)``. For M3, ``p, q, r`` are the
    three atoms. For N5, ``p < q`` is the two-element chain and ``r`` the
    side element.
    """

    pattern: str
    elements: tuple[int, int, int, int, int]


# ---------------------------------------------------------------------------
# named lattices


def lattice_from_covers(N: int, covers: Sequence[Sequence[int]]) -> FiniteLattice:
    return poset_to_lattice(FinitePoset(order_from_covers(N, covers)))


def chain(k: int) -> FiniteLattice:
    return lattice_from_covers(k, [(i, i + 1) for i in range(k - 1)])


def m3() -> FiniteLattice:
    """Diamond: 0 bottom, 1..3 atoms, 4 top."""
    return lattice_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def n5() -> FiniteLattice:
    """Pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4."""
    return lattice_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def boolean(k: int) -> FiniteLattice:
    """Subsets of a k-set; element index is the subset bitmask."""
    N = 1 << k
    idx = np.arange(N)
    meet = idx[:, None] & idx[None, :]
    join = idx[:, None] | idx[None, :]
    return FiniteLattice(meet, join, 0, N - 1)


PATTERNS = {"M3": m3, "N5": n5}


# ---------------------------------------------------------------------------
# identities


def distributive_witness(L: FiniteLattice, dual: bool = False) -> WitnessTriple | None:
    """Least ``(x, y, z)`` breaking ``(x^y) v (x^z) = x ^ (y v z)``.

    With ``dual=True`` the roles of meet and join are swapped.
    """
    M, J = (L.join, L.meet) if dual else (L.meet, L.join)
    for x in range(L.N):
        mx = M[x]
        lhs = J[mx[:, None], mx[None, :]]
        rhs = mx[J]
        bad = lhs != rhs
        if bad.any():
            y, z = (int(t) for t in np.argwhere(bad)[0])
            return WitnessTriple(x, y, z, int(lhs[y, z]), int(rhs[y, z]))
    return None


def is_distributive(L: FiniteLattice) -> tuple[bool, WitnessTriple | None]:
    """Verdict plus the lexicographically least witness of non-distributivity.

    Both the identity and its dual are evaluated; their verdicts must agree.
    """
    w = distributive_witness(L)
    w_dual = distributive_witness(L, dual=True)
    if (w is None) != (w_dual is None):
        raise CrosscheckFailed("distributive law and its dual disagree")
    return w is None, w


def is_modular(L: FiniteLattice) -> tuple[bool, tuple[int, int, int] | None]:
    """Check ``x <= b  =>  x v (a ^ b) = (x v a) ^ b`` for all ``x, a, b``.

    Returns the verdict and the least failing ``(x, a, b)``.
    """
    M, J = L.meet, L.join
    leq = L.leq()
    for x in range(L.N):
        lhs = J[x][M]                      # [a, b] -> x v (a ^ b)
        rhs = M[J[x][:, None], np.arange(L.N)[None, :]]   # [a, b] -> (x v a) ^ b
        bad = (lhs != rhs) & leq[x][None, :]
        if bad.any():
            a, b = (int(t) for t in np.argwhere(bad)[0])
            return False, (x, a, b)
    return True, None


# ---------------------------------------------------------------------------
# sublattice search


def find_sublattice(L: FiniteLattice, pattern: str) -> SublatticeEmbedding | None:
    """Exhaustive search for a sublattice isomorphic to ``pattern``.

    Seeds are the middle elements. For M3 three pairwise incomparable
    elements with one common pairwise meet and one common pairwise join;
    for N5 a chain ``p < q`` and an element ``r`` incomparable to both with
    ``p ^ r = q ^ r`` and ``p v r = q v r``. Adding those common bounds
    gives a five-element set closed under meet and join. The first seed in
    lexicographic order is returned.
    """
    pattern = pattern.upper()
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    M, J = L.meet, L.join
    leq = L.leq()
    comparable = leq | leq.T
    N = L.N
    if pattern == "M3":
        for p in range(N):
            for q in range(p + 1, N):
                if comparable[p, q]:
                    continue
                lo, hi = M[p, q], J[p, q]
                rs = np.flatnonzero(~comparable[p] & ~comparable[q]
                                    & (M[p] == lo) & (M[q] == lo) & (J[p] == hi) & (J[q] == hi))
                rs = rs[rs > q]
                if rs.size:
                    emb = SublatticeEmbedding("M3", (int(lo), p, q, int(rs[0]), int(hi)))
                    _assert_embedding(L, emb)
                    return emb
        return None
    for p in range(N):
        for q in range(N):
            if p == q or not leq[p, q]:
                continue
            rs = np.flatnonzero(~comparable[p] & ~comparable[q]
                                & (M[p] == M[q]) & (J[p] == J[q]))
            if rs.size:
                r = int(rs[0])
                emb = SublatticeEmbedding("N5", (int(M[p, r]), p, q, r, int(J[p, r])))
                _assert_embedding(L, emb)
                return emb
    return None


def _assert_embedding(L: FiniteLattice, emb: SublatticeEmbedding) -> None:
    if not verify_embedding(L, emb):
        raise CrosscheckFailed(f"search returned an invalid embedding {emb}")


def verify_embedding(L: FiniteLattice, emb: SublatticeEmbedding) -> bool:
    """Independent check: five distinct elements, closed under meet and join,
    and the induced tables match the pattern under some bijection."""
    S = list(emb.elements)
    if len(set(S)) != 5 or any(not (0 <= s < L.N) for s in S):
        return False
    sub_m = L.meet[np.ix_(S, S)]
    sub_j = L.join[np.ix_(S, S)]
    members = set(S)
    if not (set(sub_m.flat) <= members and set(sub_j.flat) <= members):
        return False
    pos = {s: i for i, s in enumerate(S)}
    loc_m = np.vectorize(pos.get)(sub_m)
    loc_j = np.vectorize(pos.get)(sub_j)
    P = PATTERNS[emb.pattern]()
    for perm in itertools.permutations(range(5)):
        p = np.asarray(perm)
        if (np.array_equal(p[loc_m], P.meet[np.ix_(p, p)])
                and np.array_equal(p[loc_j], P.join[np.ix_(p, p)])):
            return True
    return False


# ---------------------------------------------------------------------------
# cross-validation


@dataclass(frozen=True)
class CrosscheckReport:
    distributive: bool
    modular: bool
    m3: SublatticeEmbedding | None
    n5: SublatticeEmbedding | None
    distributive_witness: WitnessTriple | None
    modular_witness: tuple[int, int, int] | None

    def as_dict(self) -> dict:
        emb = lambda e: None if e is None else list(e.elements)
        w = self.distributive_witness
        return {
            "distributive": self.distributive,
            "modular": self.modular,
            "m3": emb(self.m3),
            "n5": emb(self.n5),
            "distributive_witness": None if w is None else [w.x, w.y, w.z, w.lhs, w.rhs],
            "modular_witness": None if self.modular_witness is None else list(self.modular_witness),
        }


def birkhoff_crosscheck(L: FiniteLattice) -> CrosscheckReport:
    """Run all four checkers and assert the forbidden-sublattice equivalences:
    distributive iff no M3 and no N5; modular iff no N5."""
    dist, dw = is_distributive(L)
    mod, mw = is_modular(L)
    e_m3 = find_sublattice(L, "M3")
    e_n5 = find_sublattice(L, "N5")
    if dist != (e_m3 is None and e_n5 is None):
        raise CrosscheckFailed(f"distributive={dist} but M3={e_m3}, N5={e_n5}")
    if mod != (e_n5 is None):
        raise CrosscheckFailed(f"modular={mod} but N5={e_n5}")
    if dist and not mod:
        raise CrosscheckFailed("distributive lattice reported non-modular")
    return CrosscheckReport(dist, mod, e_m3, e_n5, dw, mw)


# ---------------------------------------------------------------------------
# enumeration


def _natural_posets(m: int):
    """Strict orders on ``0..m-1`` with ``i < j`` only when ``i < j`` as integers.

    Every finite poset has a linear extension, so every isomorphism class
    appears at least once.
    """
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for bits in range(1 << len(pairs)):
        rel = np.zeros((m, m), dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                rel[i, j] = True
        # transitive: rel o rel contained in rel
        r = rel.astype(np.int64)
        if ((r @ r > 0) & ~rel).any():
            continue
        yield rel


def _invariant(L: FiniteLattice) -> tuple:
    leq = L.leq()
    down, up = leq.sum(axis=0), leq.sum(axis=1)
    return tuple(sorted(zip(down.tolist(), up.tolist())))


def enumerate_lattices(k: int) -> list[FiniteLattice]:
    """All lattices with exactly ``k`` elements, one per isomorphism class.

    Bounded posets are built as bottom ``0``, top ``k-1`` and a naturally
    labelled poset on the middle elements; non-lattices are discarded and
    the rest deduplicated with the isomorphism engine.
    """
    if not 1 <= k <= 7:
        raise ValueError("enumerate_lattices supports 1 <= k <= 7")
    if k == 1:
        return [FiniteLattice([[0]], [[0]], 0, 0)]
    m = k - 2
    found: dict[tuple, list[FiniteLattice]] = {}
    result = []
    for rel in _natural_posets(m):
        leq = np.eye(k, dtype=bool)
        leq[0, :] = True
        leq[:, k - 1] = True
        leq[1:k - 1, 1:k - 1] |= rel
        try:
            L = poset_to_lattice(FinitePoset(leq))
        except (NoMeet, NoJoin):
            continue
        bucket = found.setdefault(_invariant(L), [])
        if any(lattice_iso(L, other) is not None for other in bucket):
            continue
        bucket.append(L)
        result.append(L)
    return result
