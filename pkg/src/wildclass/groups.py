"""Finite groups as Cayley tables."""
from __future__ import annotations

import itertools
from collections import deque
from typing import Sequence

import numpy as np

from .structures import Isomorphism, WildclassError


class GroupError(WildclassError, ValueError):
    pass


class NotLatin(GroupError):
    def __init__(self, kind: str, index: int):
        self.kind, self.index = kind, index
        super().__init__(f"{kind} {index} is not a permutation of the elements")


class NotAssociative(GroupError):
    def __init__(self, u: int, v: int, w: int):
        self.u, self.v, self.w = u, v, w
        super().__init__(f"not associative at ({u}, {v}, {w})")


class NoIdentity(GroupError):
    def __init__(self):
        super().__init__("no identity element")


class NoInverse(GroupError):
    def __init__(self, x: int):
        self.x = x
        super().__init__(f"element {x} has no two-sided inverse")


class FiniteGroup:
    """Group on elements ``0..n-1`` with ``table[i, j] = i*j``."""

    __slots__ = ("table", "identity", "name")

    def __init__(self, table: np.ndarray, identity: int, name: str | None = None):
        # use validate_group() for untrusted tables
        self.table = table
        self.identity = identity
        self.name = name

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(np.argmax(self.table[a] == self.identity))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def relabel(self, perm: Sequence[int]) -> "FiniteGroup":
        """Isomorphic copy in which element ``x`` is renamed ``perm[x]``."""
        p = np.asarray(perm)
        t = np.empty_like(self.table)
        t[np.ix_(p, p)] = p[self.table]
        return validate_group(t)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{label} of order {self.n}>"


def validate_group(table, name: str | None = None) -> FiniteGroup:
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError(f"Cayley table must be a non-empty square, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError(f"table entries must lie in 0..{n - 1}")
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), full):
            raise NotLatin("row", i)
    for j in range(n):
        if not np.array_equal(np.sort(t[:, j]), full):
            raise NotLatin("column", j)
    ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
    if not ids:
        raise NoIdentity()
    e = ids[0]
    for x in range(n):
        y = int(np.argmax(t[x] == e))
        if t[y, x] != e:
            raise NoInverse(x)
    for u in range(n):
        # t[t[u, v], w] against t[u, t[v, w]]
        bad = t[t[u]] != t[u][t]
        if bad.any():
            v, w = np.argwhere(bad)[0]
            raise NotAssociative(u, int(v), int(w))
    t.setflags(write=False)
    return FiniteGroup(t, e, name)


# ---------------------------------------------------------------------------
# families


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    idx = np.arange(n)
    return validate_group((idx[:, None] + idx[None, :]) % n, f"C{n}")


def dihedral(k: int) -> FiniteGroup:
    """Symmetries of a k-gon, order 2k; element ``i + k*f`` is ``r^i s^f``."""
    if k < 1:
        raise GroupError("dihedral(k) needs k >= 1")
    n = 2 * k
    t = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        i, a = x % k, x // k
        for y in range(n):
            j, b = y % k, y // k
            # r^i s^a r^j s^b = r^(i + (-1)^a j) s^(a+b)
            t[x, y] = (i + (j if a == 0 else -j)) % k + k * ((a + b) % 2)
    return validate_group(t, f"D{k}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Pairs ``(g, h)`` encoded as ``g * |H| + h``."""
    m = H.n
    t = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(G.n * m, G.n * m)
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    return validate_group(t, name)


def heisenberg(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p.

    The matrix with superdiagonal ``a, b`` and corner ``c`` is element
    ``a*p^2 + b*p + c``.
    """
    if not is_prime(p):
        raise GroupError(f"heisenberg(p) needs a prime, got {p}")
    n = p ** 3
    idx = np.arange(n)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    # (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')
    A = (a[:, None] + a[None, :]) % p
    B = (b[:, None] + b[None, :]) % p
    C = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    t = A * p * p + B * p + C
    return validate_group(t, f"Heis({p})")


def quaternion() -> FiniteGroup:
    """Q8 with elements ``1, i, j, k, -1, -i, -j, -k`` in that order."""
    # unit quaternion products: basis index and sign
    prod = {(0, q): (q, 1) for q in range(4)}
    prod.update({(q, 0): (q, 1) for q in range(4)})
    prod.update({(q, q): (0, -1) for q in range(1, 4)})
    prod.update({(1, 2): (3, 1), (2, 3): (1, 1), (3, 1): (2, 1),
                 (2, 1): (3, -1), (3, 2): (1, -1), (1, 3): (2, -1)})
    t = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            q, s = prod[(x % 4, y % 4)]
            sign = s * (-1 if x >= 4 else 1) * (-1 if y >= 4 else 1)
            t[x, y] = q + (4 if sign < 0 else 0)
    return validate_group(t, "Q8")


def make_group(family: str, **params) -> FiniteGroup:
    """Build a group by family name.

    ``cyclic(n=)``, ``dihedral(k=)``, ``direct_product(G=, H=)``,
    ``heisenberg(p=)`` and ``quaternion()``.
    """
    builders = {
        "cyclic": lambda: cyclic(int(params["n"])),
        "dihedral": lambda: dihedral(int(params["k"])),
        "direct_product": lambda: direct_product(params["G"], params["H"]),
        "heisenberg": lambda: heisenberg(int(params["p"])),
        "quaternion": quaternion,
    }
    if family not in builders:
        raise GroupError(f"unknown group family {family!r}")
    try:
        return builders[family]()
    except KeyError as exc:
        raise GroupError(f"family {family!r} needs parameter {exc.args[0]!r}") from None


def catalog() -> dict[str, FiniteGroup]:
    """Test catalog: one group per iso class of order <= 6, the five of order 8,
    plus C2xC3 (a second presentation of C6), Heis(3) and C27."""
    c2, c3, c4 = cyclic(2), cyclic(3), cyclic(4)
    groups = [
        cyclic(1), c2, c3, c4, direct_product(c2, c2), cyclic(5), cyclic(6),
        direct_product(c2, c3), dihedral(3),
        cyclic(8), direct_product(c4, c2), direct_product(direct_product(c2, c2), c2),
        dihedral(4), quaternion(),
        heisenberg(3), cyclic(27),
    ]
    return {g.name: g for g in groups}


# ---------------------------------------------------------------------------
# invariants and isomorphism


def element_order(G: FiniteGroup, x: int) -> int:
    k, y = 1, x
    while y != G.identity:
        y = int(G.table[y, x])
        k += 1
    return k


def element_orders(G: FiniteGroup) -> list[int]:
    """Sorted multiset of element orders."""
    return sorted(element_order(G, x) for x in range(G.n))


def generating_set(G: FiniteGroup) -> list[int]:
    """Greedy generators: repeatedly add the element of largest order outside
    the current subgroup (ties to the smallest index)."""
    orders = [element_order(G, x) for x in range(G.n)]
    ranked = sorted(range(G.n), key=lambda x: (-orders[x], x))
    gens: list[int] = []
    sub = {G.identity}
    for x in ranked:
        if x in sub:
            continue
        gens.append(x)
        sub = _closure(G, gens)
        if len(sub) == G.n:
            break
    return gens


def _closure(G: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(G.table[x, g])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _extend(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    phi = [-1] * G.n
    phi[G.identity] = H.identity
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y, target = int(G.table[x, g]), int(H.table[phi[x], h])
            if phi[y] == -1:
                phi[y] = target
                queue.append(y)
            elif phi[y] != target:
                return None
    if -1 in phi or len(set(phi)) != G.n:
        return None
    return phi


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, phi: Sequence[int]) -> bool:
    p = np.asarray(phi)
    return bool(np.array_equal(p[G.table], H.table[np.ix_(p, p)]))


def group_isomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[Isomorphism]:
    """All isomorphisms G -> H, found by mapping a generating set of G."""
    if G.n != H.n or element_orders(G) != element_orders(H):
        return []
    gens = generating_set(G)
    h_orders = [element_order(H, y) for y in range(H.n)]
    candidates = [[y for y in range(H.n) if h_orders[y] == element_order(G, g)] for g in gens]
    found = []
    for images in itertools.product(*candidates):
        phi = _extend(G, H, gens, images)
        if phi is not None and is_homomorphism(G, H, phi):
            found.append(Isomorphism(phi))
    return sorted(found, key=lambda iso: iso.mapping)


def group_iso(G: FiniteGroup, H: FiniteGroup) -> Isomorphism | None:
    """Lexicographically least isomorphism ``G -> H``, or ``None``."""
    isos = group_isomorphisms(G, H)
    return isos[0] if isos else None
