"""Matrix tuples over prime fields and their classification oracles.

Everything here is exhaustive over GL(n, p), so sizes are capped: the
number of candidate matrices ``p**(n*n)`` may not exceed ``SCALE_LIMIT``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .groups import is_prime
from .structures import WildclassError

SCALE_LIMIT = 10 ** 7


class MatrixError(WildclassError, ValueError):
    pass


class ScaleGuardExceeded(MatrixError):
    pass


class NotSkewSymmetric(MatrixError):
    pass


class PrimeFieldMatrix:
    """Matrix with entries reduced mod a prime ``p``."""

    __slots__ = ("p", "entries")

    def __init__(self, entries, p: int):
        if not is_prime(p):
            raise MatrixError(f"modulus {p} is not prime")
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise MatrixError("matrix entries must form a 2-d table")
        arr = arr % p
        arr.setflags(write=False)
        self.p = int(p)
        self.entries = arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int, p: int) -> "PrimeFieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zero(cls, n: int, p: int) -> "PrimeFieldMatrix":
        return cls(np.zeros((n, n), dtype=np.int64), p)

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        _same_field(self, other)
        return PrimeFieldMatrix(self.entries @ other.entries, self.p)

    def __add__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        _same_field(self, other)
        return PrimeFieldMatrix(self.entries + other.entries, self.p)

    def __sub__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        _same_field(self, other)
        return PrimeFieldMatrix(self.entries - other.entries, self.p)

    def scale(self, c: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.entries * c, self.p)

    @property
    def T(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.entries.T, self.p)

    def trace(self) -> int:
        return int(np.trace(self.entries) % self.p)

    def rank(self) -> int:
        return _rank_mod_p(self.entries, self.p)

    def inverse(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(_inverse_mod_p(self.entries, self.p), self.p)

    def is_skew_symmetric(self) -> bool:
        return bool(np.array_equal(self.entries.T % self.p, (-self.entries) % self.p))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other):
        return (isinstance(other, PrimeFieldMatrix) and self.p == other.p
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"PrimeFieldMatrix({self.tolist()}, p={self.p})"


def _same_field(*ms: PrimeFieldMatrix) -> None:
    if len({m.p for m in ms}) > 1:
        raise MatrixError("matrices live over different prime fields")


def _rank_mod_p(a: np.ndarray, p: int) -> int:
    m = [list(map(int, row)) for row in a % p]
    rows, cols = len(m), len(m[0]) if m else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def _inverse_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise MatrixError("only square matrices have inverses")
    m = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(a % p)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            raise MatrixError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = pow(m[c][c], -1, p)
        m[c] = [x * inv % p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return np.array([row[n:] for row in m], dtype=np.int64)


@dataclass(frozen=True)
class MatrixPair:
    A: PrimeFieldMatrix
    B: PrimeFieldMatrix

    def __post_init__(self):
        if self.A.p != self.B.p or self.A.shape != self.B.shape or self.A.shape[0] != self.A.shape[1]:
            raise MatrixError("pair needs two square matrices of one size over one field")

    @property
    def p(self) -> int:
        return self.A.p

    @property
    def n(self) -> int:
        return self.A.n

    def conjugate(self, S: PrimeFieldMatrix) -> "MatrixPair":
        Si = S.inverse()
        return MatrixPair(S @ self.A @ Si, S @ self.B @ Si)


# ---------------------------------------------------------------------------
# GL(n, p)


def _guard(n: int, p: int) -> None:
    if p ** (n * n) > SCALE_LIMIT:
        raise ScaleGuardExceeded(f"p^(n^2) = {p}^{n * n} exceeds {SCALE_LIMIT}")


def _det_batch(mats: np.ndarray) -> np.ndarray:
    """Exact integer determinants of a stack of small matrices (Leibniz)."""
    n = mats.shape[-1]
    total = np.zeros(mats.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = np.ones(mats.shape[0], dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * mats[:, i, j]
        total += -term if inversions % 2 else term
    return total


@lru_cache(maxsize=16)
def _gl_array(n: int, p: int) -> np.ndarray:
    _guard(n, p)
    count = p ** (n * n)
    idx = np.arange(count, dtype=np.int64)
    # row-major entries as base-p digits, most significant first
    digits = np.empty((count, n * n), dtype=np.int64)
    for k in range(n * n - 1, -1, -1):
        digits[:, k] = idx % p
        idx //= p
    mats = digits.reshape(count, n, n)
    gl = mats[_det_batch(mats) % p != 0]
    gl.setflags(write=False)
    return gl


def gl_enumerate(n: int, p: int) -> list[PrimeFieldMatrix]:
    """All invertible n x n matrices over F_p in lexicographic entry order."""
    if not is_prime(p):
        raise MatrixError(f"modulus {p} is not prime")
    return [PrimeFieldMatrix(s, p) for s in _gl_array(n, p)]


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p ** n - p ** k
    return out


def _check_tuples(t1: Sequence[PrimeFieldMatrix], t2: Sequence[PrimeFieldMatrix]) -> tuple[int, int]:
    mats = list(t1) + list(t2)
    if len(t1) != len(t2) or not mats:
        raise MatrixError("tuples must be non-empty and of equal length")
    p, shape = mats[0].p, mats[0].shape
    if any(m.p != p or m.shape != shape for m in mats) or shape[0] != shape[1]:
        raise MatrixError("dimension/modulus mismatch")
    return shape[0], p


def _intertwiners(t1, t2) -> np.ndarray:
    """Invertible S (as a stack) with ``S X = Y S`` for every pair (X, Y)."""
    n, p = _check_tuples(t1, t2)
    S = _gl_array(n, p)
    ok = np.ones(len(S), dtype=bool)
    for X, Y in zip(t1, t2):
        lhs = np.einsum("kij,jl->kil", S, X.entries)
        rhs = np.einsum("ij,kjl->kil", Y.entries, S)
        ok &= ((lhs - rhs) % p == 0).all(axis=(1, 2))
    return S[ok]


def simultaneous_similar(t1: Sequence[PrimeFieldMatrix],
                         t2: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix | None:
    """First S in GL order with ``S X_i S^-1 = Y_i`` for all i, or None."""
    hits = _intertwiners(t1, t2)
    if len(hits) == 0:
        return None
    S = PrimeFieldMatrix(hits[0], t1[0].p)
    Si = S.inverse()
    if any(S @ X @ Si != Y for X, Y in zip(t1, t2)):
        raise AssertionError("conjugator failed post-verification")
    return S


def sim_similar(P1: MatrixPair, P2: MatrixPair) -> PrimeFieldMatrix | None:
    return simultaneous_similar((P1.A, P1.B), (P2.A, P2.B))


def stabilizer_size(P: MatrixPair) -> int:
    return len(_intertwiners((P.A, P.B), (P.A, P.B)))


def conjugation_orbit(P: MatrixPair) -> set[tuple[bytes, bytes]]:
    """Distinct conjugates of P, keyed by entry bytes."""
    S = _gl_array(P.n, P.p)
    out = set()
    for s in S:
        Sm = PrimeFieldMatrix(s, P.p)
        Q = P.conjugate(Sm)
        out.add((Q.A.entries.tobytes(), Q.B.entries.tobytes()))
    return out


def trace_word_invariants(P: MatrixPair, maxlen: int) -> list[int]:
    """Traces of all words in A, B of length 1..maxlen.

    Words are ordered by length, then lexicographically with A before B.
    """
    if maxlen < 1:
        raise MatrixError("maxlen must be at least 1")
    out = []
    for length in range(1, maxlen + 1):
        for word in itertools.product((P.A, P.B), repeat=length):
            prod = word[0]
            for m in word[1:]:
                prod = prod @ m
            out.append(prod.trace())
    return out


# ---------------------------------------------------------------------------
# skew-symmetric congruence


def skew_congruent(M1: PrimeFieldMatrix, M2: PrimeFieldMatrix) -> PrimeFieldMatrix | None:
    """First S in GL order with ``S M1 S^T = M2``, or None."""
    n, p = _check_tuples([M1], [M2])
    for M in (M1, M2):
        if not M.is_skew_symmetric():
            raise NotSkewSymmetric(f"{M} is not skew-symmetric")
    S = _gl_array(n, p)
    img = np.einsum("kij,jl,kml->kim", S, M1.entries, S) % p
    hits = np.flatnonzero((img == M2.entries).all(axis=(1, 2)))
    if M1.rank() != M2.rank() and hits.size:
        raise AssertionError("congruent matrices of different rank")
    if hits.size == 0:
        return None
    Sm = PrimeFieldMatrix(S[hits[0]], p)
    if Sm @ M1 @ Sm.T != M2:
        raise AssertionError("congruence failed post-verification")
    return Sm


# ---------------------------------------------------------------------------
# non-commutative polynomials and templates


Word = tuple[int, ...]
_TERM = re.compile(r"^\s*(?:(-?\d+)\s*\*?\s*)?((?:x\d+\s*[\*·]?\s*)*)$")


class NCPolynomial:
    """Finite map from words over ``x1..xa`` (0-based variable ids) to integer
    coefficients. Coefficients are reduced mod p only at evaluation."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None):
        acc: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            w = tuple(int(i) for i in w)
            if any(i < 0 for i in w):
                raise MatrixError("variable ids are non-negative")
            acc[w] = acc.get(w, 0) + int(c)
        self.terms = {w: c for w, c in sorted(acc.items(), key=lambda t: (len(t[0]), t[0])) if c}

    @classmethod
    def var(cls, i: int) -> "NCPolynomial":
        """The variable ``x{i+1}``."""
        return cls({(i,): 1})

    @classmethod
    def constant(cls, c: int) -> "NCPolynomial":
        return cls({(): c})

    @classmethod
    def parse(cls, text: str) -> "NCPolynomial":
        """Parse sums like ``"x1*x2 - 2*x1 + 1"`` (1-based variable names)."""
        src = text.replace("-", "+-").replace("+-", "+ -")
        terms: dict[Word, int] = {}
        for chunk in src.split("+"):
            chunk = chunk.strip()
            if not chunk:
                continue
            sign = 1
            if chunk.startswith("-"):
                sign, chunk = -1, chunk[1:].strip()
            match = _TERM.match(chunk)
            if not match or not (match.group(1) or match.group(2).strip()):
                raise MatrixError(f"cannot parse polynomial term {chunk!r}")
            coeff = int(match.group(1)) if match.group(1) else 1
            word = tuple(int(v) - 1 for v in re.findall(r"x(\d+)", match.group(2)))
            if any(i < 0 for i in word):
                raise MatrixError("variables are numbered from x1")
            terms[word] = terms.get(word, 0) + sign * coeff
        return cls(terms)

    @property
    def arity(self) -> int:
        return max((max(w) + 1 for w in self.terms if w), default=0)

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return NCPolynomial(acc)

    def __mul__(self, other):
        if isinstance(other, int):
            return NCPolynomial({w: c * other for w, c in self.terms.items()})
        acc: dict[Word, int] = {}
        for (w1, c1), (w2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            acc[w1 + w2] = acc.get(w1 + w2, 0) + c1 * c2
        return NCPolynomial(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, NCPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k, (w, c) in enumerate(self.terms.items()):
            mono = "*".join(f"x{i + 1}" for i in w)
            mag = abs(c)
            body = str(mag) if not mono else mono if mag == 1 else f"{mag}*{mono}"
            if k == 0:
                out = f"-{body}" if c < 0 else body
            else:
                out += f" - {body}" if c < 0 else f" + {body}"
        return out

    __repr__ = __str__

    def evaluate(self, args: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix:
        if not args:
            raise MatrixError("evaluation needs at least one matrix to fix n and p")
        n, p = args[0].n, args[0].p
        total = np.zeros((n, n), dtype=np.int64)
        for w, c in self.terms.items():
            prod = np.eye(n, dtype=np.int64)
            for i in w:
                prod = prod @ args[i].entries % p
            total = (total + c * prod) % p
        return PrimeFieldMatrix(total, p)


@dataclass(frozen=True)
class NCTemplate:
    """A tuple of matrices with NCPolynomial entries, all in ``arity`` variables.

    Evaluation substitutes n x n matrices for the variables; an r x c
    template matrix becomes an (r n) x (c n) block matrix.
    """

    matrices: tuple[tuple[tuple[NCPolynomial, ...], ...], ...]
    arity: int

    def __init__(self, matrices, arity: int):
        mats = tuple(tuple(tuple(e if isinstance(e, NCPolynomial) else NCPolynomial.parse(str(e))
                                 for e in row) for row in M) for M in matrices)
        for M in mats:
            if not M or len({len(r) for r in M}) != 1:
                raise MatrixError("template matrices must be non-empty rectangles")
            if any(e.arity > arity for row in M for e in row):
                raise MatrixError(f"template entry uses more than {arity} variables")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "arity", int(arity))

    @property
    def size(self) -> int:
        return len(self.matrices)


def nc_eval(T: NCTemplate, args: Sequence[PrimeFieldMatrix]) -> tuple[PrimeFieldMatrix, ...]:
    if len(args) != T.arity:
        raise MatrixError(f"template has arity {T.arity}, got {len(args)} arguments")
    if args:
        n, p = args[0].n, args[0].p
        if any(a.shape != (n, n) or a.p != p for a in args):
            raise MatrixError("arguments must be square, of one size, over one field")
    else:
        raise MatrixError("nc_eval needs at least one argument")
    out = []
    for M in T.matrices:
        blocks = [[e.evaluate(args).entries for e in row] for row in M]
        out.append(PrimeFieldMatrix(np.block(blocks), p))
    return tuple(out)


# ---------------------------------------------------------------------------
# containment, one instance pair at a time


Oracle = Callable[[Sequence[PrimeFieldMatrix], Sequence[PrimeFieldMatrix]], bool]


@dataclass(frozen=True)
class ContainmentReport:
    source_equivalent: bool
    image_equivalent: bool
    image_members: tuple[bool, bool] | None
    images: tuple[tuple[PrimeFieldMatrix, ...], tuple[PrimeFieldMatrix, ...]]

    @property
    def agrees(self) -> bool:
        """Whether the equivalence verdicts match for this instance pair."""
        return self.source_equivalent == self.image_equivalent

    @property
    def violation(self) -> bool:
        return not self.agrees or (self.image_members is not None and not all(self.image_members))


def similarity_oracle(t1: Sequence[PrimeFieldMatrix], t2: Sequence[PrimeFieldMatrix]) -> bool:
    """Equivalence under simultaneous conjugation by one invertible matrix."""
    return simultaneous_similar(t1, t2) is not None


def containment_check_instance(T: NCTemplate,
                               source: Sequence[PrimeFieldMatrix],
                               source2: Sequence[PrimeFieldMatrix],
                               equiv_src: Oracle = similarity_oracle,
                               equiv_dst: Oracle = similarity_oracle,
                               member_dst: Callable[[Sequence[PrimeFieldMatrix]], bool] | None = None,
                               ) -> ContainmentReport:
    """Compare source equivalence of two instances with equivalence of their
    template images. This tests the condition for this single pair only and
    certifies nothing about other instances."""
    img1, img2 = nc_eval(T, source), nc_eval(T, source2)
    members = None if member_dst is None else (bool(member_dst(img1)), bool(member_dst(img2)))
    return ContainmentReport(bool(equiv_src(source, source2)), bool(equiv_dst(img1, img2)),
                             members, (img1, img2))
