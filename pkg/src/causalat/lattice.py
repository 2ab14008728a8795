"""Finite lattices: construction from Hasse diagrams, table queries, and the
standard example families.

Elements are integers ``0..n-1``.  Every lattice is stored in a canonical
index order (a topological sort of the order with ties broken by label), so
``0`` is always the bottom and ``n-1`` the top, and the same abstract input
always produces the same tables.
"""

import heapq
import itertools
from functools import reduce

import numpy as np

from . import kernels
from .errors import (
    EmptyLattice,
    ForeignElement,
    LatticeError,
    NotALattice,
    NotAPoset,
    ParameterOutOfRange,
    TooLarge,
)
from .report import Report

#: enumerations over all subsets or all maps refuse lattices above this size
DEFAULT_CAP = 20


def _readonly(a):
    a.setflags(write=False)
    return a


def _canonical_order(labels, le):
    n = len(labels)
    pending = [int(le[:, x].sum()) - 1 for x in range(n)]
    heap = [(labels[x], x) for x in range(n) if pending[x] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, y = heapq.heappop(heap)
        out.append(y)
        for x in range(n):
            if x != y and le[y, x]:
                pending[x] -= 1
                if pending[x] == 0:
                    heapq.heappush(heap, (labels[x], x))
    return out


class FiniteLattice:
    """A finite bounded lattice with precomputed order, meet and join tables.

    Build one through :func:`build_from_covers`, :meth:`from_order` or a
    generator; the constructor itself validates the order and fills the
    tables.  Instances are immutable.
    """

    def __init__(self, labels, leq, name=None):
        labels = tuple(str(s) for s in labels)
        n = len(labels)
        if n == 0:
            raise EmptyLattice("a lattice needs at least one element")
        if len(set(labels)) != n:
            dup = next(s for s in labels if labels.count(s) > 1)
            raise LatticeError(f"duplicate label {dup!r}", witness=dup)
        le = np.asarray(leq, dtype=bool)
        if le.shape != (n, n):
            raise LatticeError(f"order table has shape {le.shape}, expected {(n, n)}")
        if not le.diagonal().all():
            x = int(np.flatnonzero(~le.diagonal())[0])
            raise NotAPoset(f"order is not reflexive at {labels[x]}", witness=(labels[x],))
        both = le & le.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = (int(i) for i in np.argwhere(both)[0])
            raise NotAPoset(
                f"{labels[a]} and {labels[b]} lie below each other",
                witness=(labels[a], labels[b]),
            )
        closed = kernels.active.transitive_closure(le).astype(bool)
        if (closed != le).any():
            a, b = (int(i) for i in np.argwhere(closed != le)[0])
            raise NotAPoset(
                f"order is not transitive: {labels[a]} <= {labels[b]} is implied but missing",
                witness=(labels[a], labels[b]),
            )

        perm = _canonical_order(labels, le)
        le = le[np.ix_(perm, perm)]
        labels = tuple(labels[i] for i in perm)
        meet, join = kernels.active.bound_tables(le)
        for table, what in ((meet, "meet"), (join, "join")):
            if (table < 0).any():
                a, b = (int(i) for i in np.argwhere(table < 0)[0])
                raise NotALattice(
                    f"{labels[a]} and {labels[b]} have no {what}",
                    witness=(labels[a], labels[b]),
                )

        self.name = name
        self.labels = labels
        self.n = n
        self.leq = _readonly(le.astype(np.uint8))
        self.meet = _readonly(np.ascontiguousarray(meet, dtype=np.int32))
        self.join = _readonly(np.ascontiguousarray(join, dtype=np.int32))
        self.bottom = 0
        self.top = n - 1
        self._index = {s: i for i, s in enumerate(labels)}
        self._le = le.tolist()
        self._meet = self.meet.tolist()
        self._join = self.join.tolist()
        self._down = [sum(1 << y for y in range(n) if self._le[y][x]) for x in range(n)]
        self._up = [sum(1 << y for y in range(n) if self._le[x][y]) for x in range(n)]

    @classmethod
    def from_order(cls, labels, leq, name=None):
        return cls(labels, leq, name=name)

    # identity ---------------------------------------------------------------

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteLattice{tag} n={self.n}>"

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.labels, self.leq.tobytes()))

    def renamed(self, name):
        out = object.__new__(FiniteLattice)
        out.__dict__.update(self.__dict__)
        out.name = name
        return out

    # element access ---------------------------------------------------------

    @property
    def elements(self):
        return range(self.n)

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise ForeignElement(f"{label!r} is not an element of {self!r}", witness=label) from None

    def label(self, x):
        return self.labels[x]

    def check(self, x):
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.n:
            raise ForeignElement(f"{x!r} is not an element of {self!r}", witness=x)
        return int(x)

    def subset(self, members):
        return frozenset(self.check(x) for x in members)

    def fmt(self, members):
        """Render a collection of elements as ``{a,b}`` in index order."""
        return "{" + ",".join(self.labels[x] for x in sorted(members)) + "}"

    # order and operations ---------------------------------------------------

    def le(self, a, b):
        return self._le[a][b]

    def lt(self, a, b):
        return a != b and self._le[a][b]

    def glb(self, a, b):
        return self._meet[a][b]

    def lub(self, a, b):
        return self._join[a][b]

    def meet_set(self, members):
        return reduce(self.glb, (self.check(x) for x in members), self.top)

    def join_set(self, members):
        return reduce(self.lub, (self.check(x) for x in members), self.bottom)

    def down_mask(self, x):
        return self._down[x]

    def up_mask(self, x):
        return self._up[x]

    def down_set(self, x):
        return frozenset(y for y in range(self.n) if self._le[y][x])

    def up_set(self, x):
        return frozenset(y for y in range(self.n) if self._le[x][y])

    def covers(self):
        """Covering pairs ``(lower, upper)`` in index order."""
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if self._le[a][b] and not any(
                    self._le[a][c] and self._le[c][b] for c in range(a + 1, b)
                ):
                    out.append((a, b))
        return out

    def dual(self):
        return FiniteLattice(self.labels, self.leq.T, name=self.name and self.name + "^op")

    def guard(self, cap, what="operation"):
        if cap is not None and self.n > cap:
            raise TooLarge(f"{what} refuses lattices with more than {cap} elements (n={self.n})")

    def axioms_report(self):
        """Table-scan check of the lattice axioms."""
        le = self.leq.astype(bool)
        n = self.n
        r = Report()
        idx = np.arange(n)
        r.add("order-reflexive", le.diagonal().all())
        anti = le & le.T & ~np.eye(n, dtype=bool)
        r.add("order-antisymmetric", not anti.any(), [tuple(map(int, p)) for p in np.argwhere(anti)[:1]])
        trans = np.einsum("ij,jk->ik", le.astype(int), le.astype(int)) > 0
        r.add("order-transitive", not (trans & ~le).any())
        m, j = self.meet, self.join
        glb_ok = le[m, idx[:, None]].all() and le[m, idx[None, :]].all()
        lub_ok = le[idx[:, None], j].all() and le[idx[None, :], j].all()
        for a in range(n):
            for b in range(n):
                lower = le[:, a] & le[:, b]
                upper = le[a] & le[b]
                glb_ok = glb_ok and le[lower, m[a, b]].all()
                lub_ok = lub_ok and le[j[a, b], upper].all()
        r.add("meet-is-glb", glb_ok)
        r.add("join-is-lub", lub_ok)
        r.add("bounds", le[self.bottom].all() and le[:, self.top].all())
        r.add("commutative", np.array_equal(m, m.T) and np.array_equal(j, j.T))
        assoc_m = np.array_equal(m[m[:, :, None], idx], m[idx[:, None, None], m[None, :, :]])
        assoc_j = np.array_equal(j[j[:, :, None], idx], j[idx[:, None, None], j[None, :, :]])
        r.add("associative", assoc_m and assoc_j)
        r.add(
            "absorptive",
            (m[idx[:, None], j] == idx[:, None]).all() and (j[idx[:, None], m] == idx[:, None]).all(),
        )
        return r


# construction -----------------------------------------------------------------


def build_from_covers(labels, covers, name=None):
    """Lattice whose order is the reflexive-transitive closure of ``covers``.

    ``covers`` holds ``(lower, upper)`` label pairs.
    """
    labels = [str(s) for s in labels]
    if not labels:
        raise EmptyLattice("a lattice needs at least one element")
    pos = {}
    for i, s in enumerate(labels):
        if s in pos:
            raise LatticeError(f"duplicate label {s!r}", witness=s)
        pos[s] = i
    adj = np.zeros((len(labels), len(labels)), dtype=np.uint8)
    for lo, hi in covers:
        for s in (lo, hi):
            if str(s) not in pos:
                raise ForeignElement(f"cover mentions unknown element {s!r}", witness=s)
        adj[pos[str(lo)], pos[str(hi)]] = 1
    closed = kernels.active.transitive_closure(adj)
    return FiniteLattice(labels, closed, name=name)


def meet_set(L, members):
    return L.meet_set(members)


def join_set(L, members):
    return L.join_set(members)


def adjoin_top(L, name=None):
    """Upper pointed extension: a fresh top strictly above the old one."""
    new = L.labels[L.top] + "_"
    while new in L._index:
        new += "_"
    n = L.n
    le = np.zeros((n + 1, n + 1), dtype=bool)
    le[:n, :n] = L.leq.astype(bool)
    le[:, n] = True
    out = FiniteLattice(L.labels + (new,), le, name=name or (L.name and L.name + "+"))
    assert out.labels[:n] == L.labels
    return out


# example families -------------------------------------------------------------


def chain(n):
    if n < 1:
        raise ParameterOutOfRange(f"chain length must be >= 1, got {n}")
    le = np.triu(np.ones((n, n), dtype=bool))
    return FiniteLattice([str(i) for i in range(n)], le, name=f"chain{n}")


def _atom_names(k):
    if k > 26:
        raise ParameterOutOfRange(f"at most 26 atoms are supported, got {k}")
    return [chr(ord("a") + i) for i in range(k)]


def boolean(k):
    """Subsets of ``k`` atoms; ``0`` is empty, ``1`` the full set, others are
    named by their atoms (``ab``)."""
    if not 0 <= k <= 8:
        raise ParameterOutOfRange(f"boolean(k) needs 0 <= k <= 8, got {k}")
    atoms = _atom_names(k)
    full = (1 << k) - 1
    masks = list(range(1 << k))

    def name(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "".join(atoms[i] for i in range(k) if m >> i & 1)

    le = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool)
    return FiniteLattice([name(m) for m in masks], le, name=f"boolean{k}")


def mn(k):
    """``M_k``: ``k`` pairwise incomparable atoms between ``0`` and ``1``."""
    if k < 0:
        raise ParameterOutOfRange(f"mn(k) needs k >= 0, got {k}")
    atoms = _atom_names(k)
    covers = [("0", a) for a in atoms] + [(a, "1") for a in atoms]
    if not atoms:
        covers = [("0", "1")]
    return build_from_covers(["0", *atoms, "1"], covers, name=f"m{k}")


def n5():
    """The pentagon: ``0 < a < b < 1`` and ``0 < c < 1``."""
    return build_from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        name="n5",
    )


def _rref(vectors, q, d):
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < d:
        pivot = next((r for r in rows if r[col] % q), None)
        if pivot is None:
            col += 1
            continue
        inv = pow(pivot[col], q - 2, q)
        pivot = [(x * inv) % q for x in pivot]
        basis = [[(x - b[col] * y) % q for x, y in zip(b, pivot)] for b in basis]
        basis.append(pivot)
        rows = [[(x - r[col] * y) % q for x, y in zip(r, pivot)] for r in rows]
        rows = [r for r in rows if any(r)]
        col += 1
    return sorted(tuple(b) for b in basis)


def subspace_lattice(q, d):
    """All linear subspaces of ``GF(q)^d`` ordered by inclusion.

    Proper nonzero subspaces are labelled by their reduced row-echelon basis,
    rows written as digit strings joined by ``|``.
    """
    if q not in (2, 3, 5):
        raise ParameterOutOfRange(f"field size must be 2, 3 or 5, got {q}")
    if not 0 <= d <= 3:
        raise ParameterOutOfRange(f"dimension must be in 0..3, got {d}")
    zero = (0,) * d
    space = list(itertools.product(range(q), repeat=d))

    def add(S, v):
        return frozenset(
            tuple((a + c * b) % q for a, b in zip(u, v)) for u in S for c in range(q)
        )

    seen = {frozenset([zero])}
    frontier = [frozenset([zero])]
    while frontier:
        S = frontier.pop()
        for v in space:
            if v not in S:
                T = add(S, v)
                if T not in seen:
                    seen.add(T)
                    frontier.append(T)
    subspaces = sorted(seen, key=lambda S: (len(S), sorted(S)))
    full = len(space)

    def name(S):
        if len(S) == 1:
            return "0"
        if len(S) == full:
            return "1"
        return "|".join("".join(map(str, row)) for row in _rref(S, q, d))

    le = np.array([[a <= b for b in subspaces] for a in subspaces], dtype=bool)
    return FiniteLattice([name(S) for S in subspaces], le, name=f"sub{q}_{d}")


# structure queries ------------------------------------------------------------


def atoms(L):
    return frozenset(x for x in L.elements if x != L.bottom and bin(L.down_mask(x)).count("1") == 2)


def is_atomistic(L):
    at = atoms(L)
    return all(L.join_set(a for a in at if L.le(a, x)) == x for x in L.elements)


def is_isomorphic(L1, L2):
    """An order isomorphism ``L1 -> L2`` as a tuple of images, or ``None``."""
    if L1.n != L2.n:
        return None
    n = L1.n
    sig1 = [(bin(L1.down_mask(x)).count("1"), bin(L1.up_mask(x)).count("1")) for x in range(n)]
    sig2 = [(bin(L2.down_mask(x)).count("1"), bin(L2.up_mask(x)).count("1")) for x in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    phi = [-1] * n
    used = [False] * n

    def place(x):
        if x == n:
            return True
        for y in range(n):
            if used[y] or sig2[y] != sig1[x]:
                continue
            if all(
                L1.le(z, x) == L2.le(phi[z], y) and L1.le(x, z) == L2.le(y, phi[z])
                for z in range(x)
            ):
                phi[x] = y
                used[y] = True
                if place(x + 1):
                    return True
                used[y] = False
        phi[x] = -1
        return False

    return tuple(phi) if place(0) else None
