"""Actuality sets, the operational resolution, and continuity of
union-preserving maps between proposition algebras.

The proposition algebra of ``L`` is the powerset of ``L ∖ {0}``.  It is never
materialised: a union-preserving map is stored by its images of singletons.
Internally an actuality set over ``L`` is a bitmask whose bit ``i`` stands for
element ``i + 1`` (element ``0`` is always the bottom).
"""

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import ForeignElement, NoComparablePair, NotContinuous, TooLarge
from .galois import MapTable, enumerate_hom
from .lattice import DEFAULT_CAP
from .report import Report, Verdict

#: is_continuous scans every subset of the source up to this many elements
EXHAUSTIVE_CAP = 12
#: above EXHAUSTIVE_CAP this many random subsets are tested
SAMPLES = 4096
#: check_Fsharp_quantaloidal refuses homs with more union-preserving maps
MAX_UNION_MAPS = 1 << 20


def actuality_set(L, members):
    out = frozenset(L.index(m) if isinstance(m, str) else L.check(m) for m in members)
    if L.bottom in out:
        raise ForeignElement("an actuality set cannot contain the bottom element", witness=L.bottom)
    return out


def to_mask(members):
    return sum(1 << (x - 1) for x in members)


def from_mask(mask):
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@lru_cache(maxsize=256)
def _tables(L):
    """Join of every subset of ``L ∖ {0}`` (by mask) and ``embed`` masks."""
    sub_join = kernels.active.subset_joins(L.join, L.bottom, np.arange(1, L.n))
    embed = np.array([L.down_mask(x) >> 1 for x in L.elements], dtype=np.int64)
    return sub_join, embed


def embed(L, x):
    """``x ↦ {y ≠ 0 | y ≤ x}``; meet-preserving."""
    x = L.check(x)
    return frozenset(y for y in L.elements if y != L.bottom and L.le(y, x))


def resolve(L, A):
    """Operational resolution: the strongest property guaranteed by an
    actuality set, i.e. its join."""
    return L.join_set(actuality_set(L, A))


def check_resolution_adjunction(L, cap=DEFAULT_CAP, embedding=None):
    """``⋁A ≤ x  <=>  A ⊆ embed(x)`` for all actuality sets ``A`` and all
    ``x``; ``embed`` preserves all meets; ``resolve ∘ embed = id``.

    ``embedding`` overrides :func:`embed` (used to exercise the failure path).
    """
    L.guard(cap, "check_resolution_adjunction")
    emb = embedding or (lambda x: embed(L, x))
    E = [to_mask(emb(x)) for x in L.elements]
    sub_join, _ = _tables(L)
    masks = np.arange(1 << (L.n - 1), dtype=np.int64)
    le = L.leq.astype(bool)
    r = Report()

    hit = None
    for x in L.elements:
        lhs = le[sub_join, x]
        rhs = (masks & ~np.int64(E[x])) == 0
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            hit = (from_mask(int(bad[0])), x)
            break
    r.add(
        "adjunction",
        hit is None,
        [hit] if hit else (),
        shown="" if hit is None else f"A={L.fmt(hit[0])} x={L.label(hit[1])}",
    )

    # every subset S of L: embed(⋀S) = ⋂ embed(S)
    full = (1 << (L.n - 1)) - 1
    meets = [L.top] * (1 << L.n)
    inter = [full] * (1 << L.n)
    hit = None
    if E[L.top] != full:
        hit = frozenset()
    else:
        for mask in range(1, 1 << L.n):
            low = (mask & -mask).bit_length() - 1
            rest = mask & (mask - 1)
            meets[mask] = L.glb(meets[rest], low)
            inter[mask] = inter[rest] & E[low]
            if E[meets[mask]] != inter[mask]:
                hit = frozenset(i for i in range(L.n) if mask >> i & 1)
                break
    r.add("embed-meets", hit is None, [hit] if hit is not None else (), shown="" if hit is None else L.fmt(hit))

    bad = [x for x in L.elements if L.join_set(from_mask(E[x])) != x]
    r.add("resolve-embed", not bad, bad, shown=L.label(bad[0]) if bad else "")
    return r


@dataclass(frozen=True, eq=False)
class ActualityMap:
    """Union-preserving ``P(L1) -> P(L2)`` given by singleton images.

    ``images[a]`` is the image of ``{a}``; ``images[0]`` is always empty.
    """

    src: object
    dst: object
    images: tuple
    name: str = None

    def __post_init__(self):
        imgs = list(self.images)
        if len(imgs) == self.src.n - 1:
            imgs = [frozenset()] + imgs
        if len(imgs) != self.src.n:
            raise ForeignElement(f"expected {self.src.n - 1} singleton images, got {len(imgs)}")
        imgs[self.src.bottom] = frozenset()
        object.__setattr__(self, "images", tuple(actuality_set(self.dst, s) for s in imgs))

    @classmethod
    def from_dict(cls, src, dst, assignment, name=None):
        imgs = [frozenset()] * src.n
        for a, s in assignment.items():
            a = src.index(a) if isinstance(a, str) else src.check(a)
            if a == src.bottom:
                raise ForeignElement("the bottom element has no singleton image", witness=a)
            imgs[a] = actuality_set(dst, s)
        return cls(src, dst, tuple(imgs), name)

    @classmethod
    def from_masks(cls, src, dst, row, name=None):
        return cls(src, dst, (frozenset(),) + tuple(from_mask(int(m)) for m in row), name)

    def __call__(self, A):
        out = frozenset()
        for a in A:
            out |= self.images[a]
        return out

    def __eq__(self, other):
        if not isinstance(other, ActualityMap):
            return NotImplemented
        return self.images == other.images and self.src == other.src and self.dst == other.dst

    def __hash__(self):
        return hash(self.images)

    @property
    def masks(self):
        return np.array([to_mask(s) for s in self.images[1:]], dtype=np.int64)

    def union(self, other):
        return ActualityMap(self.src, self.dst, tuple(a | b for a, b in zip(self.images, other.images)))

    def then(self, other):
        """``other ∘ self``."""
        return ActualityMap(self.src, other.dst, tuple(other(s) for s in self.images))

    def lines(self):
        return [
            f"{self.src.label(a)} |-> {self.dst.fmt(self.images[a])}"
            for a in self.src.elements
            if a != self.src.bottom
        ]


def continuity_scan(L1, L2, images):
    """Batch form of :func:`is_continuous`/:func:`induced_map`.

    ``images`` is an ``(m, |L1|-1)`` array of singleton-image masks.  Returns
    the least failing subset mask per map (-1 when continuous) and the
    candidate square-filler ``x ↦ ⋁g(embed(x))`` per map.
    """
    sub1, emb1 = _tables(L1)
    sub2, _ = _tables(L2)
    images = np.asarray(images, dtype=np.int64)
    if images.ndim == 1:
        images = images.reshape(1, L1.n - 1)
    return kernels.active.union_map_scan(images, sub1, emb1, sub2)


def is_continuous(g, cap=DEFAULT_CAP, exhaustive_cap=EXHAUSTIVE_CAP, seed=0, samples=SAMPLES):
    """``⋁A = ⋁B ⇒ ⋁g(A) = ⋁g(B)``, tested as ``⋁g(A) = ⋁g(embed(⋁A))``.

    The witness is the lexicographically least failing pair ``(A, B)``.
    Above ``exhaustive_cap`` elements, ``samples`` random subsets are tested
    against ``B = embed(⋁A)`` and the coverage is reported in the note.
    """
    L1, L2 = g.src, g.dst
    L1.guard(cap, "is_continuous")
    if L1.n <= exhaustive_cap:
        witness, _ = continuity_scan(L1, L2, g.masks)
        if int(witness[0]) < 0:
            return Verdict(True, note="coverage=exhaustive")
        return Verdict(False, _least_pair(g), note="coverage=exhaustive")
    rng = random.Random(seed)
    k = L1.n - 1
    for _ in range(samples):
        A = from_mask(rng.getrandbits(k))
        B = embed(L1, L1.join_set(A))
        if L2.join_set(g(A)) != L2.join_set(g(B)):
            return Verdict(False, (A, B), note=f"coverage={samples}/{1 << k}")
    return Verdict(True, note=f"coverage={samples}/{1 << k}")


def _least_pair(g):
    """Least ``A`` (by mask) that resolves like some ``B`` with a different
    image resolution, and the least such ``B``."""
    L1, L2 = g.src, g.dst
    sub1, _ = _tables(L1)
    sub2, _ = _tables(L2)
    k = L1.n - 1
    img = np.zeros(1 << k, dtype=np.int64)
    for i, m in enumerate(g.masks.tolist()):
        bit = 1 << i
        img[bit : 2 * bit] = img[:bit] | m
    gj = sub2[img]
    for a in range(1 << k):
        same = np.flatnonzero((sub1 == sub1[a]) & (gj != gj[a]))
        if same.size:
            return from_mask(a), from_mask(int(same[0]))
    raise AssertionError("continuity scan and pair scan disagree")


def induced_map(g, **kw):
    """The unique join-preserving ``f`` with ``f(⋁A) = ⋁g(A)``."""
    verdict = is_continuous(g, **kw)
    if not verdict:
        A, B = verdict.witness
        raise NotContinuous(
            f"⋁{g.src.fmt(A)} = ⋁{g.src.fmt(B)} but their images resolve differently",
            witness=verdict.witness,
        )
    L1, L2 = g.src, g.dst
    img = tuple(L2.join_set(g(embed(L1, x))) for x in L1.elements)
    return MapTable(L1, L2, img).flagged("join", "monotone")


def lift_map(f):
    """``g({a}) = embed(f(a))``; a preimage of ``f`` under the resolution
    functor."""
    f = f.checked("join")
    return ActualityMap(f.src, f.dst, tuple(embed(f.dst, f(a)) for a in f.src.elements))


def all_union_maps(L1, L2):
    """Singleton-image masks of every union-preserving map, one row each."""
    k1, k2 = L1.n - 1, L2.n - 1
    count = (1 << k2) ** k1
    if count > MAX_UNION_MAPS:
        raise TooLarge(f"{count} union-preserving maps {L1.name}->{L2.name}")
    rows = np.array(list(itertools.product(range(1 << k2), repeat=k1)), dtype=np.int64)
    return rows.reshape(count, k1)


def _compose_masks(g_rows, h_rows, k_mid):
    """Singleton masks of ``h ∘ g`` for paired rows."""
    out = np.zeros_like(g_rows)
    for b in range(k_mid):
        has = (g_rows >> b) & 1
        out |= has * h_rows[:, b : b + 1]
    return out


def _pairs(m1, m2, budget, rng):
    if m1 * m2 <= budget:
        return [(i, j) for i in range(m1) for j in range(m2)], "exhaustive"
    return [(rng.randrange(m1), rng.randrange(m2)) for _ in range(budget)], f"{budget}/{m1 * m2}"


def check_Fsharp_quantaloidal(L1, L2, cap=DEFAULT_CAP, pair_budget=20000, seed=0):
    """The resolution functor on continuous maps preserves suprema and
    composition, and is full.

    Continuous maps ``P(L1) -> P(L2)`` and ``P(L2) -> P(L2)`` are enumerated;
    pairs are checked exhaustively within ``pair_budget``, otherwise a seeded
    random sample is used and its size reported.
    """
    L1.guard(cap, "check_Fsharp_quantaloidal")
    L2.guard(cap, "check_Fsharp_quantaloidal")
    rng = random.Random(seed)
    k1, k2 = L1.n - 1, L2.n - 1
    r = Report()

    def continuous(src, dst):
        rows = all_union_maps(src, dst)
        wit, ind = continuity_scan(src, dst, rows)
        keep = wit < 0
        return rows[keep], ind[keep]

    G, FG = continuous(L1, L2)
    H, FH = continuous(L2, L2)

    r.add("empty-map", FG.size == 0 or bool((FG[np.all(G == 0, axis=1)] == L2.bottom).all()))

    pairs, cov = _pairs(len(G), len(G), pair_budget, rng)
    i, j = (np.array(p, dtype=np.int64) for p in zip(*pairs)) if pairs else (np.zeros(0, int),) * 2
    U = G[i] | G[j]
    wit, FU = continuity_scan(L1, L2, U)
    join = L2.join
    ok_cont = wit < 0
    ok_sup = (FU == join[FG[i], FG[j]]).all(axis=1)
    bad = np.flatnonzero(~(ok_cont & ok_sup))
    r.add(
        "suprema",
        bad.size == 0,
        [(int(i[bad[0]]), int(j[bad[0]]))] if bad.size else (),
        note=f"pairs={cov}",
    )

    pairs, cov = _pairs(len(G), len(H), pair_budget, rng)
    i, j = (np.array(p, dtype=np.int64) for p in zip(*pairs)) if pairs else (np.zeros(0, int),) * 2
    C = _compose_masks(G[i], H[j], k2) if k1 else G[i]
    wit, FC = continuity_scan(L1, L2, C)
    expect = FH[j[:, None], FG[i]] if len(i) else FC
    bad = np.flatnonzero(~((wit < 0) & (FC == expect).all(axis=1)))
    r.add(
        "composition",
        bad.size == 0,
        [(int(i[bad[0]]), int(j[bad[0]]))] if bad.size else (),
        note=f"pairs={cov}",
    )

    misses = []
    for f in enumerate_hom(L1, L2, "join", cap=cap):
        g = lift_map(f)
        if not is_continuous(g) or induced_map(g) != f:
            misses.append(f.image)
    r.add("full", not misses, misses[:1])
    return r


@dataclass(frozen=True)
class ConjunctionWitness:
    a: int
    b: int
    intersection: frozenset
    resolved: int
    conjunction: int

    def lines(self, L):
        return [
            f"pair {L.label(self.a)} < {L.label(self.b)}",
            f"{{{L.label(self.a)}}} ∩ {{{L.label(self.b)}}} = {L.fmt(self.intersection)}",
            f"resolve(intersection) = {L.label(self.resolved)}",
            f"conjunction {L.label(self.a)} ∧ {L.label(self.b)} = {L.label(self.conjunction)}",
        ]


def conjunction_failure_witness(L):
    """The least pair ``0 ≠ a < b``: singletons ``{a}``, ``{b}`` are disjoint,
    so their meet in ``P(L)`` resolves to ``0`` while ``a ∧ b = a``."""
    for a in L.elements:
        if a == L.bottom:
            continue
        for b in L.elements:
            if L.lt(a, b):
                inter = frozenset({a}) & frozenset({b})
                return ConjunctionWitness(a, b, inter, L.join_set(inter), L.glb(a, b))
    raise NoComparablePair(f"{L!r} has no pair 0 < a < b")
