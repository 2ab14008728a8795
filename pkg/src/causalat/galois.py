"""Causal relations, the propagation/causation adjoint pair they induce, and
the hom-lattices of join- and meet-preserving maps.

A causal relation ``a1 ~> a2`` reads "actuality of ``a1`` guarantees
actuality of ``a2``".  Its propagation ``f*`` sends ``a1`` to the strongest
guaranteed property and its causation ``f_*`` sends ``a2`` to its weakest
cause; on a valid relation the two form a Galois adjunction
``f*(a) <= b  <=>  a <= f_*(b)``.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import KernelNonEmpty, KindViolation, LatticeError, ShapeMismatch, TooLarge
from .lattice import DEFAULT_CAP, FiniteLattice, adjoin_top
from .report import Report, Verdict

#: enumerate_hom refuses when the a-priori bound on the number of maps exceeds this
MAX_MAPS = 1_000_000


# maps -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MapTable:
    """A map between finite lattices given by its image of every element.

    ``kind`` is a verified flag: ``"join"`` (preserves all joins), ``"meet"``
    (preserves all meets), ``"monotone"`` or ``None``.  Use
    :meth:`checked` to obtain a table whose flag has been established.
    """

    src: FiniteLattice
    dst: FiniteLattice
    image: tuple
    kind: str = None

    def __post_init__(self):
        img = tuple(int(y) for y in self.image)
        if len(img) != self.src.n:
            raise ShapeMismatch(f"map has {len(img)} images for {self.src.n} elements")
        for y in img:
            self.dst.check(y)
        object.__setattr__(self, "image", img)

    @classmethod
    def from_labels(cls, src, dst, assignment, kind=None):
        img = [None] * src.n
        for a, b in assignment.items():
            img[src.index(a)] = dst.index(b)
        if None in img:
            missing = src.labels[img.index(None)]
            raise ShapeMismatch(f"no image given for {missing}", witness=missing)
        return cls(src, dst, tuple(img), kind)

    @classmethod
    def identity(cls, L):
        return cls(L, L, tuple(range(L.n)), "join")

    @classmethod
    def constant(cls, src, dst, value):
        return cls(src, dst, (value,) * src.n)

    def checked(self, kind):
        """This map flagged as ``kind``; raises :class:`KindViolation` with a
        witness subset when the property fails."""
        verdict = _KIND_CHECKS[kind](self)
        if not verdict:
            raise KindViolation(
                f"map is not {kind}-preserving on {self.src.fmt(verdict.witness)}",
                witness=verdict.witness,
            )
        return MapTable(self.src, self.dst, self.image, kind)

    def flagged(self, *kinds):
        """Flag with the first of ``kinds`` that holds (or ``None``)."""
        for kind in kinds:
            if _KIND_CHECKS[kind](self):
                return MapTable(self.src, self.dst, self.image, kind)
        return MapTable(self.src, self.dst, self.image, None)

    def __call__(self, x):
        return self.image[x]

    def __eq__(self, other):
        if not isinstance(other, MapTable):
            return NotImplemented
        return self.image == other.image and self.src == other.src and self.dst == other.dst

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        body = ", ".join(f"{self.src.label(a)}->{self.dst.label(b)}" for a, b in enumerate(self.image))
        return f"MapTable[{body}]"

    @property
    def array(self):
        return np.array(self.image, dtype=np.int32)

    def after(self, other):
        """Composite ``self ∘ other`` (apply ``other`` first)."""
        if other.dst != self.src:
            raise ShapeMismatch("maps are not composable")
        return MapTable(other.src, self.dst, tuple(self.image[y] for y in other.image))

    def le(self, other):
        return all(self.dst.le(a, b) for a, b in zip(self.image, other.image))

    def lines(self, name="f"):
        return [f"{name}: {self.src.label(a)} -> {self.dst.label(b)}" for a, b in enumerate(self.image)]


def monotone_verdict(f):
    for a in f.src.elements:
        for b in f.src.elements:
            if f.src.le(a, b) and not f.dst.le(f(a), f(b)):
                return Verdict(False, frozenset((a, b)))
    return Verdict(True)


def join_verdict(f):
    """Finite check of join preservation: bottom plus all binary joins."""
    S, T = f.src, f.dst
    if f(S.bottom) != T.bottom:
        return Verdict(False, frozenset())
    for a in range(S.n):
        for b in range(a + 1, S.n):
            if f(S.lub(a, b)) != T.lub(f(a), f(b)):
                return Verdict(False, frozenset((a, b)))
    return Verdict(True)


def meet_verdict(f):
    S, T = f.src, f.dst
    if f(S.top) != T.top:
        return Verdict(False, frozenset())
    for a in range(S.n):
        for b in range(a + 1, S.n):
            if f(S.glb(a, b)) != T.glb(f(a), f(b)):
                return Verdict(False, frozenset((a, b)))
    return Verdict(True)


_KIND_CHECKS = {"monotone": monotone_verdict, "join": join_verdict, "meet": meet_verdict}


def _mask_members(mask):
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def all_joins_verdict(f):
    """Exhaustive check that ``f`` preserves the join of every subset."""
    mask = kernels.active.subset_hom_witness(f.array, f.src.join, f.src.bottom, f.dst.join, f.dst.bottom)
    return Verdict(mask < 0, None if mask < 0 else _mask_members(mask))


def all_meets_verdict(f):
    mask = kernels.active.subset_hom_witness(f.array, f.src.meet, f.src.top, f.dst.meet, f.dst.top)
    return Verdict(mask < 0, None if mask < 0 else _mask_members(mask))


@dataclass(frozen=True)
class AdjointPair:
    """``lower ⊣ upper``: the propagation and the causation."""

    lower: MapTable
    upper: MapTable

    @classmethod
    def identity(cls, L):
        ident = MapTable.identity(L)
        return cls(ident, MapTable(L, L, ident.image, "meet"))

    def verify(self):
        return is_adjoint_pair(self.lower, self.upper)


# causal relations -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CausalRelation:
    src: FiniteLattice
    dst: FiniteLattice
    rel: np.ndarray
    name: str = None

    def __post_init__(self):
        rel = np.array(self.rel, dtype=bool)
        if rel.shape != (self.src.n, self.dst.n):
            raise ShapeMismatch(
                f"relation table has shape {rel.shape}, expected {(self.src.n, self.dst.n)}"
            )
        rel.setflags(write=False)
        object.__setattr__(self, "rel", rel)

    @classmethod
    def from_pairs(cls, src, dst, pairs, name=None):
        rel = np.zeros((src.n, dst.n), dtype=bool)
        for a, b in pairs:
            a = src.index(a) if isinstance(a, str) else src.check(a)
            b = dst.index(b) if isinstance(b, str) else dst.check(b)
            rel[a, b] = True
        return cls(src, dst, rel, name)

    def __eq__(self, other):
        if not isinstance(other, CausalRelation):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and np.array_equal(self.rel, other.rel)

    def __hash__(self):
        return hash(self.rel.tobytes())

    def holds(self, a1, a2):
        return bool(self.rel[a1, a2])

    def pairs(self):
        return [(int(a), int(b)) for a, b in np.argwhere(self.rel)]

    def effects(self, a1):
        return [int(b) for b in np.flatnonzero(self.rel[a1])]

    def causes(self, a2):
        return [int(a) for a in np.flatnonzero(self.rel[:, a2])]


def separation_relation(L1, L2, name="separation"):
    """``a1 ~> a2`` iff ``a1 = 0`` or ``a2 = 1``."""
    rel = np.zeros((L1.n, L2.n), dtype=bool)
    rel[L1.bottom, :] = True
    rel[:, L2.top] = True
    return CausalRelation(L1, L2, rel, name)


def order_relation(L, name="order"):
    """``a ~> b`` iff ``a <= b``; its adjoint pair is the identity."""
    return CausalRelation(L, L, L.leq.astype(bool), name)


def empty_relation(L1, L2, name="empty"):
    return CausalRelation(L1, L2, np.zeros((L1.n, L2.n), dtype=bool), name)


def validate_relation(R):
    """Check the three causal-relation axioms; every violation is listed.

    * down-up closure: ``b1 <= a1 ~> a2 <= b2`` gives ``b1 ~> b2``; one entry
      per missing pair ``(b1, b2)`` with a supporting ``(a1, a2)``.
    * meet closure: the effects of each ``a1`` are closed under binary meets
      (nonempty finite meets follow).
    * weakest cause: ``a1 <= f_*(a2)`` gives ``a1 ~> a2`` for every pair,
      where ``f_*(a2)`` is the join of the causes of ``a2``.
    """
    L1, L2 = R.src, R.dst
    if R.rel.shape != (L1.n, L2.n):
        raise ShapeMismatch("relation table does not match its lattices")
    rel = R.rel
    le1 = L1.leq.astype(np.int64)
    le2 = L2.leq.astype(np.int64)
    report = Report()

    closure = (le1 @ rel.astype(np.int64) @ le2) > 0
    missing = []
    for b1, b2 in np.argwhere(closure & ~rel):
        b1, b2 = int(b1), int(b2)
        a1, a2 = next(
            (int(a1), int(a2))
            for a1, a2 in np.argwhere(rel)
            if L1.le(b1, a1) and L2.le(a2, b2)
        )
        missing.append((b1, a1, a2, b2))
    report.add(
        "down-up-closure",
        not missing,
        missing,
        shown=_show_missing(L1, L2, missing),
    )

    unmet = []
    for a1 in L1.elements:
        effects = R.effects(a1)
        for i, a2 in enumerate(effects):
            for b2 in effects[i + 1 :]:
                if not rel[a1, L2.glb(a2, b2)]:
                    unmet.append((a1, a2, b2))
    report.add(
        "meet-closure",
        not unmet,
        unmet,
        shown=""
        if not unmet
        else "({0},{1},{2}) {0}~>{1} and {0}~>{2} but not {0}~>{3}".format(
            L1.label(unmet[0][0]), L2.label(unmet[0][1]), L2.label(unmet[0][2]),
            L2.label(L2.glb(unmet[0][1], unmet[0][2])),
        ),
    )

    weak = []
    for a2 in L2.elements:
        cause = L1.join_set(R.causes(a2))
        for a1 in L1.elements:
            if L1.le(a1, cause) and not rel[a1, a2]:
                weak.append((a1, a2))
    report.add(
        "weakest-cause",
        not weak,
        weak,
        shown=""
        if not weak
        else "({0},{1}) {0}<=f_*({1})={2} but not {0}~>{1}".format(
            L1.label(weak[0][0]), L2.label(weak[0][1]), L1.label(L1.join_set(R.causes(weak[0][1]))),
        ),
    )
    return report


def _show_missing(L1, L2, missing):
    if not missing:
        return ""
    b1, a1, a2, b2 = missing[0]
    return f"({L1.label(b1)},{L2.label(b2)}) from {L1.label(b1)}<={L1.label(a1)}~>{L2.label(a2)}<={L2.label(b2)}"


def close_relation(src, dst, seeds=(), name=None):
    """Smallest valid causal relation containing ``seeds``."""
    rel = CausalRelation.from_pairs(src, dst, seeds).rel.copy()
    le1 = src.leq.astype(np.int64)
    le2 = dst.leq.astype(np.int64)
    le1b = src.leq.astype(bool)
    while True:
        before = rel.copy()
        rel = (le1 @ rel.astype(np.int64) @ le2) > 0
        for a1 in src.elements:
            effects = np.flatnonzero(rel[a1])
            if effects.size:
                rel[a1, dst.meet_set(int(b) for b in effects)] = True
        for a2 in dst.elements:
            cause = src.join_set(int(a) for a in np.flatnonzero(rel[:, a2]))
            rel[:, a2] |= le1b[:, cause]
        if np.array_equal(rel, before):
            return CausalRelation(src, dst, rel, name)


def kernel_K(R):
    """Elements of the source that guarantee nothing at all."""
    return frozenset(a for a in R.src.elements if not R.rel[a].any())


def derive_propagation(R):
    """``f*(a1) = meet{a2 | a1 ~> a2}``; needs an empty kernel."""
    K = kernel_K(R)
    if K:
        raise KernelNonEmpty(
            f"propagation is undefined on {R.src.fmt(K)}; use totalize() to adjoin a new top",
            witness=K,
        )
    img = tuple(R.dst.meet_set(R.effects(a)) for a in R.src.elements)
    return MapTable(R.src, R.dst, img).flagged("join", "monotone")


def derive_causation(R):
    """``f_*(a2) = join{a1 | a1 ~> a2}``."""
    img = tuple(R.src.join_set(R.causes(b)) for b in R.dst.elements)
    return MapTable(R.dst, R.src, img).flagged("meet", "monotone")


def derive_pair(R):
    return AdjointPair(derive_propagation(R), derive_causation(R))


def totalize(R):
    """Extend both lattices by a fresh top so that the propagation becomes total.

    The new top is an effect of everything, so elements of the kernel (and the
    new top itself) propagate to it; old elements keep their causes.
    """
    S, T = adjoin_top(R.src), adjoin_top(R.dst)
    rel = np.zeros((S.n, T.n), dtype=bool)
    rel[: R.src.n, : R.dst.n] = R.rel
    rel[:, T.top] = True
    ext = CausalRelation(S, T, rel, R.name and R.name + "+")
    return ext, derive_pair(ext)


def is_adjoint_pair(f, g):
    """``f(a) <= b  <=>  a <= g(b)`` for all ``a, b``; witness ``(a, b)``."""
    if f.src != g.dst or f.dst != g.src:
        raise ShapeMismatch("maps do not run in opposite directions between the same lattices")
    a, b = kernels.active.adjunction_witness(f.src.leq, f.dst.leq, f.array, g.array)
    if a < 0:
        return Verdict(True)
    return Verdict(False, (a, b))


def right_adjoint_of(f):
    """``g(b) = join{a | f(a) <= b}`` for a join-preserving ``f``."""
    f = f.checked("join")
    S, T = f.src, f.dst
    img = tuple(S.join_set(a for a in S.elements if T.le(f(a), b)) for b in T.elements)
    return MapTable(T, S, img, "meet")


def left_adjoint_of(g):
    """``f(a) = meet{b | a <= g(b)}`` for a meet-preserving ``g``."""
    g = g.checked("meet")
    T, S = g.src, g.dst
    img = tuple(T.meet_set(b for b in T.elements if S.le(a, g(b))) for a in S.elements)
    return MapTable(S, T, img, "join")


def relation_of_pair(p, name=None):
    """``a1 ~> a2  :<=>  f*(a1) <= a2``."""
    f = p.lower
    rel = f.dst.leq.astype(bool)[list(f.image), :]
    return CausalRelation(f.src, f.dst, rel, name)


def compose_pairs(p12, p23):
    """Chain two adjunctions: propagations compose forwards, causations
    backwards."""
    if p12.lower.dst != p23.lower.src:
        raise ShapeMismatch("middle lattices differ")
    lower = p23.lower.after(p12.lower).flagged("join", "monotone")
    upper = p12.upper.after(p23.upper).flagged("meet", "monotone")
    return AdjointPair(lower, upper)


# hom-lattices -----------------------------------------------------------------


def _irreducible_count(L, kind):
    # join-irreducibles have exactly one lower cover
    covers = L.covers()
    side = 1 if kind == "join" else 0
    counts = [0] * L.n
    for pair in covers:
        counts[pair[side]] += 1
    return sum(1 for c in counts if c == 1)


class HomLattice:
    """All join- (or meet-) preserving maps ``src -> dst``.

    ``le`` is the pointwise order.  Suprema follow the quantaloid convention:
    pointwise joins for join-maps, pointwise meets for meet-maps (the coop
    order), so both kinds of hom form complete lattices under ``sup``.
    Maps are listed in lexicographic order of their image tuples.
    """

    def __init__(self, src, dst, kind, images):
        if kind not in ("join", "meet"):
            raise LatticeError(f"unknown hom kind {kind!r}")
        self.src = src
        self.dst = dst
        self.kind = kind
        images = sorted({tuple(int(y) for y in img) for img in images})
        self.maps = tuple(MapTable(src, dst, img, kind) for img in images)
        self._index = {img: i for i, img in enumerate(images)}
        self.images = np.array(images, dtype=np.int32).reshape(len(images), src.n)
        m = len(images)
        le = dst.leq.astype(bool)
        self.order = np.array(
            [[bool(le[self.images[i], self.images[j]].all()) for j in range(m)] for i in range(m)],
            dtype=bool,
        ).reshape(m, m)

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, i):
        return self.maps[i]

    def __repr__(self):
        return f"<HomLattice {self.kind} {self.src.name}->{self.dst.name} ({len(self)} maps)>"

    def find(self, f):
        img = f.image if isinstance(f, MapTable) else tuple(int(y) for y in f)
        return self._index.get(img)

    def index_of(self, f):
        i = self.find(f)
        if i is None:
            raise KeyError(f)
        return i

    def le(self, i, j):
        return bool(self.order[i, j])

    def sup_image(self, indices):
        op = self.dst.lub if self.kind == "join" else self.dst.glb
        unit = self.dst.bottom if self.kind == "join" else self.dst.top
        out = [unit] * self.src.n
        for i in indices:
            out = [op(u, v) for u, v in zip(out, self.maps[i].image)]
        return tuple(out)

    def sup(self, indices):
        """Index of the supremum of ``indices``, or ``None`` if missing."""
        return self.find(self.sup_image(indices))

    def _extreme(self, want_top):
        for i in range(len(self)):
            if all(self.order[j, i] if want_top else self.order[i, j] for j in range(len(self))):
                return i
        return None

    @property
    def bottom(self):
        """Pointwise least map."""
        return self._extreme(False)

    @property
    def top(self):
        """Pointwise greatest map."""
        return self._extreme(True)

    def completeness(self):
        """Closed under the empty supremum and all binary suprema?  For a
        finite family this is closure under every supremum."""
        if self.sup(()) is None:
            return Verdict(False, ())
        for i in range(len(self)):
            for j in range(i + 1, len(self)):
                if self.sup((i, j)) is None:
                    return Verdict(False, (i, j))
        return Verdict(True)

    def sup_table(self):
        m = len(self)
        tab = np.empty((m, m), dtype=np.int32)
        for i in range(m):
            for j in range(m):
                k = self.sup((i, j))
                if k is None:
                    raise LatticeError(f"hom is not closed under suprema at {(i, j)}", witness=(i, j))
                tab[i, j] = k
        return tab

    def label(self, i):
        return "[" + ",".join(self.dst.label(y) for y in self.maps[i].image) + "]"

    def as_lattice(self, name=None):
        """The hom as a :class:`FiniteLattice` whose joins are the hom
        suprema, with the element index of every map."""
        order = self.order if self.kind == "join" else self.order.T
        L = FiniteLattice([self.label(i) for i in range(len(self))], order, name=name)
        return L, tuple(L.index(self.label(i)) for i in range(len(self)))


def enumerate_hom(L1, L2, kind="join", cap=DEFAULT_CAP, max_maps=MAX_MAPS):
    """Every ``kind``-preserving map ``L1 -> L2``."""
    L1.guard(cap, "enumerate_hom")
    L2.guard(cap, "enumerate_hom")
    bound = L2.n ** _irreducible_count(L1, kind)
    if bound > max_maps:
        raise TooLarge(f"up to {bound} maps {L1.name}->{L2.name}; limit is {max_maps}")
    if kind == "join":
        rows = kernels.active.enumerate_join_maps(L1.join, L2.join, L1.bottom, L2.bottom)
    elif kind == "meet":
        rows = kernels.active.enumerate_join_maps(
            L1.meet, L2.meet, L1.top, L2.top, order=range(L1.n - 1, -1, -1)
        )
    else:
        raise LatticeError(f"unknown hom kind {kind!r}")
    return HomLattice(L1, L2, kind, [tuple(r) for r in rows.tolist()])


@dataclass(frozen=True)
class DualityResult:
    source: HomLattice
    target: HomLattice
    mapping: tuple
    report: Report


def duality(h):
    """``f -> f_*`` from join-maps ``L1 -> L2`` onto meet-maps ``L2 -> L1``.

    The target hom is enumerated independently, and the report checks that
    the assignment is a bijection onto it, reverses the pointwise order in
    both directions, is undone by taking left adjoints, and swaps extremes.
    """
    if h.kind != "join":
        raise LatticeError("duality starts from a hom of join-preserving maps")
    target = enumerate_hom(h.dst, h.src, "meet", cap=None, max_maps=float("inf"))
    uppers = [right_adjoint_of(f) for f in h]
    mapping = tuple(target.find(g) for g in uppers)
    report = Report()
    report.add(
        "bijection",
        None not in mapping and len(set(mapping)) == len(target) == len(h),
        shown=f"|source|={len(h)} |target|={len(target)}",
    )
    bad = [
        (i, j)
        for i in range(len(h))
        for j in range(len(h))
        if h.le(i, j) != uppers[j].le(uppers[i])
    ]
    report.add("order-reversing", not bad, bad, shown=f"{h.label(bad[0][0])},{h.label(bad[0][1])}" if bad else "")
    back = [i for i, g in enumerate(uppers) if left_adjoint_of(g) != h[i]]
    report.add("involution", not back, back, shown=h.label(back[0]) if back else "")
    ok = (
        h.bottom is not None
        and h.top is not None
        and mapping[h.bottom] == target.top
        and mapping[h.top] == target.bottom
    )
    report.add("extremes", ok)
    return DualityResult(h, target, mapping, report)
