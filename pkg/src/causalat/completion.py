"""Distributive joins, frame recognition and the distributive-ideal
completion of a finite lattice."""

from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .galois import MapTable, all_meets_verdict
from .lattice import FiniteLattice
from .report import Report, Verdict

#: frame_completion enumerates down-sets of lattices up to this size
COMPLETION_CAP = 12


def is_distributive_join(L, A):
    """``x ∧ ⋁A = ⋁(x ∧ A)`` for every ``x``; the witness is the least
    failing ``x``."""
    A = L.subset(A)
    top = L.join_set(A)
    for x in L.elements:
        if L.glb(x, top) != L.join_set(L.glb(x, a) for a in A):
            return Verdict(False, x)
    return Verdict(True)


def is_frame(L):
    """Binary distributivity over all triples, witness ``(x, y, z)`` with
    ``x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)``.  For a finite lattice this is the
    same as every join being distributive."""
    for y in L.elements:
        for z in range(y + 1, L.n):
            yz = L.lub(y, z)
            for x in L.elements:
                if L.glb(x, yz) != L.lub(L.glb(x, y), L.glb(x, z)):
                    return Verdict(False, (x, y, z))
    return Verdict(True)


@lru_cache(maxsize=64)
def _distributive_table(L):
    return kernels.active.distributive_subsets(L.meet, L.join, L.bottom)


def is_frame_exhaustive(L, cap=COMPLETION_CAP):
    """Every subset has a distributive join; witness the least failing subset."""
    L.guard(cap, "is_frame_exhaustive")
    _, flags = _distributive_table(L)
    for mask, ok in enumerate(flags.tolist()):
        if not ok:
            return Verdict(False, frozenset(i for i in L.elements if mask >> i & 1))
    return Verdict(True)


@dataclass(frozen=True)
class Completion:
    """``ideals[c]`` lists the members of ``L`` in completion element ``c``."""

    lattice: FiniteLattice
    embedding: MapTable
    ideals: tuple

    def __iter__(self):
        return iter((self.lattice, self.embedding))


def distributive_ideals(L, cap=COMPLETION_CAP):
    """All down-sets (as bitmasks) closed under distributive joins, in
    increasing mask order.

    A down-set ``I`` fails to be closed exactly when some ``y ∉ I`` is the
    distributive join of ``I ∩ ↓y``: any subset of ``I`` with distributive
    join ``y`` lies inside ``I ∩ ↓y``, and a larger subset of ``↓y`` with the
    same join stays distributive.
    """
    L.guard(cap, "frame_completion")
    joins, flags = _distributive_table(L)
    joins, flags = joins.tolist(), flags.tolist()
    down = [L.down_mask(x) for x in L.elements]
    out = []
    for mask in range(1, 1 << L.n, 2):  # bottom is element 0
        if any(mask >> x & 1 and down[x] & ~mask for x in L.elements):
            continue
        closed = True
        for y in L.elements:
            if not mask >> y & 1:
                A = mask & down[y]
                if joins[A] == y and flags[A]:
                    closed = False
                    break
        if closed:
            out.append(mask)
    return out


def frame_completion(L, cap=COMPLETION_CAP, name=None):
    """Distributive ideals ordered by inclusion, with ``x ↦ ↓x``.

    Returns a :class:`Completion`, which unpacks as ``(lattice, embedding)``.
    """
    ideals = distributive_ideals(L, cap)
    labels = [L.fmt(i for i in L.elements if m >> i & 1) for m in ideals]
    leq = [[int(a & ~b == 0) for b in ideals] for a in ideals]
    C = FiniteLattice(labels, leq, name=name or f"{L.name}^D")
    where = {m: C.index(lab) for m, lab in zip(ideals, labels)}
    image = tuple(where[L.down_mask(x)] for x in L.elements)
    members = [None] * C.n
    for m, c in where.items():
        members[c] = frozenset(i for i in L.elements if m >> i & 1)
    return Completion(C, MapTable(L, C, image), tuple(members))


def _strict_note(L, any_nondistributive, example):
    if not any_nondistributive:
        return "vacuous"
    return f"example={L.fmt(example)}" if example else ""


def check_completion_universal_traits(L, cap=COMPLETION_CAP, completion=None):
    C, e = completion or frame_completion(L, cap)
    r = Report()
    v = is_frame(C)
    r.add("target-frame", v.holds, [v.witness] if not v else (), shown="" if v else C.fmt(v.witness))

    seen = {}
    clash = None
    for x in L.elements:
        if e(x) in seen:
            clash = (seen[e(x)], x)
            break
        seen[e(x)] = x
    r.add("embedding-injective", clash is None, [clash] if clash else (), shown=L.fmt(clash or ()))

    v = all_meets_verdict(e)
    r.add("embedding-meets", v.holds, [v.witness] if not v else (), shown="" if v else L.fmt(v.witness))

    bad = [(x, y) for x in L.elements for y in L.elements if C.le(e(x), e(y)) != L.le(x, y)]
    r.add("order-reflecting", not bad, bad[:1], shown=L.fmt(bad[0]) if bad else "")

    joins, flags = _distributive_table(L)
    lost, strict = None, None
    img_join = [C.bottom] * (1 << L.n)
    for mask in range(1, 1 << L.n):
        low = (mask & -mask).bit_length() - 1
        img_join[mask] = C.lub(img_join[mask & (mask - 1)], e(low))
        preserved = img_join[mask] == e(int(joins[mask]))
        if flags[mask]:
            if not preserved and lost is None:
                lost = mask
        elif not preserved and strict is None:
            strict = mask

    def members(mask):
        return frozenset(i for i in L.elements if mask >> i & 1)

    r.add(
        "distributive-joins",
        lost is None,
        [members(lost)] if lost is not None else (),
        shown="" if lost is None else L.fmt(members(lost)),
    )
    any_nondistributive = not all(flags.tolist())
    r.add(
        "nondistributive-join-strict",
        strict is not None or not any_nondistributive,
        [members(strict)] if strict is not None else [],
        note=_strict_note(L, any_nondistributive, strict and members(strict)),
    )
    return r
