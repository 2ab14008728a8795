"""Quantales, quantaloids of join-maps, and induction quantales acting on a
property lattice.

An :class:`InductionSystem` is a finite unital quantale ``E`` (sequencing
``&``, free choice ``⋁``, unit "freeze") with an action ``e·a`` on a lattice
``L``.  Each induction yields a meet-preserving ``e_*: a ↦ e·a`` and its left
adjoint ``e^*``; the checks here confirm that ``e ↦ e_*`` turns suprema into
pointwise meets and that ``e ↦ e^*`` reverses sequencing.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ActionInvalid, ShapeMismatch
from .galois import HomLattice, MapTable, enumerate_hom, is_adjoint_pair, join_verdict, meet_verdict
from .lattice import DEFAULT_CAP, FiniteLattice
from .report import Report

#: distributivity/preservation laws are checked over every subset up to this size
SUBSET_CAP = 16

__all__ = [
    "HomLattice",
    "InductionSystem",
    "Quantale",
    "Representation",
    "check_causal_duality",
    "check_quantale",
    "check_quantaloid",
    "check_representation",
    "endo_quantale",
    "generated_induction_system",
    "represent_star",
    "validate_action",
]


def _members(mask):
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _preservation_witness(f, op_src, unit_src, op_dst, unit_dst, subset_cap):
    """First family ``F`` (tuple of indices) with ``f(⋁F) != ⋁f(F)``.

    Exhaustive over all subsets when the domain is within ``subset_cap``,
    otherwise the empty family plus all pairs (equivalent for finite
    lattices).  Returns ``None`` when preserved.
    """
    f = np.asarray(f)
    n = len(f)
    if n <= subset_cap:
        mask = kernels.active.subset_hom_witness(f, op_src, unit_src, op_dst, unit_dst)
        return None if mask < 0 else _members(mask)
    if f[unit_src] != unit_dst:
        return ()
    for a in range(n):
        for b in range(a + 1, n):
            if f[op_src[a, b]] != op_dst[f[a], f[b]]:
                return (a, b)
    return None


def _mode(n, subset_cap):
    return "mode=exhaustive" if n <= subset_cap else "mode=binary"


@dataclass(frozen=True, eq=False)
class Quantale:
    """A complete lattice with a multiplication table and a unit.

    ``maps`` is filled for quantales of maps (carrier element -> MapTable).
    """

    carrier: FiniteLattice
    mult: np.ndarray
    unit: int
    name: str = None
    maps: tuple = field(default=None, repr=False)

    def __post_init__(self):
        mult = np.ascontiguousarray(self.mult, dtype=np.int32)
        n = self.carrier.n
        if mult.shape != (n, n):
            raise ShapeMismatch(f"multiplication table has shape {mult.shape}, expected {(n, n)}")
        mult.setflags(write=False)
        object.__setattr__(self, "mult", mult)
        self.carrier.check(self.unit)

    def __len__(self):
        return self.carrier.n

    def times(self, e, f):
        return int(self.mult[e, f])


def check_quantale(Q, subset_cap=SUBSET_CAP):
    E = Q.carrier
    m = Q.mult
    n = E.n
    r = Report()
    idx = np.arange(n)
    lhs = m[m[:, :, None], idx]
    rhs = m[idx[:, None, None], m[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    r.add(
        "associativity",
        bad.size == 0,
        [tuple(map(int, bad[0]))] if bad.size else (),
        shown="" if bad.size == 0 else "({},{},{})".format(*(E.label(int(i)) for i in bad[0])),
    )
    unit_bad = [e for e in range(n) if m[Q.unit, e] != e or m[e, Q.unit] != e]
    r.add("unit", not unit_bad, unit_bad, shown=E.label(unit_bad[0]) if unit_bad else "")
    for side in ("left", "right"):
        hit = None
        for e in range(n):
            row = m[e, :] if side == "left" else m[:, e]
            w = _preservation_witness(row, E.join, E.bottom, E.join, E.bottom, subset_cap)
            if w is not None:
                hit = (e, w)
                break
        r.add(
            f"{side}-distributivity",
            hit is None,
            [hit] if hit else (),
            shown="" if hit is None else f"e={E.label(hit[0])} F={E.fmt(hit[1])}",
            note=_mode(n, subset_cap),
        )
    return r


def endo_quantale(L, cap=DEFAULT_CAP):
    """Join-endomaps of ``L`` under composition, ``f & g = f ∘ g``."""
    hom = enumerate_hom(L, L, "join", cap=cap)
    carrier, where = hom.as_lattice(name=f"JCLat({L.name})")
    n = len(hom)
    mult = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            mult[where[i], where[j]] = where[hom.index_of(hom[i].after(hom[j]))]
    unit = where[hom.index_of(MapTable.identity(L))]
    maps = [None] * n
    for i in range(n):
        maps[where[i]] = hom[i]
    return Quantale(carrier, mult, unit, name=carrier.name, maps=tuple(maps))


# induction systems ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InductionSystem:
    quantale: Quantale
    lattice: FiniteLattice
    action: np.ndarray
    name: str = None

    def __post_init__(self):
        action = np.ascontiguousarray(self.action, dtype=np.int32)
        shape = (self.quantale.carrier.n, self.lattice.n)
        if action.shape != shape:
            raise ShapeMismatch(f"action table has shape {action.shape}, expected {shape}")
        action.setflags(write=False)
        object.__setattr__(self, "action", action)

    def act(self, e, a):
        return int(self.action[e, a])


def generated_induction_system(L, maps, name=None):
    """Induction system generated by meet-preserving endomaps of ``L``.

    The inductions are the closure of ``maps`` under composition and
    pointwise meets (choice), together with the identity (freeze) and the
    constant-top map (the empty choice).  The carrier is ordered by reverse
    pointwise order, so its joins are pointwise meets; ``e & f`` is
    ``e ∘ f`` and ``e·a = e(a)``.
    """
    images = {tuple(range(L.n)), (L.top,) * L.n}
    for f in maps:
        images.add(tuple(f.checked("meet").image))
    frontier = list(images)
    while frontier:
        fresh = []
        current = list(images)
        for u in frontier:
            for v in current:
                for img in (
                    tuple(u[y] for y in v),
                    tuple(v[y] for y in u),
                    tuple(L.glb(a, b) for a, b in zip(u, v)),
                ):
                    if img not in images:
                        images.add(img)
                        fresh.append(img)
        frontier = fresh
    images = sorted(images)
    le = L.leq.astype(bool)
    m = len(images)
    order = np.array([[le[list(v), list(u)].all() for v in images] for u in images], dtype=bool)
    labels = ["[" + ",".join(L.label(y) for y in img) + "]" for img in images]
    E = FiniteLattice(labels, order.reshape(m, m), name=name and name + "-E")
    pos = {img: E.index(lab) for img, lab in zip(images, labels)}
    ordered = [None] * m
    for img in images:
        ordered[pos[img]] = img
    mult = np.array(
        [[pos[tuple(ordered[i][y] for y in ordered[j])] for j in range(m)] for i in range(m)],
        dtype=np.int32,
    )
    Q = Quantale(
        E,
        mult,
        pos[tuple(range(L.n))],
        name=E.name,
        maps=tuple(MapTable(L, L, img, "meet") for img in ordered),
    )
    return InductionSystem(Q, L, np.array(ordered, dtype=np.int32), name=name)


def validate_action(S, subset_cap=SUBSET_CAP):
    """Module axioms of the action, each with a witness on failure."""
    Q, L, act = S.quantale, S.lattice, S.action
    E = Q.carrier
    r = Report()
    bad = [a for a in L.elements if act[Q.unit, a] != a]
    r.add("unit-action", not bad, bad, shown=L.label(bad[0]) if bad else "")

    hit = None
    for e in E.elements:
        w = _preservation_witness(act[e], L.meet, L.top, L.meet, L.top, subset_cap)
        if w is not None:
            hit = (e, w)
            break
    r.add(
        "meet-preservation",
        hit is None,
        [hit] if hit else (),
        shown="" if hit is None else f"e={E.label(hit[0])} A={L.fmt(hit[1])}",
        note=_mode(L.n, subset_cap),
    )

    hit = None
    for a in L.elements:
        w = _preservation_witness(act[:, a], E.join, E.bottom, L.meet, L.top, subset_cap)
        if w is not None:
            hit = (a, w)
            break
    r.add(
        "join-to-meet",
        hit is None,
        [hit] if hit else (),
        shown="" if hit is None else f"a={L.label(hit[0])} F={E.fmt(hit[1])}",
        note=_mode(E.n, subset_cap),
    )

    # e1·(e2·a) against (e1 & e2)·a
    lhs = act[:, act]
    rhs = act[Q.mult]
    bad = np.argwhere(lhs != rhs)
    r.add(
        "compatibility",
        bad.size == 0,
        [tuple(map(int, bad[0]))] if bad.size else (),
        shown=""
        if bad.size == 0
        else f"({E.label(int(bad[0][0]))},{E.label(int(bad[0][1]))},{L.label(int(bad[0][2]))})",
    )
    return r


@dataclass(frozen=True)
class Representation:
    """Per induction: ``upper[e] = e_*`` (causation) and ``lower[e] = e^*``
    (propagation)."""

    upper: tuple
    lower: tuple


def represent_star(S, validate=True):
    L = S.lattice
    if validate:
        report = validate_action(S)
        if not report.ok:
            first = report.failures()[0]
            raise ActionInvalid(f"action violates {first.law}: {first.shown}", witness=report)
    upper = []
    lower = []
    for e in S.quantale.carrier.elements:
        row = S.action[e]
        upper.append(MapTable(L, L, row).flagged("meet", "monotone"))
        img = tuple(L.meet_set(b for b in L.elements if L.le(a, row[b])) for a in L.elements)
        lower.append(MapTable(L, L, img).flagged("join", "monotone"))
    return Representation(tuple(upper), tuple(lower))


def _stack(maps):
    return np.array([f.image for f in maps], dtype=np.int32)


def check_representation(S, subset_cap=SUBSET_CAP):
    """Laws of ``e ↦ e_*``: meet-maps, adjoint to ``e^*``, composition,
    suprema to pointwise meets, unit to identity."""
    Q, L = S.quantale, S.lattice
    E = Q.carrier
    rep = represent_star(S, validate=False)
    r = Report()
    bad = [e for e in E.elements if not meet_verdict(rep.upper[e])]
    r.add("upper-meet-preserving", not bad, bad, shown=E.label(bad[0]) if bad else "")
    bad = [e for e in E.elements if not join_verdict(rep.lower[e])]
    r.add("lower-join-preserving", not bad, bad, shown=E.label(bad[0]) if bad else "")
    bad = [e for e in E.elements if not is_adjoint_pair(rep.lower[e], rep.upper[e])]
    r.add("adjunction", not bad, bad, shown=E.label(bad[0]) if bad else "")
    bad = [
        (e, f)
        for e in E.elements
        for f in E.elements
        if rep.upper[Q.times(e, f)] != rep.upper[e].after(rep.upper[f])
    ]
    r.add("upper-composition", not bad, bad, shown=f"({E.label(bad[0][0])},{E.label(bad[0][1])})" if bad else "")
    U = _stack(rep.upper)
    hit = None
    for a in L.elements:
        w = _preservation_witness(U[:, a], E.join, E.bottom, L.meet, L.top, subset_cap)
        if w is not None:
            hit = (a, w)
            break
    r.add(
        "upper-suprema",
        hit is None,
        [hit] if hit else (),
        shown="" if hit is None else f"a={L.label(hit[0])} F={E.fmt(hit[1])}",
        note=_mode(E.n, subset_cap),
    )
    r.add("upper-unit", rep.upper[Q.unit] == MapTable.identity(L))
    return r


def check_causal_duality(S, subset_cap=SUBSET_CAP):
    """The propagations ``e^*`` form the co-opposite of the causations:
    ``(e&f)^* = f^* ∘ e^*``, suprema go to pointwise joins, and the order is
    kept by ``e^*`` and reversed by ``e_*``."""
    Q, L = S.quantale, S.lattice
    E = Q.carrier
    rep = represent_star(S, validate=False)
    r = Report()
    bad = [e for e in E.elements if not is_adjoint_pair(rep.lower[e], rep.upper[e])]
    r.add("adjunction", not bad, bad, shown=E.label(bad[0]) if bad else "")
    bad = [
        (e, f)
        for e in E.elements
        for f in E.elements
        if rep.lower[Q.times(e, f)] != rep.lower[f].after(rep.lower[e])
    ]
    r.add(
        "lower-composition",
        not bad,
        bad,
        shown=f"({E.label(bad[0][0])},{E.label(bad[0][1])})" if bad else "",
    )
    D = _stack(rep.lower)
    hit = None
    for a in L.elements:
        w = _preservation_witness(D[:, a], E.join, E.bottom, L.join, L.bottom, subset_cap)
        if w is not None:
            hit = (a, w)
            break
    r.add(
        "lower-suprema",
        hit is None,
        [hit] if hit else (),
        shown="" if hit is None else f"a={L.label(hit[0])} F={E.fmt(hit[1])}",
        note=_mode(E.n, subset_cap),
    )
    r.add("lower-unit", rep.lower[Q.unit] == MapTable.identity(L))
    bad = [
        (e, f)
        for e in E.elements
        for f in E.elements
        if E.le(e, f) and not (rep.lower[e].le(rep.lower[f]) and rep.upper[f].le(rep.upper[e]))
    ]
    r.add(
        "order-compatibility",
        not bad,
        bad,
        shown=f"({E.label(bad[0][0])},{E.label(bad[0][1])})" if bad else "",
    )
    return r


# quantaloids of join-maps -----------------------------------------------------


def check_quantaloid(objects, homs=None, cap=DEFAULT_CAP, subset_cap=SUBSET_CAP):
    """Hom completeness and two-sided distributivity of composition.

    ``objects`` is a list of lattices; ``homs`` maps index pairs ``(i, j)`` to
    a :class:`HomLattice` of join-maps ``objects[i] -> objects[j]``.  Missing
    pairs are enumerated.
    """
    for L in objects:
        L.guard(cap, "check_quantaloid")
    k = len(objects)
    homs = dict(homs or {})
    for i in range(k):
        for j in range(k):
            if (i, j) not in homs:
                homs[i, j] = enumerate_hom(objects[i], objects[j], "join", cap=cap)

    def tag(i, j):
        return f"{objects[i].name or i},{objects[j].name or j}"

    r = Report()
    sups = {}
    for (i, j), h in sorted(homs.items()):
        verdict = h.completeness()
        shown = ""
        if not verdict:
            shown = "{}" if verdict.witness == () else "{" + ",".join(h.label(x) for x in verdict.witness) + "}"
        r.add(f"hom({tag(i, j)}).complete", verdict.holds, [verdict.witness] if not verdict else (), shown=shown)
        if verdict:
            sups[i, j] = (h.sup_table(), h.sup(()))

    for i in range(k):
        for j in range(k):
            for l in range(k):
                name = f"compose({objects[i].name or i},{objects[j].name or j},{objects[l].name or l})"
                h_ij, h_jl, h_il = homs[i, j], homs[j, l], homs[i, l]
                comp = np.full((len(h_jl), len(h_ij)), -1, dtype=np.int64)
                missing = []
                for g in range(len(h_jl)):
                    for f in range(len(h_ij)):
                        c = h_il.find(h_jl[g].after(h_ij[f]))
                        if c is None:
                            missing.append((g, f))
                        else:
                            comp[g, f] = c
                r.add(f"{name}.closed", not missing, missing[:1])
                if missing or not all(p in sups for p in ((i, j), (j, l), (i, l))):
                    continue
                (s_ij, b_ij), (s_jl, b_jl), (s_il, b_il) = sups[i, j], sups[j, l], sups[i, l]
                hit = None
                for g in range(len(h_jl)):
                    w = _preservation_witness(comp[g, :], s_ij, b_ij, s_il, b_il, subset_cap)
                    if w is not None:
                        hit = (g, w)
                        break
                r.add(
                    f"{name}.left-distributive",
                    hit is None,
                    [hit] if hit else (),
                    shown="" if hit is None else f"g={h_jl.label(hit[0])}",
                    note=_mode(len(h_ij), subset_cap),
                )
                hit = None
                for f in range(len(h_ij)):
                    w = _preservation_witness(comp[:, f], s_jl, b_jl, s_il, b_il, subset_cap)
                    if w is not None:
                        hit = (f, w)
                        break
                r.add(
                    f"{name}.right-distributive",
                    hit is None,
                    [hit] if hit else (),
                    shown="" if hit is None else f"f={h_ij.label(hit[0])}",
                    note=_mode(len(h_jl), subset_cap),
                )
    return r
