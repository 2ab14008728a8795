import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalat.errors import KernelNonEmpty, KindViolation, ShapeMismatch, TooLarge
from causalat.galois import (
    AdjointPair,
    CausalRelation,
    MapTable,
    all_joins_verdict,
    all_meets_verdict,
    close_relation,
    compose_pairs,
    derive_causation,
    derive_pair,
    derive_propagation,
    duality,
    empty_relation,
    enumerate_hom,
    is_adjoint_pair,
    kernel_K,
    left_adjoint_of,
    order_relation,
    relation_of_pair,
    right_adjoint_of,
    separation_relation,
    totalize,
    validate_relation,
)
from causalat.lattice import boolean, chain, mn, n5, subspace_lattice

from conftest import family, random_relation

# oracles ----------------------------------------------------------------------


def brute_maps(L1, L2, kind):
    op1, op2 = (L1.lub, L2.lub) if kind == "join" else (L1.glb, L2.glb)
    unit1, unit2 = (L1.bottom, L2.bottom) if kind == "join" else (L1.top, L2.top)
    return sorted(
        f
        for f in itertools.product(range(L2.n), repeat=L1.n)
        if f[unit1] == unit2 and all(f[op1(a, b)] == op2(f[a], f[b]) for a in L1.elements for b in L1.elements)
    )


def brute_adjoint_partners(f):
    """Every map ``g`` with ``f(a) <= b <=> a <= g(b)``."""
    S, T = f.src, f.dst
    return [
        g
        for g in itertools.product(range(S.n), repeat=T.n)
        if all(T.le(f(a), b) == S.le(a, g[b]) for a in S.elements for b in T.elements)
    ]


# validation -------------------------------------------------------------------


def test_order_relation_is_valid():
    assert validate_relation(order_relation(chain(3))).ok


@pytest.mark.parametrize("L1", family(), ids=lambda L: L.name)
def test_separation_is_valid_everywhere(L1):
    for L2 in family():
        assert validate_relation(separation_relation(L1, L2)).ok


def test_down_up_closure_witness():
    B = boolean(2)
    R = CausalRelation.from_pairs(B, B, [("1", "a")])
    report = validate_relation(R)
    assert not report.ok
    law = report["down-up-closure"]
    one, a = B.index("1"), B.index("a")
    assert (one, one, a, one) in law.witnesses  # 1 ~> a <= 1 but (1,1) missing
    assert law.line().startswith("LAW down-up-closure FAIL witness=")


def test_meet_closure_witness():
    B = boolean(2)
    # 1 ~> a and 1 ~> b (closed upward) but never 1 ~> 0
    R = CausalRelation.from_pairs(B, B, [(x, y) for x in B.labels for y in ("a", "b", "1")] + [("0", "0")])
    law = validate_relation(R)["meet-closure"]
    assert not law.passed
    assert law.witnesses == ((1, 1, 2), (2, 1, 2), (3, 1, 2))
    assert law.shown == "(a,a,b) a~>a and a~>b but not a~>0"


def test_weakest_cause_needs_every_target():
    # valid if the axiom is only imposed on targets that have a cause,
    # but then the derived maps are not adjoint
    C = chain(2)
    R = CausalRelation.from_pairs(C, C, [(0, 1), (1, 1)])
    report = validate_relation(R)
    assert report["down-up-closure"].passed and report["meet-closure"].passed
    assert report["weakest-cause"].witness == (0, 0)
    p = AdjointPair(derive_propagation(R), derive_causation(R))
    v = p.verify()
    assert not v and v.witness == (0, 0)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        CausalRelation(chain(2), chain(3), [[True, True], [True, True]])


# kernel, derivation, totalization -----------------------------------------------


def test_kernel():
    assert kernel_K(separation_relation(chain(3), mn(3))) == frozenset()
    assert kernel_K(empty_relation(chain(3), chain(2))) == frozenset(range(3))
    R = close_relation(chain(3), chain(2), [(1, 1)])
    assert validate_relation(R).ok
    assert kernel_K(R) == frozenset({2})
    with pytest.raises(KernelNonEmpty) as exc:
        derive_propagation(R)
    assert exc.value.witness == frozenset({2})


@pytest.mark.parametrize("L1", family(), ids=lambda L: L.name)
def test_separation_tables(L1):
    for L2 in family():
        p = derive_pair(separation_relation(L1, L2))
        assert p.lower.image == tuple(L2.bottom if x == L1.bottom else L2.top for x in L1.elements)
        assert p.upper.image == tuple(L1.top if y == L2.top else L1.bottom for y in L2.elements)
        assert p.lower.kind == "join" and p.upper.kind == "meet"


def test_order_relation_gives_identity():
    for L in family():
        p = derive_pair(order_relation(L))
        assert p.lower == MapTable.identity(L)
        assert p.upper == MapTable.identity(L)


def test_random_relations_match_brute_force_adjoint(rng):
    L1, L2 = chain(3), boolean(2)
    for _ in range(30):
        R = random_relation(rng, L1, L2)
        p = derive_pair(R)
        assert brute_adjoint_partners(p.lower) == [p.upper.image]


def test_totalize_empty_relation():
    C = chain(2)
    ext, p = totalize(empty_relation(C, C))
    S, T = ext.src, ext.dst
    assert S.label(S.top) == "1_" and T.n == 3
    assert p.lower.image == (T.top,) * 3
    assert p.upper.image == (0, 0, S.top)
    # the empty relation breaks the weakest-cause axiom, and the totalized
    # maps are not adjoint either
    assert not validate_relation(empty_relation(C, C)).ok
    v = p.verify()
    assert not v and v.witness == (0, 0)


def test_totalize_is_conservative():
    R = separation_relation(chain(3), mn(3))
    p = derive_pair(R)
    ext, q = totalize(R)
    assert q.lower.image[:3] == p.lower.image and q.lower(ext.src.top) == ext.dst.top
    assert q.upper.image[:5] == p.upper.image and q.upper(ext.dst.top) == ext.src.top
    assert q.verify()


def test_totalize_kernel_goes_to_new_top():
    R = close_relation(chain(3), chain(2), [(1, 1)])
    ext, p = totalize(R)
    assert p.lower(2) == ext.dst.top
    assert p.lower.image[:2] == (0, 1)
    assert p.verify()


# adjunctions ----------------------------------------------------------------------


def test_is_adjoint_pair_examples():
    C = chain(2)
    ident = MapTable.identity(C)
    assert is_adjoint_pair(ident, ident)
    top = MapTable.constant(C, C, C.top)
    v = is_adjoint_pair(top, top)
    assert not v
    a, b = v.witness
    assert C.le(top(a), b) != C.le(a, top(b))
    with pytest.raises(ShapeMismatch):
        is_adjoint_pair(MapTable.identity(chain(3)), ident)


def test_adjoint_constructors():
    L = mn(3)
    ident = MapTable.identity(L)
    assert right_adjoint_of(ident) == ident and left_adjoint_of(ident) == ident
    p = derive_pair(separation_relation(chain(3), boolean(2)))
    assert right_adjoint_of(p.lower) == p.upper
    assert left_adjoint_of(p.upper) == p.lower
    with pytest.raises(KindViolation) as exc:
        right_adjoint_of(MapTable(chain(3), chain(3), (1, 1, 2)))
    assert exc.value.witness == frozenset()


def test_every_join_map_has_unique_right_adjoint():
    L1, L2 = chain(3), boolean(2)
    for f in enumerate_hom(L1, L2, "join"):
        g = right_adjoint_of(f)
        assert brute_adjoint_partners(f) == [g.image]
        assert is_adjoint_pair(f, g)


def test_relation_of_pair():
    L = chain(3)
    ident = AdjointPair.identity(L)
    assert relation_of_pair(ident) == order_relation(L)
    sep = separation_relation(chain(3), mn(3))
    assert relation_of_pair(derive_pair(sep)) == sep
    for f in enumerate_hom(L, L, "join"):
        R = relation_of_pair(AdjointPair(f, right_adjoint_of(f)))
        assert validate_relation(R).ok
        assert derive_propagation(R) == f


def test_compose_pairs():
    A, B, C = chain(3), boolean(2), chain(2)
    p = derive_pair(separation_relation(A, B))
    assert compose_pairs(AdjointPair.identity(A), p) == p
    assert compose_pairs(p, AdjointPair.identity(B)) == p
    q = derive_pair(separation_relation(B, C))
    assert compose_pairs(p, q) == derive_pair(separation_relation(A, C))
    with pytest.raises(ShapeMismatch):
        compose_pairs(p, p)


def test_compose_random_pairs_against_brute_force(rng):
    A, B, C = chain(3), boolean(2), chain(2)
    for _ in range(20):
        p = derive_pair(random_relation(rng, A, B))
        q = derive_pair(random_relation(rng, B, C))
        r = compose_pairs(p, q)
        assert r.lower == q.lower.after(p.lower)
        assert brute_adjoint_partners(r.lower) == [r.upper.image]


# hom-lattices ---------------------------------------------------------------------


def test_endo_hom_of_two_chain():
    h = enumerate_hom(chain(2), chain(2), "join")
    assert [f.image for f in h] == [(0, 0), (0, 1)]


@pytest.mark.parametrize(
    "L1,L2",
    [(chain(2), chain(3)), (chain(3), boolean(2)), (boolean(2), mn(3)), (n5(), chain(3)), (mn(3), n5())],
    ids=lambda L: L.name,
)
def test_hom_enumeration_against_brute_force(L1, L2):
    for kind in ("join", "meet"):
        h = enumerate_hom(L1, L2, kind)
        assert [f.image for f in h] == brute_maps(L1, L2, kind)
        assert h.completeness()
    assert len(enumerate_hom(L1, L2, "join")) == len(enumerate_hom(L2, L1, "meet"))


def test_hom_extremes_and_sups():
    h = enumerate_hom(chain(3), boolean(2), "join")
    assert h[h.bottom].image == (0, 0, 0)
    assert h[h.top].image == (0, 3, 3)
    m = enumerate_hom(boolean(2), chain(3), "meet")
    # coop suprema: pointwise meets
    i, j = 0, len(m) - 1
    assert m.sup_image((i, j)) == tuple(chain(3).glb(x, y) for x, y in zip(m[i].image, m[j].image))


def test_identity_in_endo_homs():
    for L in family():
        assert enumerate_hom(L, L, "join").find(MapTable.identity(L)) is not None


def test_hom_caps():
    with pytest.raises(TooLarge):
        enumerate_hom(boolean(3), subspace_lattice(3, 3), "join", max_maps=1000)
    with pytest.raises(TooLarge):
        enumerate_hom(boolean(5), chain(2), "join")


@pytest.mark.parametrize("L1,L2", list(itertools.product([chain(2), chain(3), boolean(2)], repeat=2)), ids=str)
def test_duality_report(L1, L2):
    d = duality(enumerate_hom(L1, L2, "join"))
    assert d.report.ok, d.report.lines()


def test_duality_maps_separation_and_extremes():
    L1, L2 = chain(3), boolean(2)
    h = enumerate_hom(L1, L2, "join")
    d = duality(h)
    p = derive_pair(separation_relation(L1, L2))
    assert d.target[d.mapping[h.index_of(p.lower)]] == p.upper
    assert d.mapping[h.bottom] == d.target.top


# properties -----------------------------------------------------------------------

lattices = st.sampled_from(family() + [boolean(3)])


@given(lattices, lattices, st.randoms(use_true_random=False))
def test_derived_pairs_are_adjoint_and_round_trip(L1, L2, r):
    R = random_relation(r, L1, L2, seeds=4)
    assert validate_relation(R).ok
    p = derive_pair(R)
    assert p.verify()
    assert relation_of_pair(p) == R
    assert all_joins_verdict(p.lower)
    assert all_meets_verdict(p.upper)


@given(st.randoms(use_true_random=False))
def test_composition_is_associative(r):
    A, B, C, D = chain(3), boolean(2), mn(3), chain(2)
    p, q, s = (derive_pair(random_relation(r, X, Y)) for X, Y in [(A, B), (B, C), (C, D)])
    assert compose_pairs(compose_pairs(p, q), s) == compose_pairs(p, compose_pairs(q, s))


def test_relation_count_on_two_chains():
    # valid relations on chain(2)^2: one per join-map, plus the one whose
    # kernel is the top element
    C = chain(2)
    valid = set()
    for bits in itertools.product([False, True], repeat=4):
        R = CausalRelation(C, C, [bits[:2], bits[2:]])
        if validate_relation(R).ok:
            valid.add(bits)
    pairs = [AdjointPair(f, right_adjoint_of(f)) for f in enumerate_hom(C, C, "join")]
    from_pairs = {tuple(relation_of_pair(p).rel.ravel().tolist()) for p in pairs}
    assert from_pairs <= valid
    assert valid - from_pairs == {(True, True, False, False)}


def test_seeded_rng_reproducible():
    a = random_relation(random.Random(5), mn(3), n5())
    b = random_relation(random.Random(5), mn(3), n5())
    assert a == b
