import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalat.errors import ForeignElement, KindViolation, NoComparablePair, NotContinuous, TooLarge
from causalat.galois import MapTable, enumerate_hom
from causalat.lattice import boolean, chain, mn, n5, subspace_lattice
from causalat.propositions import (
    ActualityMap,
    actuality_set,
    all_union_maps,
    check_Fsharp_quantaloidal,
    check_resolution_adjunction,
    conjunction_failure_witness,
    continuity_scan,
    embed,
    from_mask,
    induced_map,
    is_continuous,
    lift_map,
    resolve,
    to_mask,
)

from conftest import family, small_lattices


def nonzero_subsets(L):
    xs = [x for x in L.elements if x != L.bottom]
    for r in range(len(xs) + 1):
        for c in itertools.combinations(xs, r):
            yield frozenset(c)


def brute_fillers(g):
    """Every function f on elements with f(⋁A) = ⋁g(A) for all A."""
    L1, L2 = g.src, g.dst
    subs = list(nonzero_subsets(L1))
    out = []
    for f in itertools.product(range(L2.n), repeat=L1.n):
        if all(f[L1.join_set(A)] == L2.join_set(g(A)) for A in subs):
            out.append(f)
    return out


def brute_continuous(g):
    L1, L2 = g.src, g.dst
    subs = list(nonzero_subsets(L1))
    return all(
        L2.join_set(g(A)) == L2.join_set(g(B))
        for A in subs
        for B in subs
        if L1.join_set(A) == L1.join_set(B)
    )


def named(L, *labels):
    return frozenset(L.index(x) for x in labels)


def test_embed_and_resolve_examples():
    B = boolean(2)
    assert embed(B, B.top) == named(B, "a", "b", "1")
    assert embed(B, B.bottom) == frozenset()
    M = mn(3)
    assert resolve(M, {"a", "b"}) == M.top
    assert resolve(M, set()) == M.bottom
    with pytest.raises(ForeignElement):
        actuality_set(M, {"0"})


def test_masks_round_trip():
    B = boolean(3)
    for A in nonzero_subsets(B):
        assert from_mask(to_mask(A)) == A


@pytest.mark.parametrize("L", family() + small_lattices() + [boolean(3), subspace_lattice(3, 2)], ids=lambda L: L.name)
def test_resolution_adjunction_holds(L):
    r = check_resolution_adjunction(L)
    assert r.ok, r.lines()
    for A in nonzero_subsets(L):
        for x in L.elements:
            assert L.le(resolve(L, A), x) == (A <= embed(L, x))


def test_perturbed_embedding_fails():
    L = chain(3)

    def bad(x):
        return embed(L, x) - {1} if x == 2 else embed(L, x)

    r = check_resolution_adjunction(L, embedding=bad)
    assert not r["adjunction"].passed
    assert r["adjunction"].witness == (frozenset({1}), 2)
    assert r["adjunction"].shown == "A={1} x=2"
    assert not r["embed-meets"].passed
    assert r["resolve-embed"].passed


def test_actuality_map_basics():
    M = mn(3)
    g = ActualityMap.from_dict(M, M, {"a": {"a"}, "b": {"a"}, "c": {"c"}}, name="g")
    assert g(named(M, "a", "b")) == named(M, "a")
    assert g.lines() == ["a |-> {a}", "b |-> {a}", "c |-> {c}", "1 |-> {}"]
    assert g.masks.tolist() == [1, 1, 4, 0]
    assert ActualityMap.from_masks(M, M, g.masks) == g
    h = ActualityMap.from_dict(M, M, {"1": {"1"}})
    assert g.union(h)(named(M, "1")) == named(M, "1")
    assert g.then(h)(named(M, "a")) == frozenset()
    with pytest.raises(ForeignElement):
        ActualityMap.from_dict(M, M, {"0": {"a"}})


def test_continuity_witness_on_m3():
    M = mn(3)
    g = ActualityMap.from_dict(M, M, {"a": {"a"}, "b": {"a"}, "c": {"c"}})
    v = is_continuous(g)
    assert not v.holds
    assert v.witness == (named(M, "a", "b"), named(M, "a", "c"))
    assert v.note == "coverage=exhaustive"
    assert not brute_continuous(g)
    assert brute_fillers(g) == []
    with pytest.raises(NotContinuous) as exc:
        induced_map(g)
    assert exc.value.witness == v.witness


def test_empty_map_is_continuous():
    for L in family():
        g = ActualityMap(L, L, (frozenset(),) * L.n)
        assert is_continuous(g)
        assert induced_map(g).image == (0,) * L.n


@pytest.mark.parametrize("L1,L2", [(chain(3), boolean(2)), (boolean(2), mn(3)), (n5(), chain(3))], ids=str)
def test_lift_then_induce_is_identity(L1, L2):
    for f in enumerate_hom(L1, L2, "join"):
        g = lift_map(f)
        assert is_continuous(g)
        assert induced_map(g) == f


def test_lift_requires_join_map():
    L = chain(3)
    with pytest.raises(KindViolation) as exc:
        lift_map(MapTable(L, L, (1, 1, 2)))
    assert exc.value.witness == frozenset()


@pytest.mark.parametrize("L1,L2", [(chain(3), chain(3)), (boolean(2), chain(2)), (chain(2), boolean(2))], ids=str)
def test_scan_agrees_with_brute_oracle(L1, L2):
    rows = all_union_maps(L1, L2)
    wit, fill = continuity_scan(L1, L2, rows)
    for row, w, f in zip(rows, wit, fill):
        g = ActualityMap.from_masks(L1, L2, row)
        fillers = brute_fillers(g)
        assert (w < 0) == brute_continuous(g) == (len(fillers) == 1)
        if w < 0:
            assert tuple(f.tolist()) == fillers[0]


def test_sampled_mode_reports_coverage():
    B = boolean(4)
    g = lift_map(MapTable.identity(B).checked("join"))
    v = is_continuous(g, exhaustive_cap=8, samples=300)
    assert v.holds and v.note == "coverage=300/32768"
    bad = ActualityMap.from_dict(B, B, {x: {x} for x in B.elements if x != B.bottom and x != B.top})
    v = is_continuous(bad, exhaustive_cap=8, samples=300)
    assert not v.holds
    A, C = v.witness
    assert B.join_set(A) == B.join_set(C)


def test_all_union_maps_count_and_cap():
    assert all_union_maps(chain(3), boolean(2)).shape == (64, 2)
    with pytest.raises(TooLarge):
        all_union_maps(boolean(3), boolean(3))


@pytest.mark.parametrize("L1,L2", [(chain(2), chain(3)), (boolean(2), boolean(2)), (chain(3), mn(3)), (n5(), chain(3))], ids=str)
def test_resolution_functor_laws(L1, L2):
    r = check_Fsharp_quantaloidal(L1, L2)
    assert r.ok, r.lines()
    assert [x.law for x in r] == ["empty-map", "suprema", "composition", "full"]


def test_resolution_functor_sampled_note():
    r = check_Fsharp_quantaloidal(boolean(2), mn(3), pair_budget=100)
    assert r.ok
    assert r["suprema"].note.startswith("pairs=100/")


def test_conjunction_witness():
    w = conjunction_failure_witness(chain(3))
    assert (w.a, w.b, w.intersection, w.resolved, w.conjunction) == (1, 2, frozenset(), 0, 1)
    B = boolean(2)
    w = conjunction_failure_witness(B)
    assert (B.label(w.a), B.label(w.b)) == ("a", "1")
    assert w.lines(B) == ["pair a < 1", "{a} ∩ {1} = {}", "resolve(intersection) = 0", "conjunction a ∧ 1 = a"]
    with pytest.raises(NoComparablePair):
        conjunction_failure_witness(chain(2))


@given(st.data())
def test_unions_of_lifts_resolve_to_joins(data):
    L1 = data.draw(st.sampled_from([chain(3), boolean(2), mn(3)]))
    L2 = data.draw(st.sampled_from([chain(3), boolean(2), n5()]))
    homs = list(enumerate_hom(L1, L2, "join"))
    f = data.draw(st.sampled_from(homs))
    h = data.draw(st.sampled_from(homs))
    g = lift_map(f).union(lift_map(h))
    joined = induced_map(g)
    assert joined.image == tuple(L2.lub(f(x), h(x)) for x in L1.elements)


@given(st.data())
def test_random_union_maps_match_oracle(data):
    L1 = data.draw(st.sampled_from([chain(3), boolean(2), mn(3)]))
    L2 = data.draw(st.sampled_from([chain(3), boolean(2)]))
    row = data.draw(st.lists(st.integers(0, (1 << (L2.n - 1)) - 1), min_size=L1.n - 1, max_size=L1.n - 1))
    g = ActualityMap.from_masks(L1, L2, np.array(row))
    assert bool(is_continuous(g)) == brute_continuous(g)
