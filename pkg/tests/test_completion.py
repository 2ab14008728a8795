import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalat.completion import (
    check_completion_universal_traits,
    distributive_ideals,
    frame_completion,
    is_distributive_join,
    is_frame,
    is_frame_exhaustive,
)
from causalat.errors import TooLarge
from causalat.galois import MapTable
from causalat.lattice import adjoin_top, boolean, chain, is_isomorphic, mn, n5, subspace_lattice

from conftest import family, small_lattices


def subsets(xs):
    return [frozenset(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)]


def brute_distributive(L, A):
    j = L.join_set(A)
    return all(L.glb(x, j) == L.join_set(L.glb(x, a) for a in A) for x in L.elements)


def brute_ideals(L):
    """Down-sets containing 0 closed under every distributive join, from the
    definition over all subsets."""
    els = list(L.elements)
    out = set()
    for I in subsets(els):
        if L.bottom not in I:
            continue
        if any(L.le(y, x) and y not in I for x in I for y in els):
            continue
        if all(L.join_set(A) in I for A in subsets(sorted(I)) if brute_distributive(L, A)):
            out.add(I)
    return out


def test_distributive_join_examples():
    M = mn(3)
    a, b, c = (M.index(x) for x in "abc")
    v = is_distributive_join(M, {a, b})
    assert not v.holds and v.witness == c
    assert is_distributive_join(M, {a})
    assert is_distributive_join(M, set())
    assert is_distributive_join(M, {a, M.top})


@pytest.mark.parametrize(
    "L,witness",
    [(mn(3), (3, 1, 2)), (n5(), (2, 1, 3)), (chain(4), None), (boolean(3), None), (subspace_lattice(2, 2), (3, 1, 2))],
    ids=str,
)
def test_frame_detection(L, witness):
    v = is_frame(L)
    assert v.witness == witness
    assert v.holds == (witness is None) == bool(is_frame_exhaustive(L))


@pytest.mark.parametrize("L", small_lattices() + [boolean(3), adjoin_top(mn(3)), subspace_lattice(3, 2)], ids=lambda L: L.name)
def test_triple_scan_matches_subset_scan(L):
    assert bool(is_frame(L)) == bool(is_frame_exhaustive(L))
    assert bool(is_frame(L)) == all(brute_distributive(L, A) for A in subsets(list(L.elements)))


@pytest.mark.parametrize(
    "L,size", [(mn(3), 8), (n5(), 6), (mn(4), 16), (subspace_lattice(3, 2), 16), (chain(3), 3), (boolean(2), 4)], ids=str
)
def test_completion_sizes(L, size):
    C, _ = frame_completion(L)
    assert C.n == size


@pytest.mark.parametrize("L", small_lattices() + [mn(4), adjoin_top(mn(3))], ids=lambda L: L.name)
def test_ideals_match_definition(L):
    masks = distributive_ideals(L)
    got = {frozenset(i for i in L.elements if m >> i & 1) for m in masks}
    assert got == brute_ideals(L)
    assert masks == sorted(masks)


def test_m3_completes_to_cube():
    comp = frame_completion(mn(3))
    C, e = comp
    assert is_isomorphic(C, boolean(3)) is not None
    assert C.name == "m3^D"
    assert [C.label(e(x)) for x in mn(3).elements] == ["{0}", "{0,a}", "{0,b}", "{0,c}", "{0,a,b,c,1}"]
    assert comp.ideals[C.top] == frozenset(mn(3).elements)
    assert C.labels == ("{0}", "{0,a}", "{0,b}", "{0,a,b}", "{0,c}", "{0,a,c}", "{0,b,c}", "{0,a,b,c,1}")


def test_pentagon_completion():
    L = n5()
    C, e = frame_completion(L)
    assert is_frame(C)
    r = check_completion_universal_traits(L)
    assert r.ok
    # a ∨ c = 1 but b ∧ (a ∨ c) = b while (b ∧ a) ∨ (b ∧ c) = a
    assert r["nondistributive-join-strict"].note == "example={a,c}"
    a, c = L.index("a"), L.index("c")
    assert C.lub(e(a), e(c)) != e(L.top)


@pytest.mark.parametrize("L", family() + small_lattices() + [mn(4), boolean(3)], ids=lambda L: L.name)
def test_universal_traits(L):
    r = check_completion_universal_traits(L)
    assert r.ok, r.lines()
    assert [x.law for x in r] == [
        "target-frame",
        "embedding-injective",
        "embedding-meets",
        "order-reflecting",
        "distributive-joins",
        "nondistributive-join-strict",
    ]


@pytest.mark.parametrize("L", [chain(4), boolean(2), boolean(3), adjoin_top(boolean(2))], ids=lambda L: L.name)
def test_frames_complete_to_themselves(L):
    C, e = frame_completion(L)
    assert is_isomorphic(C, L) is not None
    assert sorted(e.image) == list(C.elements)
    assert check_completion_universal_traits(L)["nondistributive-join-strict"].note == "vacuous"


def test_identity_is_not_a_completion_of_m3():
    L = mn(3)
    r = check_completion_universal_traits(L, completion=(L, MapTable.identity(L)))
    assert not r["target-frame"].passed
    assert r["target-frame"].shown == "{a,b,c}"
    assert r["distributive-joins"].passed
    assert not r["nondistributive-join-strict"].passed


def test_completion_cap():
    with pytest.raises(TooLarge):
        frame_completion(boolean(4))
    with pytest.raises(TooLarge):
        is_frame_exhaustive(chain(13))
    assert frame_completion(chain(13), cap=13).lattice.n == 13


@given(st.sampled_from(small_lattices() + [mn(4), subspace_lattice(2, 2)]))
def test_completion_is_idempotent(L):
    C, _ = frame_completion(L)
    CC, ee = frame_completion(C, cap=16)
    assert is_isomorphic(CC, C) is not None
    assert len(set(ee.image)) == C.n
