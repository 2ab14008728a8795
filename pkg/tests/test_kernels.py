import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from causalat import kernels
from causalat.lattice import boolean, chain, mn, n5, subspace_lattice
from causalat.propositions import _tables

from conftest import small_lattices

BACKENDS = kernels.available_backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")

LATTICES = small_lattices() + [boolean(3), subspace_lattice(2, 3)]


def both():
    return kernels.get_backend("python"), kernels.get_backend(BACKENDS[0])


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@needs_both
@pytest.mark.skipif(bool(os.environ.get("CAUSALAT_KERNELS")), reason="backend forced by environment")
def test_compiled_backend_is_default():
    assert kernels.BACKEND == "cython"


@needs_both
@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_closure_and_bounds_parity(L):
    py, cy = both()
    adj = np.triu(L.leq, 1)
    assert np.array_equal(py.transitive_closure(adj), cy.transitive_closure(adj))
    for a, b in zip(py.bound_tables(L.leq), cy.bound_tables(L.leq)):
        assert np.array_equal(a, b)


@needs_both
@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_subset_kernels_parity(L):
    py, cy = both()
    for a, b in zip(py.distributive_subsets(L.meet, L.join, L.bottom), cy.distributive_subsets(L.meet, L.join, L.bottom)):
        assert np.array_equal(a, b)
    elems = np.arange(1, L.n)
    assert np.array_equal(py.subset_joins(L.join, L.bottom, elems), cy.subset_joins(L.join, L.bottom, elems))


@needs_both
def test_map_kernels_parity(rng):
    py, cy = both()
    for L1 in LATTICES[:10]:
        for L2 in (chain(3), boolean(2), mn(3)):
            a = py.enumerate_join_maps(L1.join, L2.join, L1.bottom, L2.bottom)
            b = cy.enumerate_join_maps(L1.join, L2.join, L1.bottom, L2.bottom)
            assert np.array_equal(a, b)
            for _ in range(5):
                f = [rng.randrange(L2.n) for _ in range(L1.n)]
                g = [rng.randrange(L1.n) for _ in range(L2.n)]
                assert py.subset_hom_witness(f, L1.join, L1.bottom, L2.join, L2.bottom) == cy.subset_hom_witness(
                    f, L1.join, L1.bottom, L2.join, L2.bottom
                )
                assert py.adjunction_witness(L1.leq, L2.leq, f, g) == cy.adjunction_witness(L1.leq, L2.leq, f, g)


@needs_both
def test_union_map_scan_parity(rng):
    py, cy = both()
    for L1, L2 in [(mn(3), n5()), (boolean(2), chain(4)), (n5(), mn(3)), (boolean(3), boolean(2))]:
        sub1, emb1 = _tables(L1)
        sub2, _ = _tables(L2)
        images = np.array([[rng.randrange(1 << (L2.n - 1)) for _ in range(L1.n - 1)] for _ in range(200)])
        for a, b in zip(py.union_map_scan(images, sub1, emb1, sub2), cy.union_map_scan(images, sub1, emb1, sub2)):
            assert np.array_equal(a, b)


def test_join_map_enumeration_against_brute_force():
    py = kernels.get_backend("python")
    L1, L2 = boolean(2), chain(3)
    got = {tuple(r) for r in py.enumerate_join_maps(L1.join, L2.join, L1.bottom, L2.bottom).tolist()}
    want = {
        f
        for f in itertools.product(range(L2.n), repeat=L1.n)
        if f[L1.bottom] == L2.bottom
        and all(f[L1.lub(a, b)] == L2.lub(f[a], f[b]) for a in L1.elements for b in L1.elements)
    }
    assert got == want


def test_subset_hom_witness_reports_units_and_least_mask():
    py = kernels.get_backend("python")
    L = chain(3)
    ident = list(L.elements)
    assert py.subset_hom_witness(ident, L.join, L.bottom, L.join, L.bottom) == -1
    assert py.subset_hom_witness([1, 1, 2], L.join, L.bottom, L.join, L.bottom) == 0
    # monotone but not binary-join-preserving on boolean(2): f(a)=f(b)=0, f(1)=1
    B = boolean(2)
    assert py.subset_hom_witness([0, 0, 0, 1], B.join, B.bottom, chain(2).join, 0) == 0b0110


def test_environment_forces_fallback():
    env = dict(os.environ, CAUSALAT_KERNELS="python")
    proc = subprocess.run(
        [sys.executable, "-c", "import causalat; print(causalat.BACKEND)"], env=env, capture_output=True, text=True, check=True
    )
    assert proc.stdout.strip() == "python"
