"""Hot inner loops behind a backend switch.

The compiled extension (``_ckernels``, built from Cython) is used when it
imports; otherwise the pure-Python module ``_pykernels`` takes over.  Set
``CAUSALAT_KERNELS=python`` to force the fallback.

Every function here normalises its array arguments once and forwards to the
active backend, so both backends see identical, contiguous inputs.
"""

import importlib
import os

import numpy as np

__all__ = [
    "BACKEND",
    "Kernels",
    "available_backends",
    "get_backend",
]

_MODULES = {"cython": "._ckernels", "python": "._pykernels"}


def _i32(a):
    return np.ascontiguousarray(a, dtype=np.int32)


def _u8(a):
    return np.ascontiguousarray(a, dtype=np.uint8)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def join_constraints(order, op_src):
    """Group the triples ``(u, v, op(u, v))`` by the step at which their last
    member gets assigned when elements are placed in ``order``."""
    n = len(order)
    pos = [0] * n
    for t, x in enumerate(order):
        pos[int(x)] = t
    buckets = [[] for _ in range(n)]
    tab = np.asarray(op_src).tolist()
    for u in range(n):
        for v in range(u + 1, n):
            w = tab[u][v]
            buckets[max(pos[u], pos[v], pos[w])].append((u, v, w))
    offsets = [0]
    flat = []
    for b in buckets:
        flat.extend(b)
        offsets.append(len(flat))
    triples = np.array(flat, dtype=np.int32).reshape(len(flat), 3)
    return _i32(offsets), np.ascontiguousarray(triples)


class Kernels:
    """Thin adapter over one backend module."""

    def __init__(self, name):
        self.name = name
        self._impl = importlib.import_module(_MODULES[name], __name__)

    def __repr__(self):
        return f"Kernels({self.name!r})"

    def transitive_closure(self, adj):
        return self._impl.transitive_closure(_u8(adj))

    def bound_tables(self, leq):
        return self._impl.bound_tables(_u8(leq))

    def subset_hom_witness(self, f, op_src, unit_src, op_dst, unit_dst):
        """Least subset mask ``A`` of the domain of ``f`` with
        ``f(op_src-fold A) != op_dst-fold f(A)``, or -1.  Mask 0 stands for the
        empty family (units)."""
        return int(
            self._impl.subset_hom_witness(
                _i32(f), _i32(op_src), int(unit_src), _i32(op_dst), int(unit_dst)
            )
        )

    def enumerate_join_maps(self, op_src, op_dst, unit_src, unit_dst, order=None):
        """All maps preserving the binary operation and sending ``unit_src`` to
        ``unit_dst``, as rows of an ``(m, n_src)`` array (DFS order)."""
        n = len(op_src)
        order = list(range(n)) if order is None else [int(x) for x in order]
        offsets, triples = join_constraints(order, op_src)
        fixed = np.full(n, -1, dtype=np.int32)
        if n:
            fixed[unit_src] = unit_dst
        return self._impl.enumerate_join_maps(
            _i32(order), offsets, triples, _i32(op_dst), fixed
        )

    def adjunction_witness(self, leq1, leq2, f, g):
        a, b = self._impl.adjunction_witness(_u8(leq1), _u8(leq2), _i32(f), _i32(g))
        return int(a), int(b)

    def subset_joins(self, join, bottom, elems):
        return self._impl.subset_joins(_i32(join), int(bottom), _i32(elems))

    def distributive_subsets(self, meet, join, bottom):
        return self._impl.distributive_subsets(_i32(meet), _i32(join), int(bottom))

    def union_map_scan(self, images, sub_join1, embed1, sub_join2):
        images = _i64(images)
        if images.ndim == 1:
            images = images.reshape(1, -1)
        return self._impl.union_map_scan(
            images, _i32(sub_join1), _i64(embed1), _i32(sub_join2)
        )


_cache = {}


def get_backend(name):
    if name not in _cache:
        _cache[name] = Kernels(name)
    return _cache[name]


def available_backends():
    names = []
    for name in _MODULES:
        try:
            get_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select():
    wanted = os.environ.get("CAUSALAT_KERNELS", "").strip().lower()
    if wanted:
        return get_backend(wanted)
    try:
        return get_backend("cython")
    except ImportError:
        return get_backend("python")


active = _select()
BACKEND = active.name
