"""Time the compiled and pure-Python kernel backends on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--json]

Each row times one kernel call on a fixed workload and reports the best of
``--repeat`` runs for every available backend, plus the speedup of the
compiled backend over the fallback.  Outputs are compared for equality.
"""

import argparse
import json
import random
import sys
import timeit

import numpy as np

from causalat import kernels
from causalat.lattice import boolean, chain, mn, n5, subspace_lattice
from causalat.propositions import _tables, all_union_maps


def workloads():
    B4, M = boolean(4), mn(6)
    S = subspace_lattice(3, 2)
    sub_m3, emb_m3 = _tables(mn(3))
    sub_n5, _ = _tables(n5())
    rows = all_union_maps(mn(3), n5())
    rng = random.Random(0)
    f = [rng.randrange(B4.n) for _ in range(B4.n)]
    g = [rng.randrange(B4.n) for _ in range(B4.n)]
    big = chain(40)
    return [
        ("transitive_closure chain40", lambda k: k.transitive_closure(np.triu(big.leq, 1))),
        ("bound_tables boolean4", lambda k: k.bound_tables(B4.leq)),
        ("enumerate_join_maps b4->m3", lambda k: k.enumerate_join_maps(B4.join, mn(3).join, 0, 0)),
        ("enumerate_join_maps sub3_2->m6", lambda k: k.enumerate_join_maps(S.join, M.join, 0, 0)),
        ("subset_hom_witness boolean4", lambda k: k.subset_hom_witness(list(B4.elements), B4.join, 0, B4.join, 0)),
        ("adjunction_witness boolean4", lambda k: k.adjunction_witness(B4.leq, B4.leq, f, g)),
        ("distributive_subsets boolean4", lambda k: k.distributive_subsets(B4.meet, B4.join, 0)),
        ("union_map_scan m3->n5 (65536 maps)", lambda k: k.union_map_scan(rows, sub_m3, emb_m3, sub_n5)),
    ]


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def run(repeat):
    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    results = []
    for label, call in workloads():
        row = {"kernel": label}
        outputs = {}
        for name, k in backends.items():
            outputs[name] = call(k)
            number = 1 if name == "python" else 5
            best = min(timeit.repeat(lambda: call(k), number=number, repeat=repeat)) / number
            row[name] = best
        ref = outputs.get("python")
        row["agree"] = all(same(ref, out) for out in outputs.values())
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        results.append(row)
    return list(backends), results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true", help="print rows as JSON")
    args = parser.parse_args(argv)
    names, rows = run(args.repeat)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    header = f"{'kernel':38}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}  agree"
    print(header)
    for row in rows:
        times = "".join(f"{row[n] * 1e3:>10.3f}ms" for n in names)
        speed = f"{row['speedup']:>9.1f}x" if "speedup" in row else f"{'-':>10}"
        print(f"{row['kernel']:38}{times}{speed}  {row['agree']}")


if __name__ == "__main__":
    main()
