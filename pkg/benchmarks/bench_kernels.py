"""Benchmark the compiled kernel against the pure-Python twin.

Times the two kernel entry points on workloads harvested from real tree
weight computations, then a cold-cache end-to-end volume run per backend.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--seed 1]
"""

import argparse
import random
import sys
import time
from fractions import Fraction

from forestvol import _kernel_py
from forestvol.families import random_connected_graph
from forestvol.graphs import tree_from_edges
from forestvol.treeweight import DeltaParams, WeightCache, tree_weight

try:
    from forestvol import _kernel
except ImportError:
    _kernel = None


def harvest_calls(seed, n_graphs=30):
    """Record kernel call arguments from spanning-tree weight computations."""
    rng = random.Random(seed)
    canon_calls = []
    poset_calls = []

    real_canon = _kernel_py.canon_key
    real_poset = _kernel_py.poset_integral_packed

    def spy_canon(n, flat):
        canon_calls.append((n, flat))
        return real_canon(n, flat)

    def spy_poset(*args):
        poset_calls.append(args)
        return real_poset(*args)

    import forestvol.canon as canon_mod
    import forestvol.treeweight as tw_mod

    saved = canon_mod.kernel.canon_key, tw_mod.kernel.poset_integral_packed
    canon_mod.kernel.canon_key = spy_canon
    tw_mod.kernel.poset_integral_packed = spy_poset
    try:
        dp = DeltaParams(Fraction(1, 100))
        for i in range(n_graphs):
            n = rng.randint(4, 7)
            g = random_connected_graph(n, rng.randint(0, 2), seed=seed + i, max_degree=3)
            ranks = _spanning_tree_ranks(g)
            tree_weight(g, tree_from_edges(g, ranks), dp, cache=WeightCache())
    finally:
        canon_mod.kernel.canon_key, tw_mod.kernel.poset_integral_packed = saved
    return canon_calls, poset_calls


def _spanning_tree_ranks(g):
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ranks = []
    for r, (u, v) in enumerate(g.edges):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            ranks.append(r)
    return ranks


def time_replay(fn, calls, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def time_end_to_end(mod, repeat):
    """Cold-cache volume runs with the given kernel module patched in.

    All caches (engines and the shared weight memo) are reset per repeat so
    both backends do the same work; a warm second run would be nearly
    kernel-free and measure only the surrounding Python."""
    import forestvol.kernel as kernel_mod
    import forestvol.treeweight as tw_mod
    from forestvol import approximate_volume
    from forestvol.coeffs import clear_engines

    g = random_connected_graph(16, 3, seed=3, max_degree=3)
    saved = kernel_mod.canon_key, kernel_mod.poset_integral_packed
    best = float("inf")
    try:
        kernel_mod.canon_key = mod.canon_key
        kernel_mod.poset_integral_packed = mod.poset_integral_packed
        for _ in range(repeat):
            clear_engines()
            tw_mod._default_cache = tw_mod.WeightCache()
            t0 = time.perf_counter()
            approximate_volume(g, Fraction(1, 100), Fraction(1, 10))
            best = min(best, time.perf_counter() - t0)
    finally:
        kernel_mod.canon_key, kernel_mod.poset_integral_packed = saved
        clear_engines()
        tw_mod._default_cache = tw_mod.WeightCache()
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    if _kernel is None:
        print("compiled kernel not built; nothing to compare")
        return 1

    canon_calls, poset_calls = harvest_calls(args.seed)
    print(f"harvested {len(canon_calls)} canon_key calls, "
          f"{len(poset_calls)} poset_integral calls")

    rows = []
    for name, calls in (("canon_key", canon_calls), ("poset_integral", poset_calls)):
        ref = time_replay(getattr(_kernel_py, name if name != "poset_integral" else "poset_integral_packed"), calls, args.repeat)
        fast = time_replay(getattr(_kernel, name if name != "poset_integral" else "poset_integral_packed"), calls, args.repeat)
        rows.append((name, ref, fast))

    reps = max(2, args.repeat // 2)
    py_e2e = time_end_to_end(_kernel_py, reps)
    c_e2e = time_end_to_end(_kernel, reps)
    rows.append(("volume n=16 end-to-end", py_e2e, c_e2e))

    print(f"\n{'workload':<26} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, ref, fast in rows:
        print(f"{name:<26} {ref * 1e3:>8.2f}ms {fast * 1e3:>8.2f}ms {ref / fast:>7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
