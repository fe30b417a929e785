"""Time the compiled kernels against the pure-Python fallback on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]

Each row calls one kernel from both modules with identical arguments,
checks that the results agree, and reports the best-of-N wall time.
"""

import argparse
import random
import sys
import timeit

from pottszero import kernels
from pottszero.exact import _fixed_vector, _layout
from pottszero.graph import Graph
from pottszero.harness import _bitmasks, _refine


def _random_graph(n, m, seed):
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, tuple(rng.sample(pairs, m)))


def workloads():
    g = _random_graph(10, 16, 1)
    order, bp, bpos, bedge = _layout(g, {})
    fixed = _fixed_vector(order, {})
    wre = [0.3] * g.m
    wim = [0.1] * g.m
    yield "colouring_buckets n=10 k=6", "colouring_buckets", (g.n, bp, bpos, bedge, fixed, 0, 6, wre, wim)
    yield "colouring_hist n=10 k=6", "colouring_hist", (g.n, bp, bpos, bedge, fixed, 0, 6, g.m)

    h = _random_graph(12, 16, 2)
    eu = [e[0] for e in h.edges]
    ev = [e[1] for e in h.edges]
    yield "cluster_buckets m=16", "cluster_buckets", (h.n, eu, ev, [-0.7] * h.m, [0.2] * h.m)
    yield "cluster_hist m=16", "cluster_hist", (h.n, eu, ev, h.m)

    c = Graph(14, tuple((i, (i + 1) % 14) for i in range(14)) + tuple((i, i + 7) for i in range(7)))
    yield "connected_clusters cubic n=14", "connected_clusters", \
        (c.n, [e[0] for e in c.edges], [e[1] for e in c.edges], 8)

    # the cube is vertex-transitive, so refinement leaves a single cell
    cube = Graph(8, tuple((u, u ^ b) for u in range(8) for b in (1, 2, 4) if u < u ^ b))
    adj = _bitmasks(cube)
    yield "canonical_code cube", "canonical_code", (cube.n, adj, _refine(cube.n, adj))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels are not built; only the fallback is available", file=sys.stderr)
        return 1
    print(f"{'kernel':<32} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, name, call_args in workloads():
        py, cy = getattr(kernels.pure, name), getattr(kernels.compiled, name)
        if py(*call_args) != cy(*call_args):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        t_py = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=1, repeat=args.repeat))
        print(f"{label:<32} {t_py:10.4f} {t_cy:10.4f} {t_py / t_cy:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
