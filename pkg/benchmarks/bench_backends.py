"""Benchmark the numba zonal-recurrence kernel against the numpy fallback.

Usage:
    python benchmarks/bench_backends.py [--nodes N] [--degree M] [--repeats K]

The recurrence producing z_m(t) over cubature-node arrays is the hot inner
loop of every series evaluation and reproducing integral, so that is what is
timed, plus an end-to-end reproducing-integral workload under each backend.
"""

import argparse
import time

import numpy as np


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_recurrence(nodes, degree, repeats):
    from polybergman._backend import HAVE_NUMBA, zonal_matrix_numba, zonal_matrix_numpy

    rng = np.random.default_rng(0)
    t = rng.uniform(-1.0, 1.0, size=nodes)
    rows = [("numpy", zonal_matrix_numpy)]
    if HAVE_NUMBA:
        zonal_matrix_numba(t[:8], degree, 3)  # trigger compilation outside timing
        rows.append(("numba", zonal_matrix_numba))
    print(f"zonal recurrence: {nodes} nodes, degree {degree}, n=3")
    results = {}
    for name, fn in rows:
        best = time_call(fn, t, degree, 3, repeats=repeats)
        results[name] = best
        print(f"  {name:6s} {best * 1e3:9.3f} ms")
    if "numba" in results:
        print(f"  speedup numba/numpy: {results['numpy'] / results['numba']:.2f}x")


def bench_reproduce(repeats):
    import polybergman as pb

    cfg = pb.KernelConfig(n=3, p=2)
    rule = pb.build_ball_rule(3, 0.0, 0.0, 16)
    u = pb.random_polyharmonic(cfg, 6, blocks=6, seed=1)
    x = pb.make_rotated_point(cfg.sector_phase(1), (0.3, -0.2, 0.1))

    def workload():
        for _ in range(50):
            pb.reproduce(cfg, 0.0, 0.0, u, x, 6, rule)

    workload()  # warm up
    best = time_call(workload, repeats=repeats)
    print(f"reproducing integral x50 (active backend {pb.BACKEND_NAME}): {best * 1e3:.1f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=200_000)
    parser.add_argument("--degree", type=int, default=60)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    bench_recurrence(args.nodes, args.degree, args.repeats)
    bench_recurrence(args.nodes // 100, args.degree, args.repeats)
    bench_reproduce(args.repeats)


if __name__ == "__main__":
    main()
