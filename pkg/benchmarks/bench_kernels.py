"""Compiled vs pure-Python column reduction on Rips complexes of sphere samples.

    python3 benchmarks/bench_kernels.py [--sizes 200 400 800] [--repeat 3]
"""

import argparse
import time

from quadtope.homology import BACKEND, betti, rips_complex, sphere_points
from quadtope.homology.kernel import python_reduce_columns, reduce_columns


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 400, 800])
    ap.add_argument("--scale", type=float, default=5.0, help="Rips radius is scale / sqrt(points)")
    ap.add_argument("--field", default="Q")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if BACKEND != "cython":
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'points':>7} {'simplices':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}  b0..b2")
    for n in args.sizes:
        pts = sphere_points(2, n, seed=n)
        K = rips_complex(pts, args.scale / n**0.5, 3)
        size = sum(K.f_vector())
        t_py, b_py = best_of(lambda: betti(K, args.field, python_reduce_columns), args.repeat)
        t_cy, b_cy = best_of(lambda: betti(K, args.field, reduce_columns), args.repeat)
        assert b_py == b_cy, (b_py, b_cy)
        print(f"{n:>7} {size:>10} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>7.1f}x  {list(b_cy.b[:3])}")


if __name__ == "__main__":
    main()
