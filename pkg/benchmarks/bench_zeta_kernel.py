"""Compare the compiled and pure-Python scan kernels.

    python3 benchmarks/bench_zeta_kernel.py --y 30:200:0.05 --m 1

Prints wall time per backend, the speedup and the largest relative
disagreement between the two over the grid.
"""

import argparse
import statistics
import time

from adelab import _zeta_fast_py
from adelab.witness import y_grid


def _time(fn, repeat):
    runs = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t0)
    return min(runs), statistics.median(runs), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=float, default=0.75)
    ap.add_argument("--y", default="30:200:0.05", help="start:stop:step")
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    start, stop, step = args.y.split(":")
    ys = [float(y) for y in y_grid(start, stop, step, inclusive=False)]
    backends = {"python": _zeta_fast_py.zeta_line_jets}
    try:
        from adelab import _zeta_fast
        backends["cython"] = _zeta_fast.zeta_line_jets
    except ImportError:
        print("compiled kernel not built; timing the pure-Python fallback only")

    results = {}
    for name, fn in backends.items():
        best, median, out = _time(lambda: fn(args.x, ys, args.m), args.repeat)
        results[name] = out
        print(f"{name:>7}: {len(ys)} jets of order {args.m}  best {best:.3f} s  median {median:.3f} s"
              f"  ({best / len(ys) * 1e6:.0f} us/jet)")
        results[name + "_t"] = best
    if "cython" in backends:
        worst = max(abs(a - b) / max(abs(b), 1e-300)
                    for ra, rb in zip(results["cython"], results["python"]) for a, b in zip(ra, rb))
        print(f"speedup {results['python_t'] / results['cython_t']:.1f}x, max relative disagreement {worst:.2e}")


if __name__ == "__main__":
    main()
