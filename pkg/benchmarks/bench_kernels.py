"""Compare the compiled and numpy bivariate shrinkage kernels.

    python3 benchmarks/bench_kernels.py [--size 256] [--repeat 5]

Prints the best-of-``repeat`` wall time of each backend per subband size and
checks that both return the same bits.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from tpctf import _shrink_py

try:
    from tpctf import _shrink as _shrink_c
except ImportError:  # extension not built
    _shrink_c = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, action="append", help="subband side (repeatable)")
    ap.add_argument("--window", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    sizes = args.size or [32, 128, 256, 512]

    rng = np.random.default_rng(0)
    print(f"{'size':>6} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}  identical")
    for n in sizes:
        y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        p = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        args_ = (y, p, 0.8, args.window, 0.5)
        t_py = min(timeit.repeat(lambda: _shrink_py.shrink_subband(*args_), number=1,
                                 repeat=args.repeat)) * 1e3
        if _shrink_c is None:
            print(f"{n:>6} {t_py:>12.2f} {'n/a':>12} {'n/a':>8}  n/a")
            continue
        t_c = min(timeit.repeat(lambda: _shrink_c.shrink_subband(*args_), number=1,
                                repeat=args.repeat)) * 1e3
        same = np.array_equal(_shrink_py.shrink_subband(*args_), _shrink_c.shrink_subband(*args_))
        print(f"{n:>6} {t_py:>12.2f} {t_c:>12.2f} {t_py / t_c:>8.2f}  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
