"""Time the compiled kernels against their pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case is checked for equal results before timing. Without a built
extension only the fallback column is filled in.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from kgt import _pykernels, toric

try:
    from kgt import _kernels
except ImportError:
    _kernels = None

CASES = [
    ("count_reduced_forms(-4*10**6)", "count_reduced_forms", (-4 * 10**6, True)),
    ("count_quadratic_roots(999_999)", "count_quadratic_roots", (999_999,)),
    ("sl2_subgroup_counts(30)", "sl2_subgroup_counts", (30,)),
    ("divisor_count_sieve(10**6)", "divisor_count_sieve", (10**6,)),
    ("distinct_prime_sieve(10**6)", "distinct_prime_sieve", (10**6,)),
    ("count_box_points(60 * 6P_Z1)", "count_box_points", None),
]


def _box_args():
    P = toric.six_pz1().dilate(60)
    lo, hi = P.bounding_box()
    return (P.normals(), [math.ceil(o) for o in P.offsets()], lo, hi)


def _same(x, y) -> bool:
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return bool(np.array_equal(np.asarray(x), np.asarray(y)))
    return x == y


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':<34}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for label, name, call_args in CASES:
        call_args = call_args if call_args is not None else _box_args()
        py = getattr(_pykernels, name)
        t_py = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{label:<34}{t_py:>12.4f}{'n/a':>12}{'':>10}")
            continue
        cy = getattr(_kernels, name)
        if not _same(py(*call_args), cy(*call_args)):
            raise SystemExit(f"backends disagree on {label}")
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=1, repeat=args.repeat))
        print(f"{label:<34}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
