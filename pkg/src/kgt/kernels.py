"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when
``KGT_PURE_PYTHON`` is set to a non-empty value, the pure-Python versions.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("KGT_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

count_reduced_forms = _impl.count_reduced_forms
count_quadratic_roots = _impl.count_quadratic_roots
count_box_points = _impl.count_box_points
sl2_subgroup_counts = _impl.sl2_subgroup_counts
divisor_count_sieve = _impl.divisor_count_sieve
distinct_prime_sieve = _impl.distinct_prime_sieve

__all__ = [
    "BACKEND",
    "count_box_points",
    "count_quadratic_roots",
    "count_reduced_forms",
    "distinct_prime_sieve",
    "divisor_count_sieve",
    "sl2_subgroup_counts",
]
