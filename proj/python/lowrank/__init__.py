"""Unbiased minimum-distortion low-rank matrix sampling."""

try:
    from ._lowrank import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # in-tree build: extension sits next to the package
    from _lowrank import *  # noqa: F401,F403

__all__ = [
    "svd",
    "truncate_rank",
    "sample_low_rank",
    "heavy_split",
    "build_plan",
    "expected_distortion",
    "lower_bound",
    "truncation_baseline",
    "enumerate_outcomes",
    "empirical_distortion",
    "empirical_unbiasedness",
    "verify_optimality",
]
