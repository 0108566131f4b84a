"""Matching solver, level continuation and cluster analysis."""

from .matching import (
    BoundaryValues,
    SpectralPoint,
    eval_inner,
    eval_outer,
    mismatch,
    wronskian,
    node_count,
    find_levels,
    special_case_r0_zero,
    levels,
)
from .continuation import (
    LevelCurve,
    Cluster,
    ClusterKind,
    AsymptoticFit,
    scan_levels,
    scan_many,
    clusters,
    capture_radius,
    refine_capture_radius,
    fit_asymptotics,
    fit_small_r0,
    relative_spread,
)
from .radial import InnerProfile, OuterProfile, count_sign_changes, outer_far_radius

__all__ = [
    "BoundaryValues",
    "SpectralPoint",
    "eval_inner",
    "eval_outer",
    "mismatch",
    "wronskian",
    "node_count",
    "find_levels",
    "special_case_r0_zero",
    "levels",
    "LevelCurve",
    "Cluster",
    "ClusterKind",
    "AsymptoticFit",
    "scan_levels",
    "scan_many",
    "clusters",
    "capture_radius",
    "refine_capture_radius",
    "fit_asymptotics",
    "fit_small_r0",
    "relative_spread",
    "InnerProfile",
    "OuterProfile",
    "count_sign_changes",
    "outer_far_radius",
]
