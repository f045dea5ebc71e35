"""Greedy routing simulator for Kleinberg's augmented grid G(n, r, p, q).

Shortcuts are generated on demand by dynamic rejection sampling, so no
graph is ever materialized and grids with trillions of nodes are cheap.
"""

from ._backend import DEFAULT as BACKEND
from .experiments import (
    ExponentEstimate,
    SweepRow,
    ThresholdResult,
    conjectured_exponent,
    estimate_exponent,
    find_r_opt,
    find_threshold,
    robustness_thresholds,
    six_degrees_scenarios,
    sweep_over_n,
    sweep_over_r,
)
from .lattice import Coord, GridParams, Offset, local_step, manhattan, neighborhood_size
from .output import OutputTable, emit_tsv
from .router import EdtEstimate, EstimateConfig, best_shortcut, estimate_edt, route_once
from .sampler import (
    RadiusWeights,
    ShortcutStream,
    acceptance_rate,
    build_radius_weights,
    draw_radius,
    draw_shortcut,
    offset_from_angle,
    oracle_shortcut_distribution,
)

__all__ = [
    "BACKEND", "Coord", "EdtEstimate", "EstimateConfig", "ExponentEstimate", "GridParams", "Offset",
    "OutputTable", "RadiusWeights", "ShortcutStream", "SweepRow", "ThresholdResult", "acceptance_rate",
    "best_shortcut", "build_radius_weights", "conjectured_exponent", "draw_radius", "draw_shortcut",
    "emit_tsv", "estimate_edt", "estimate_exponent", "find_r_opt", "find_threshold", "local_step",
    "manhattan", "neighborhood_size", "offset_from_angle", "oracle_shortcut_distribution",
    "robustness_thresholds", "route_once", "six_degrees_scenarios", "sweep_over_n", "sweep_over_r",
]
