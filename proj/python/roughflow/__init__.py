"""Step-2 rough-path flows with unbounded drift."""

from roughflow._core import (
    DriftField,
    ExplosionError,
    GroupElement,
    RoughPath,
    StiffnessError,
    VectorFields,
    chen_mul,
    dilate_element,
    distance,
    drift_preset,
    fit_sup_constant,
    flow,
    homogeneous_norm,
    inverse,
    is_geometric,
    lift_piecewise_linear,
    pvar_norm,
    sample_fbm,
    sigma_preset,
    solve_driftless,
)

__all__ = [
    "DriftField",
    "ExplosionError",
    "GroupElement",
    "RoughPath",
    "StiffnessError",
    "VectorFields",
    "chen_mul",
    "dilate_element",
    "distance",
    "drift_preset",
    "fit_sup_constant",
    "flow",
    "homogeneous_norm",
    "inverse",
    "is_geometric",
    "lift_piecewise_linear",
    "pvar_norm",
    "sample_fbm",
    "sigma_preset",
    "solve_driftless",
]
