"""Tropical PCA: projections onto tropical linear spaces and curves, fits and Monte Carlo checks."""

from ._tropfit import (
    StiefelSpace,
    TropfitError,
    TropPoly2,
    blue_rule_project,
    canonicalize,
    contour_grid,
    fermat_weber,
    fit_hyperplane,
    fit_linear_curve,
    fit_quadratic_curve,
    fit_stiefel,
    hyperplane_distance,
    hyperplane_project,
    mc_center_bias,
    mc_mean_distance_to_h0,
    mc_projection_residual,
    membership_residual,
    project_to_curve,
    red_rule_residual,
    trop_distance,
    two_point_stiefel,
)

__all__ = [
    "StiefelSpace",
    "TropfitError",
    "TropPoly2",
    "blue_rule_project",
    "canonicalize",
    "contour_grid",
    "fermat_weber",
    "fit_hyperplane",
    "fit_linear_curve",
    "fit_quadratic_curve",
    "fit_stiefel",
    "hyperplane_distance",
    "hyperplane_project",
    "mc_center_bias",
    "mc_mean_distance_to_h0",
    "mc_projection_residual",
    "membership_residual",
    "project_to_curve",
    "red_rule_residual",
    "trop_distance",
    "two_point_stiefel",
]
