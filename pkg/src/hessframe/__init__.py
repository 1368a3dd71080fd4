"""Curvature-based domain transformation for surrogate construction.

Estimate local Hessians from samples, average their rectified forms into a
global rotation + scaling, and fit RBF, polynomial or Kriging surrogates in
the transformed frame.
"""

from hessframe.sampling import latin_hypercube, make_rng, uniform_cloud
from hessframe.surrogate import (
    Dataset,
    RbfConfig,
    fit_kriging,
    fit_polynomial,
    fit_rbf,
    kriging_scale_transform,
    predict,
    rippa_loocv,
    tune_kriging,
)
from hessframe.transform import (
    DomainTransform,
    average_hessian,
    build_transform,
    ideal_transform,
    identity_transform,
    minmax_transform,
    quadfit_hessian,
    rectify,
    sr1_hessian,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DomainTransform",
    "RbfConfig",
    "average_hessian",
    "build_transform",
    "fit_kriging",
    "fit_polynomial",
    "fit_rbf",
    "ideal_transform",
    "identity_transform",
    "kriging_scale_transform",
    "latin_hypercube",
    "make_rng",
    "minmax_transform",
    "predict",
    "quadfit_hessian",
    "rectify",
    "rippa_loocv",
    "sr1_hessian",
    "tune_kriging",
    "uniform_cloud",
]
