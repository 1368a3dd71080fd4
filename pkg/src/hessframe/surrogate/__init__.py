"""Function-value and gradient-enhanced surrogate models."""

from hessframe.surrogate.base import Dataset, Surrogate, predict
from hessframe.surrogate.kriging import (
    KrigingSurrogate,
    TuneResult,
    fit_kriging,
    kriging_scale_transform,
    log_likelihood,
    tune_kriging,
)
from hessframe.surrogate.polynomial import PolynomialSurrogate, fit_polynomial
from hessframe.surrogate.rbf import (
    DEFAULT_GRID,
    LoocvResult,
    RbfConfig,
    RbfSurrogate,
    fit_rbf,
    gaussian,
    gaussian_gradient,
    gaussian_hessian,
    rippa_loocv,
    rippa_residuals,
)

_KINDS = {"polynomial": PolynomialSurrogate, "rbf": RbfSurrogate, "kriging": KrigingSurrogate}


def surrogate_from_dict(d: dict) -> Surrogate:
    """Inverse of :meth:`Surrogate.to_dict`."""
    import numpy as np

    from hessframe.transform import DomainTransform

    cls = _KINDS[d["kind"]]
    t = DomainTransform.from_dict(d["transform"])
    hp = dict(d["hyperparameters"])
    w = np.asarray(d["weights"], dtype=float)
    flags = tuple(d.get("flags", ()))
    if cls is PolynomialSurrogate:
        return cls(w, t, flags=flags, **hp)
    centers = np.asarray(d["centers"], dtype=float).reshape(-1, t.dim)
    if cls is RbfSurrogate:
        return cls(w, t, centers=centers, flags=flags, **hp)
    hp["shapes"] = np.asarray(hp["shapes"], dtype=float)
    return cls(w, t, centers=centers, flags=flags, **hp)


__all__ = [
    "DEFAULT_GRID",
    "Dataset",
    "KrigingSurrogate",
    "LoocvResult",
    "PolynomialSurrogate",
    "RbfConfig",
    "RbfSurrogate",
    "Surrogate",
    "TuneResult",
    "fit_kriging",
    "fit_polynomial",
    "fit_rbf",
    "gaussian",
    "gaussian_gradient",
    "gaussian_hessian",
    "kriging_scale_transform",
    "log_likelihood",
    "predict",
    "rippa_loocv",
    "rippa_residuals",
    "surrogate_from_dict",
    "tune_kriging",
]
