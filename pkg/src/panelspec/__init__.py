"""Bayesian time-varying mean and spectrum estimation for time series panels.

A covariate-dependent mixture of piecewise-stationary Gaussian components:
each component segments time adaptively and models the log spectrum within a
segment by a cosine smoothing spline; mixture weights follow a logit
stick-breaking construction over the covariates.  Inference is by MCMC with
exact imputation of missing values.
"""

from .errors import InvalidArgumentError, NumericalError, PanelSpecError
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "InvalidArgumentError",
    "NumericalError",
    "PanelSpecError",
    "RngStream",
    "__version__",
]
