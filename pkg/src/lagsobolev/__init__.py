"""Discrete Laguerre-Sobolev orthogonal polynomials: exact construction and asymptotic checks."""
from .polynomial import Polynomial
from .scalar import DEFAULT_PRECISION, PRECISION_ENV, default_precision, exact, gamma_ratio
from .sobolev import (
    OrthoSequence,
    SobolevSpec,
    build_fourier,
    build_gram,
    build_hermite,
    build_holed,
    build_recursive,
    build_sequence,
    sobolev_inner,
)
from .tables import ConvergenceRow

__version__ = "0.1.0"

__all__ = [
    "ConvergenceRow",
    "DEFAULT_PRECISION",
    "OrthoSequence",
    "PRECISION_ENV",
    "Polynomial",
    "SobolevPolynomialFeatures",
    "SobolevSpec",
    "build_fourier",
    "build_gram",
    "build_hermite",
    "build_holed",
    "build_recursive",
    "build_sequence",
    "default_precision",
    "exact",
    "gamma_ratio",
    "sobolev_inner",
]


def __getattr__(name):
    # scikit-learn is only imported when the estimator is used
    if name == "SobolevPolynomialFeatures":
        from .estimator import SobolevPolynomialFeatures

        return SobolevPolynomialFeatures
    raise AttributeError(name)
