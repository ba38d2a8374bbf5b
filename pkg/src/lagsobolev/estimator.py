"""scikit-learn transformer expanding features in a Sobolev orthogonal basis."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .scalar import default_precision, real_context
from .sobolev import SobolevSpec, build_sequence


class SobolevPolynomialFeatures(TransformerMixin, BaseEstimator):
    """Map each input column ``x`` to ``[P_0(x), ..., P_degree(x)]``.

    ``P_n`` are the monic polynomials orthogonal for the Sobolev inner product
    with parameter ``alpha`` (or ``mu`` when ``kind="hermite"``) and the given
    derivative masses at 0.  Fitting only builds the basis; the data is
    checked for shape but does not influence it.

    With ``normalize=True`` every column is divided by the square root of the
    Sobolev norm, giving an orthonormal basis.
    """

    def __init__(self, degree=3, alpha=0, masses=None, kind="laguerre", normalize=False, precision=None):
        self.degree = degree
        self.alpha = alpha
        self.masses = masses
        self.kind = kind
        self.normalize = normalize
        self.precision = precision

    def _spec(self) -> SobolevSpec:
        if self.kind == "laguerre":
            return SobolevSpec.laguerre(self.alpha, self.masses or {})
        if self.kind == "hermite":
            return SobolevSpec.hermite(self.alpha, self.masses or {})
        raise ValueError(f"kind must be 'laguerre' or 'hermite', got {self.kind!r}")

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        if not isinstance(self.degree, (int, np.integer)) or self.degree < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.degree!r}")
        self.spec_ = self._spec()
        self.sequence_ = build_sequence(self.spec_, int(self.degree))
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "sequence_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        prec = self.precision or default_precision()
        ctx = real_context(prec)
        polys = [self.sequence_[n] for n in range(self.degree + 1)]
        scales = [1 / ctx.sqrt(ctx.mpf(int(nrm.numerator)) / int(nrm.denominator)) for nrm in self.sequence_.norms[: self.degree + 1]]
        out = np.empty((X.shape[0], X.shape[1] * (self.degree + 1)))
        for i, row in enumerate(X):
            col = 0
            for value in row:
                x = ctx.mpf(float(value))
                for n, p in enumerate(polys):
                    v = p.eval_real(x, prec)
                    out[i, col] = float(v * scales[n] if self.normalize else v)
                    col += 1
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "sequence_")
        if input_features is None:
            input_features = [f"x{i}" for i in range(self.n_features_in_)]
        return np.asarray([f"{name}_P{n}" for name in input_features for n in range(self.degree + 1)], dtype=object)
