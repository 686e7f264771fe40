"""scikit-learn style wrappers around the functional core.

The transformers treat a collection of domains (or test functions) as the
sample axis and emit one row of numbers per item, so they can sit inside a
``Pipeline`` next to ordinary feature transformers.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_domain, check_domains, check_order, check_scalar, check_series_order
from .conformal import riemann_map
from .hardy_sobolev import TestFunction, hs_ratio
from .measures import deficit


class DeficitTransformer(TransformerMixin, BaseEstimator):
    """Map each domain to ``[lhs, rhs, deficit]`` for the weight ``|x|^p``."""

    def __init__(self, p: float = 0.0, quad_order: int = 256, tol: float = 1e-9):
        self.p = p
        self.quad_order = quad_order
        self.tol = tol

    def fit(self, X=None, y=None):
        check_scalar(self.p, "p", lo=-1)
        check_order(self.quad_order)
        check_scalar(self.tol, "tol", lo=0)
        self.n_features_out_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        reports = [deficit(d, self.p, self.tol, self.quad_order) for d in check_domains(X)]
        self.verdicts_ = [r.verdict for r in reports]
        return np.array([[r.lhs, r.rhs, r.deficit] for r in reports])

    def get_feature_names_out(self, input_features=None):
        return np.array(["lhs", "rhs", "deficit"], dtype=object)


class HSRatioTransformer(TransformerMixin, BaseEstimator):
    """Map each gauge test function to ``[||u||_r, C * int |grad u| |x|^p, ratio]``."""

    def __init__(self, p: float = 0.0):
        self.p = p

    def fit(self, X=None, y=None):
        check_scalar(self.p, "p", lo=-1, hi=1, lo_open=True)
        self.n_features_out_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        funcs = [u if isinstance(u, TestFunction) else TestFunction.from_dict(u) for u in X]
        return np.array([list(hs_ratio(u, self.p)) for u in funcs])

    def get_feature_names_out(self, input_features=None):
        return np.array(["lhs", "rhs", "ratio"], dtype=object)


class ConformalMap(TransformerMixin, BaseEstimator):
    """Riemann map ``h: B_1 -> Omega`` with ``h(0) = 0``, ``h'(0) > 0``.

    ``fit`` takes a single domain star-shaped about the origin; ``transform``
    sends complex points of the unit disk to ``Omega`` and
    ``inverse_transform`` pulls them back by Newton iteration.
    """

    def __init__(self, N: int = 256, tol: float = 1e-12, max_iter: int = 200):
        self.N = N
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        domain = check_domain(X)
        check_series_order(self.N)
        cd = riemann_map(domain, self.N, self.tol, self.max_iter)
        self.domain_ = domain
        self.data_ = cd
        self.coef_ = cd.h_coeffs
        self.conformal_radius_ = float(cd.G_coeffs[0].real)
        self.residual_ = cd.theodorsen_residual
        self.n_iter_ = cd.iterations
        return self

    def transform(self, X):
        check_is_fitted(self, "data_")
        w = np.asarray(X, dtype=complex)
        if np.any(np.abs(w) > 1 + 1e-12):
            raise ValueError("points must lie in the closed unit disk")
        return self.data_.h(w)

    def inverse_transform(self, X):
        check_is_fitted(self, "data_")
        y = np.asarray(X, dtype=complex)
        return self.data_.inverse(y.ravel()).reshape(y.shape)
