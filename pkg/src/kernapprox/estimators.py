"""scikit-learn style estimators over the L1 machinery.

``TrigPolyL1Regressor`` fits a trigonometric polynomial to angle/value samples
by least absolute deviations; ``TrigFeatures`` exposes the trigonometric
design matrix as a transformer; ``BestMeanApproximator`` wraps the closed
forms and oracles for a kernel spec behind fit/predict.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exact import estimate_n0, exact_value_poisson
from .oracle import best_l1_interp_scan, best_l1_lp, l1_fit, l1_norm_residual
from .trigpoly import design_matrix
from .validation import check_angles, check_positive_int, check_spec


class TrigPolyL1Regressor(RegressorMixin, BaseEstimator):
    """Least-absolute-deviations fit of a trigonometric polynomial.

    Parameters
    ----------
    degree : int
        Maximum harmonic of the fitted polynomial.
    max_iter : int or None
        Simplex iteration cap; defaults to 50 times the number of samples.
    """

    def __init__(self, degree=1, max_iter=None):
        self.degree = degree
        self.max_iter = max_iter

    def fit(self, X, y, sample_weight=None):
        degree = check_positive_int(self.degree, "degree", minimum=0)
        t = check_angles(X)
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.size != t.size:
            raise ValueError(f"X has {t.size} samples but y has {y.size}")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite values")
        if t.size < 2 * degree + 1:
            raise ValueError(f"need at least {2 * degree + 1} samples for degree {degree}")
        w = None
        if sample_weight is not None:
            w = np.asarray(sample_weight, dtype=float).reshape(-1)
            if w.size != t.size or np.any(w < 0):
                raise ValueError("sample_weight must be non-negative, one per sample")
        fit = l1_fit(t, y, degree, w, max_iter=self.max_iter)
        self.poly_ = fit.poly
        self.coef_ = fit.poly.to_vector()
        self.l1_error_ = fit.value
        self.n_iter_ = fit.iterations
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "poly_")
        return self.poly_(check_angles(X))


class TrigFeatures(TransformerMixin, BaseEstimator):
    """Map angles to [1/2, cos t, sin t, ..., cos dt, sin dt] (or sines only)."""

    def __init__(self, degree=1, odd=False):
        self.degree = degree
        self.odd = odd

    def fit(self, X, y=None):
        check_positive_int(self.degree, "degree", minimum=0)
        check_angles(X)
        self.n_features_in_ = 1
        self.n_output_features_ = self.degree if self.odd else 2 * self.degree + 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_output_features_")
        phi = design_matrix(check_angles(X), self.degree)
        return phi[:, 2::2] if self.odd else phi


class BestMeanApproximator(RegressorMixin, BaseEstimator):
    """Best mean approximation of a kernel by polynomials of degree n-1.

    ``fit`` ignores its arguments; the kernel is a hyperparameter.
    ``predict`` evaluates the fitted polynomial at angles.

    method : {"closed_form", "lp", "scan"}
        ``closed_form`` needs a pure-Poisson spec; ``lp`` and ``scan`` work
        for any spec.
    """

    def __init__(self, kernel=None, n=1, method="closed_form", grid=2048):
        self.kernel = kernel
        self.n = n
        self.method = method
        self.grid = grid

    def fit(self, X=None, y=None):
        spec = check_spec(self.kernel)
        n = check_positive_int(self.n, "n")
        if self.method == "closed_form":
            res = exact_value_poisson(spec, n)
            self.poly_, self.value_, self.theta_ = res.poly, res.value, res.theta_n
            self.n0_ = estimate_n0(spec)
        elif self.method == "lp":
            fit = best_l1_lp(spec, n, check_positive_int(self.grid, "grid", 8 * n))
            self.poly_, self.value_, self.theta_ = fit.poly, fit.value / math.pi, None
        elif self.method == "scan":
            scan = best_l1_interp_scan(spec, n)
            self.poly_, self.value_ = scan.poly, scan.value / math.pi
            self.theta_ = scan.xi * n / math.pi
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.spec_ = spec
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "poly_")
        return self.poly_(check_angles(X))

    def l1_error(self) -> float:
        """Adaptive integral of |K - T| over a period."""
        check_is_fitted(self, "poly_")
        return l1_norm_residual(lambda t: self.spec_(t, at_jump="mean") - self.poly_(t))
