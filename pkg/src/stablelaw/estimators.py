"""scikit-learn compatible front ends for the regression estimator."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .density import DEFAULT_TOL, pdf_values
from .estimator import EstimationConfig, normalize_and_fit
from .market import ReturnSeries, find_local_min, rolling_fit
from .sampler import sample

__all__ = ["LevyStableEstimator", "RollingLevyStable", "check_1d"]


def check_1d(X, min_samples: int = 1) -> np.ndarray:
    """Accept a 1-D array or a single-column 2-D array; return a flat float array."""
    X = check_array(X, ensure_2d=False, dtype=np.float64, ensure_min_samples=min_samples)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single feature, got {X.shape[1]}")
        X = X[:, 0]
    return X


class _ConfigMixin:
    def _config(self) -> EstimationConfig:
        return EstimationConfig(
            n_k_points=self.n_k_points,
            phi_floor=self.phi_floor,
            normalization_tol=self.normalization_tol,
            max_normalization_iters=self.max_normalization_iters,
            alpha_clamp=self.alpha_clamp,
        )


class LevyStableEstimator(_ConfigMixin, TransformerMixin, BaseEstimator):
    """Fit a stable law to a univariate sample.

    After ``fit`` the estimates are available as ``alpha_``, ``beta_``,
    ``gamma_`` and ``delta_`` (original data units).  ``transform`` maps data
    to the normalized scale ``(x - delta_) / gamma_``.

    Examples
    --------
    >>> from stablelaw import LevyStableEstimator, make_params, sample
    >>> x = sample(make_params(1.6, 0.0, 0.02, 0.0), 5000, seed=0).values
    >>> est = LevyStableEstimator().fit(x)
    >>> round(est.gamma_, 2)
    0.02
    """

    def __init__(self, n_k_points=10, phi_floor=0.3, normalization_tol=1e-2,
                 max_normalization_iters=5, alpha_clamp=True):
        self.n_k_points = n_k_points
        self.phi_floor = phi_floor
        self.normalization_tol = normalization_tol
        self.max_normalization_iters = max_normalization_iters
        self.alpha_clamp = alpha_clamp

    def fit(self, X, y=None):
        X = check_1d(X, min_samples=100)
        result = normalize_and_fit(X, self._config())
        self.result_ = result
        self.params_ = result.params
        self.alpha_, self.beta_, self.gamma_, self.delta_ = result.params.as_tuple()
        self.n_iter_ = result.iterations
        self.flags_ = result.flags
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        return (X - self.delta_) / self.gamma_

    def inverse_transform(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        return X * self.gamma_ + self.delta_

    def score_samples(self, X, tol=DEFAULT_TOL):
        """Log-density of each observation under the fitted law."""
        check_is_fitted(self, "params_")
        X = check_1d(X)
        f = pdf_values(self.params_, X, tol)
        with np.errstate(divide="ignore"):
            return np.log(np.clip(f, 0.0, None))

    def score(self, X, y=None):
        return float(np.mean(self.score_samples(X)))

    def sample(self, n_samples=1, random_state=None):
        check_is_fitted(self, "params_")
        return sample(self.params_, n_samples, random_state).values


class RollingLevyStable(_ConfigMixin, BaseEstimator):
    """Day-by-day refits on a trailing window of returns.

    ``fit`` stores a :class:`~stablelaw.market.RollingResult` in ``result_``;
    ``alphas_`` and ``betas_`` are shortcuts to its tracks.
    """

    def __init__(self, window=1000, n_jobs=1, n_k_points=10, phi_floor=0.3,
                 normalization_tol=1e-2, max_normalization_iters=5, alpha_clamp=True):
        self.window = window
        self.n_jobs = n_jobs
        self.n_k_points = n_k_points
        self.phi_floor = phi_floor
        self.normalization_tol = normalization_tol
        self.max_normalization_iters = max_normalization_iters
        self.alpha_clamp = alpha_clamp

    def fit(self, X, y=None):
        if not isinstance(X, ReturnSeries):
            X = check_1d(X)
        self.result_ = rolling_fit(X, self.window, self._config(), n_jobs=self.n_jobs)
        self.alphas_ = self.result_.alphas
        self.betas_ = self.result_.betas
        return self

    def local_minimum(self, track="alpha", date_range=None):
        check_is_fitted(self, "result_")
        return find_local_min(self.result_, track, date_range)
