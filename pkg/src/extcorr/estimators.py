"""scikit-learn compatible wrappers.

These estimators accept plain arrays or DataFrames, so the coefficient and
the subset ranking can sit inside a :class:`sklearn.pipeline.Pipeline`.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .corr import PrefixPolicy, corr_matrix
from .data import DataMatrix, add_noise
from .rho import RhoMode, lambda_trace, rank_subsets, rho_extended
from .spectral import lambda_max

__all__ = ["CorrelationSubsetSelector", "ExtendedCorrelation", "NoiseInjector"]


def _names(est, n):
    names = getattr(est, "feature_names_in_", None)
    if names is not None:
        return [str(c) for c in names]
    return [f"x{i}" for i in range(n)]


class ExtendedCorrelation(BaseEstimator):
    """Multivariable correlation coefficient of the columns of ``X``.

    Parameters
    ----------
    mode : {"instant", "rolling"}, default="instant"
        ``instant`` uses the correlation matrix of all rows; ``rolling``
        averages over the prefix trace.
    min_prefix : int or None, default=None
        First prefix length in rolling mode (``None`` -> n_features + 1).
    degenerate_rule : {"skip", "fail"}, default="skip"

    Attributes
    ----------
    correlation_ : ndarray of shape (n_features, n_features)
    lambda_max_ : float
        Largest eigenvalue of ``correlation_``.
    rho_eig_ : float
    rho_frob_ : float
    result_ : RhoResult
    trace_ : LambdaMaxTrace or None
        Only set in rolling mode.
    """

    def __init__(self, mode="instant", min_prefix=None, degenerate_rule="skip"):
        self.mode = mode
        self.min_prefix = min_prefix
        self.degenerate_rule = degenerate_rule

    def _policy(self):
        return PrefixPolicy(self.min_prefix, self.degenerate_rule)

    def _data(self, X, reset):
        X = validate_data(self, X, reset=reset, ensure_min_samples=2, ensure_min_features=2)
        return DataMatrix(tuple(_names(self, X.shape[1])), X)

    def fit(self, X, y=None):
        data = self._data(X, reset=True)
        mode = RhoMode(self.mode)
        policy = self._policy()
        r = corr_matrix(data)
        self.correlation_ = np.asarray(r)
        self.lambda_max_ = lambda_max(r)
        self.result_ = rho_extended(data, mode, policy)
        self.rho_eig_ = self.result_.rho_eig
        self.rho_frob_ = self.result_.rho_frob
        self.trace_ = lambda_trace(data, policy) if mode is RhoMode.ROLLING_MEAN else None
        return self

    def score(self, X, y=None):
        """``rho_eig`` of ``X`` under the fitted settings."""
        check_is_fitted(self)
        data = self._data(X, reset=False)
        return rho_extended(data, RhoMode(self.mode), self._policy()).rho_eig


class CorrelationSubsetSelector(SelectorMixin, BaseEstimator):
    """Keep the ``k`` features whose joint correlation with ``y`` is highest.

    Every ``k``-subset of features is scored exhaustively (at most 19
    features plus the target), so this is meant for small feature sets.

    Attributes
    ----------
    ranking_ : list of SubsetScore
        All subsets, best first.
    support_ : ndarray of bool
    """

    def __init__(self, k=2, mode="instant", min_prefix=None):
        self.k = k
        self.mode = mode
        self.min_prefix = min_prefix

    def fit(self, X, y):
        X, y = validate_data(self, X, y, ensure_min_samples=2, y_numeric=True)
        names = _names(self, X.shape[1])
        target = "__target__"
        while target in names:
            target = "_" + target
        data = DataMatrix(tuple(names) + (target,), np.column_stack([X, y]))
        self.ranking_ = rank_subsets(
            data, target, self.k, RhoMode(self.mode), PrefixPolicy(self.min_prefix)
        )
        best = set(self.ranking_[0].subset)
        self.support_ = np.array([c in best for c in names])
        return self

    def _get_support_mask(self):
        check_is_fitted(self)
        return self.support_


class NoiseInjector(TransformerMixin, BaseEstimator):
    """Add seeded uniform noise on ``[-amplitude, amplitude]`` to every cell.

    Stateless: ``fit`` only records the input width.
    """

    def __init__(self, amplitude=1.0, seed=0):
        self.amplitude = amplitude
        self.seed = seed

    def fit(self, X, y=None):
        validate_data(self, X, ensure_min_samples=2, ensure_min_features=2)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, reset=False, ensure_min_samples=2, ensure_min_features=2)
        noisy = add_noise(DataMatrix.from_array(X), self.amplitude, self.seed)
        return np.array(noisy.values)
