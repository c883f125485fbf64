"""scikit-learn style wrappers around the latent-type estimators.

All estimators take the data as the ``X`` argument of ``fit``:

* a token sequence (list of words or type IDs) or a :class:`FrequencySpectrum`
  for :class:`GoodTuring` and :class:`HorvitzThompson`;
* a token sequence, or ``(K, M)`` observations, for the Zipf
  Poisson-binomial estimators.  Token sequences are cut into successive
  prefixes first.

After fitting, ``n_types_`` holds the estimated number of latent types.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_observation_arrays, check_positive_int
from .corpus import (
    FrequencySpectrum,
    Observation,
    default_prefix_count,
    frequency_spectrum,
    successive_prefixes,
)
from .distributions import WordDistribution, pb_moments, pb_success_probs
from .estimators import (
    DEFAULT_A_GRID,
    DEFAULT_A_TOL,
    _ZipfLikelihood,
    good_turing,
    horvitz_thompson,
    mle_em_poisson,
    mle_grid,
)
from .zipf import zipf_probs


def _as_spectrum(X):
    if isinstance(X, FrequencySpectrum):
        return X
    if isinstance(X, dict):
        return FrequencySpectrum(X)
    return frequency_spectrum(X)


def _looks_like_observations(X):
    if isinstance(X, np.ndarray):
        return X.ndim == 2 and X.shape[1] == 2
    items = list(X[:1]) if hasattr(X, "__getitem__") else []
    return bool(items) and (isinstance(items[0], Observation) or np.ndim(items[0]) == 1)


def _as_observations(X, n_prefixes=None):
    """Observations from ``(K, M)`` pairs or from a raw token sequence."""
    if isinstance(X, Observation):
        X = [X]
    if _looks_like_observations(X):
        ks, ms = check_observation_arrays(X)
        return [Observation(int(k), int(m)) for k, m in zip(ks, ms)]
    tokens = list(X)
    if not tokens:
        raise ValueError("empty token sequence")
    n = default_prefix_count(len(tokens)) if n_prefixes is None else n_prefixes
    return successive_prefixes(tokens, n)


class _SpectrumEstimator(BaseEstimator):
    _estimate = None

    def fit(self, X, y=None):
        """Estimate the latent type count from tokens or a frequency spectrum."""
        self.spectrum_ = _as_spectrum(X)
        self.result_ = type(self)._estimate(self.spectrum_)
        self.n_types_ = self.result_.n_hat
        return self


class GoodTuring(_SpectrumEstimator):
    """``n_types_ = f_1 + K``."""

    _estimate = staticmethod(good_turing)


class HorvitzThompson(_SpectrumEstimator):
    """``n_types_ = sum_k f_k / (1 - (1 - k/M)**M)``."""

    _estimate = staticmethod(horvitz_thompson)


class _ZipfPBBase(BaseEstimator):

    def _observations(self, X):
        return _as_observations(X, self.n_prefixes)

    def _fitted_distribution(self):
        check_is_fitted(self, "n_types_")
        n = max(1, int(round(self.n_types_)))
        return WordDistribution(zipf_probs(self.exponent_, n))

    def predict(self, X):
        """Expected number of distinct types seen in each token count of ``X``.

        Uses the fitted Zipf law (support rounded to an integer).
        """
        dist = self._fitted_distribution()
        counts = np.atleast_1d(np.asarray(X))
        return np.array([
            pb_moments(pb_success_probs(dist, check_positive_int(int(m), "M")))[0]
            for m in counts.ravel()
        ]).reshape(counts.shape)

    def score(self, X, y=None):
        """Poisson-binomial log-likelihood of observations under the fit."""
        check_is_fitted(self, "n_types_")
        n = max(1, int(round(self.n_types_)))
        return _ZipfLikelihood(self._observations(X))(self.exponent_, n)


class ZipfPBGrid(_ZipfPBBase):
    """Maximum likelihood over Zipf laws with a brute-force scan of ``N``.

    Parameters
    ----------
    n_max : int, optional
        Largest support size scanned; defaults to twice the largest observed K.
    a_grid : sequence of float
        Exponent grid refined by golden-section search.
    a_tol : float
    n_prefixes : int, optional
        Number of successive prefixes cut from a token sequence; defaults to
        one per 50 tokens.
    """

    def __init__(self, n_max=None, a_grid=DEFAULT_A_GRID, a_tol=DEFAULT_A_TOL, n_prefixes=None):
        self.n_max = n_max
        self.a_grid = a_grid
        self.a_tol = a_tol
        self.n_prefixes = n_prefixes

    def fit(self, X, y=None):
        obs = self._observations(X)
        n_max = self.n_max if self.n_max is not None else 2 * max(o.K for o in obs)
        self.result_ = mle_grid(obs, n_max, a_grid=self.a_grid, a_tol=self.a_tol)
        self.observations_ = obs
        self.n_types_ = self.result_.n_hat
        self.exponent_ = self.result_.a_hat
        self.log_likelihood_ = self.result_.log_likelihood
        return self


class ZipfPBEM(_ZipfPBBase):
    """Zipf Poisson-binomial fit with a Poisson prior on the support size.

    ``n_types_`` is the fitted Poisson mean.
    """

    def __init__(self, a_init=1.0, lambda_init=None, tol=1e-6, max_iter=200,
                 a_grid=DEFAULT_A_GRID, a_tol=DEFAULT_A_TOL, n_prefixes=None):
        self.a_init = a_init
        self.lambda_init = lambda_init
        self.tol = tol
        self.max_iter = max_iter
        self.a_grid = a_grid
        self.a_tol = a_tol
        self.n_prefixes = n_prefixes

    def fit(self, X, y=None):
        obs = self._observations(X)
        self.result_ = mle_em_poisson(
            obs, a_init=self.a_init, lambda_init=self.lambda_init, tol=self.tol,
            max_iter=self.max_iter, a_grid=self.a_grid, a_tol=self.a_tol,
        )
        self.observations_ = obs
        self.n_types_ = self.result_.n_hat
        self.lambda_ = self.result_.lambda_hat
        self.exponent_ = self.result_.a_hat
        self.std_err_ = self.result_.std_err
        self.converged_ = self.result_.converged
        self.log_likelihood_ = self.result_.log_likelihood
        return self
