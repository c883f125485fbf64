import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from typetoken import (
    FrequencySpectrum,
    GoodTuring,
    HorvitzThompson,
    Observation,
    WordDistribution,
    ZipfPBEM,
    ZipfPBGrid,
    mle_grid,
    sample_tokens,
    successive_prefixes,
)
from typetoken.zipf import zipf_probs


@pytest.fixture(scope="module")
def tokens():
    return sample_tokens(WordDistribution(zipf_probs(1.0, 40)), 800, seed=17)


def test_spectrum_models_accept_tokens_and_spectra():
    gt = GoodTuring().fit("a b a c".split())
    assert gt.n_types_ == 5.0
    ht = HorvitzThompson().fit(FrequencySpectrum({1: 2, 2: 1}))
    assert ht.n_types_ == pytest.approx(3.99238095238, rel=1e-10)
    assert GoodTuring().fit({1: 2, 2: 1}).n_types_ == 5.0


def test_params_and_clone():
    est = ZipfPBGrid(n_max=90, a_grid=(0.5, 1.0), n_prefixes=10)
    assert est.get_params() == {"n_max": 90, "a_grid": (0.5, 1.0), "a_tol": 1e-3, "n_prefixes": 10}
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    twin.set_params(n_max=50)
    assert est.n_max == 90
    assert set(ZipfPBEM().get_params()) == {
        "a_init", "lambda_init", "tol", "max_iter", "a_grid", "a_tol", "n_prefixes"}


def test_grid_model_matches_function(tokens):
    est = ZipfPBGrid(n_max=80, n_prefixes=16).fit(tokens)
    ref = mle_grid(successive_prefixes(tokens, 16), 80)
    assert est.n_types_ == ref.n_hat
    assert est.exponent_ == ref.a_hat
    assert est.score(est.observations_) == pytest.approx(ref.log_likelihood, abs=1e-9)


def test_grid_model_accepts_observation_pairs():
    obs = np.array([[3, 5], [5, 10], [6, 15]])
    a = ZipfPBGrid(n_max=20).fit(obs)
    b = ZipfPBGrid(n_max=20).fit([Observation(3, 5), Observation(5, 10), Observation(6, 15)])
    assert a.n_types_ == b.n_types_


def test_predict_expected_type_count(tokens):
    est = ZipfPBGrid(n_max=80, n_prefixes=16).fit(tokens)
    pred = est.predict([1, 100, 10**6])
    assert pred[0] == pytest.approx(1.0, abs=1e-12)
    assert pred[1] < pred[2] <= est.n_types_ + 1e-9
    assert pred[2] == pytest.approx(round(est.n_types_), rel=1e-6)


def test_em_model(tokens):
    est = ZipfPBEM(a_grid=(0.5, 1.0, 1.5), n_prefixes=8).fit(tokens)
    assert est.converged_
    assert est.n_types_ == est.lambda_
    assert est.n_types_ > len(set(tokens.tolist())) - 5


def test_unfitted_predict_raises():
    with pytest.raises(NotFittedError):
        ZipfPBGrid().predict([10])
