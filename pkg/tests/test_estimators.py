from fractions import Fraction
import math

import numpy as np
import pytest
from scipy import stats
from hypothesis import given, settings, strategies as st

from typetoken import (
    FrequencySpectrum,
    Observation,
    WordDistribution,
    ZipfParams,
    good_turing,
    horvitz_thompson,
    mle_em_poisson,
    mle_grid,
    pb_log_likelihood,
    pb_pmf,
    pb_success_probs,
    sample_tokens,
    successive_prefixes,
)
from typetoken.estimators import golden_section_max, maximize_exponent
from typetoken.zipf import zipf_probs

from oracles import full_pb_pmf


def ht_oracle(counts):
    M = sum(k * f for k, f in counts.items())
    return sum(Fraction(f) / (1 - (1 - Fraction(k, M)) ** M) for k, f in counts.items())


def oracle_log_lik(observations, a, N):
    p = zipf_probs(a, N).tolist()
    total = 0.0
    for K, M in observations:
        if K > N:
            return -math.inf
        pmf = full_pb_pmf([1.0 - (1.0 - pi) ** M for pi in p])
        total += math.log(pmf[K])
    return total


# -- spectrum estimators ----------------------------------------------------

def test_good_turing_examples():
    assert good_turing(FrequencySpectrum({2: 1, 3: 4})).n_hat == 5
    assert good_turing(FrequencySpectrum({1: 2, 2: 1})).n_hat == 5.0


def test_horvitz_thompson_examples():
    assert horvitz_thompson(FrequencySpectrum({6: 1})).n_hat == 1.0
    got = horvitz_thompson(FrequencySpectrum({1: 2, 2: 1})).n_hat
    assert abs(got - float(Fraction(512, 175) + Fraction(16, 15))) < 1e-12


def test_horvitz_thompson_against_rationals():
    rng = np.random.default_rng(8)
    for _ in range(20):
        ks = rng.choice(np.arange(1, 15), size=rng.integers(1, 6), replace=False)
        counts = {int(k): int(rng.integers(1, 5)) for k in ks}
        got = horvitz_thompson(FrequencySpectrum(counts)).n_hat
        assert got == pytest.approx(float(ht_oracle(counts)), rel=1e-13)


@settings(max_examples=60)
@given(st.lists(st.integers(1, 20), min_size=1, max_size=200), st.permutations(range(1, 21)))
def test_spectrum_estimators_bounds_and_relabelling(tokens, perm):
    relabelled = [perm[t - 1] for t in tokens]
    K = len(set(tokens))
    for est in (good_turing, horvitz_thompson):
        a = est(FrequencySpectrum.from_tokens(tokens)).n_hat
        assert a >= K - 1e-9
        assert a == est(FrequencySpectrum.from_tokens(relabelled)).n_hat


def test_estimate_result_dict():
    r = good_turing(FrequencySpectrum({1: 1}))
    assert r.to_dict() == {"n_hat": 2.0, "estimator": "gt"}


# -- likelihood -------------------------------------------------------------

def test_log_likelihood_examples():
    assert pb_log_likelihood([Observation(1, 10)], ZipfParams(1.3, 1)) == 0.0
    ll = pb_log_likelihood([Observation(2, 2)], ZipfParams(0.0, 2))
    assert ll == pytest.approx(math.log(9 / 16), abs=1e-14)
    assert pb_log_likelihood([(3, 4)], ZipfParams(1.0, 2)) == -math.inf


def test_log_likelihood_is_log_of_product():
    obs = [(2, 3), (3, 6), (4, 9)]
    params = ZipfParams(0.8, 6)
    product = 1.0
    for K, M in obs:
        product *= pb_pmf(pb_success_probs(WordDistribution(zipf_probs(0.8, 6)), M)).pmf(K)
    assert pb_log_likelihood(obs, params) == pytest.approx(math.log(product), abs=1e-12)


def test_log_likelihood_against_oracle_dp():
    tokens = sample_tokens(WordDistribution(zipf_probs(1.0, 60)), 400, seed=3)
    obs = [tuple(o) for o in successive_prefixes(tokens, 8)]
    for a, N in [(0.0, 60), (1.0, 60), (1.4, 45), (0.6, 120)]:
        got = pb_log_likelihood(obs, ZipfParams(a, N))
        assert got == pytest.approx(oracle_log_lik(obs, a, N), rel=1e-11)


def test_log_likelihood_deep_tail():
    # K far below its mean: masses of order 1e-300 and beyond must stay finite in log space
    obs = [(5, 5000)]
    got = pb_log_likelihood(obs, ZipfParams(0.0, 200))
    assert math.isfinite(got) and got < -700


# -- optimisers -------------------------------------------------------------

def test_golden_section():
    x, v = golden_section_max(lambda t: -(t - 0.37) ** 2, 0.0, 1.0, tol=1e-6)
    assert abs(x - 0.37) < 1e-6


def test_maximize_exponent_never_worse_than_grid():
    f = lambda t: -abs(t - 1.23)
    x, v = maximize_exponent(f, (0.0, 0.5, 1.0, 1.5, 2.0), 1e-3)
    assert v >= max(f(g) for g in (0.0, 0.5, 1.0, 1.5, 2.0))
    assert abs(x - 1.23) < 1e-3


# -- mle_grid ---------------------------------------------------------------

def test_mle_grid_trivial():
    assert mle_grid([Observation(1, 10)], n_max=5).n_hat == 1
    r = mle_grid([Observation(3, 3)], n_max=3, a_grid=(0.0,))
    assert r.n_hat == 3 and r.a_hat == 0.0


def test_mle_grid_rejects_small_n_max():
    with pytest.raises(ValueError):
        mle_grid([Observation(4, 10)], n_max=3)


def test_mle_grid_certificate():
    tokens = sample_tokens(WordDistribution(zipf_probs(1.0, 30)), 600, seed=11)
    obs = successive_prefixes(tokens, 12)
    grid = (0.0, 0.5, 1.0, 1.5, 2.0)
    r = mle_grid(obs, n_max=60, a_grid=grid)
    for N in range(max(o.K for o in obs), 61):
        for a in grid:
            assert r.log_likelihood >= pb_log_likelihood(obs, ZipfParams(a, N)) - 1e-12
    assert r.n_hat >= max(o.K for o in obs)
    assert len(r.details["profile"]) == 61 - max(o.K for o in obs)


def test_mle_grid_tie_goes_to_smaller_n():
    # K=M=1 has probability 1 under every N
    r = mle_grid([Observation(1, 1)], n_max=7)
    assert r.n_hat == 1.0


def test_mle_grid_synthetic_recovery():
    tokens = sample_tokens(WordDistribution(zipf_probs(1.0, 50)), 2000, seed=0)
    r = mle_grid(successive_prefixes(tokens, 40), n_max=150)
    assert 40 <= r.n_hat <= 65


# -- EM ---------------------------------------------------------------------

def test_em_single_point_support():
    r = mle_em_poisson([Observation(3, 8)], support=(7, 7))
    assert r.lambda_hat == pytest.approx(7.0, abs=1e-12)
    assert r.n_hat == r.lambda_hat


def test_em_small_lambda():
    obs = [Observation(1, 10)]
    r = mle_em_poisson(obs, a_grid=(0.0,), lambda_init=3.0, tol=1e-8, max_iter=500)
    assert r.lambda_hat < 2.0
    assert r.a_hat == 0.0
    lams = np.linspace(0.01, 10.0, 1000)
    # direct maximisation of L(0, lam) over the same support
    lo, hi = r.details["support"]
    Ns = np.arange(lo, hi + 1)
    lik = np.array([math.exp(oracle_log_lik([(1, 10)], 0.0, int(N))) for N in Ns])
    marg = [np.log(np.dot(stats.poisson.pmf(Ns, l), lik)) for l in lams]
    assert abs(r.lambda_hat - lams[int(np.argmax(marg))]) < 0.02


def test_em_trace_monotone_and_converges():
    tokens = sample_tokens(WordDistribution(zipf_probs(1.0, 25)), 300, seed=5)
    obs = successive_prefixes(tokens, 6)
    r = mle_em_poisson(obs, a_grid=(0.0, 0.5, 1.0, 1.5, 2.0), max_iter=300)
    trace = r.details["trace"]
    assert all(b >= a - 1e-8 for a, b in zip(trace, trace[1:]))
    assert r.converged
    assert r.std_err is None or r.std_err > 0


def test_em_input_checks():
    with pytest.raises(ValueError):
        mle_em_poisson([Observation(2, 4)], lambda_init=0.0)
    with pytest.raises(ValueError):
        mle_em_poisson([Observation(2, 4)], tol=-1.0)
    with pytest.raises(ValueError):
        mle_em_poisson([Observation(5, 9)], support=(3, 10))


def test_em_flags_non_convergence():
    r = mle_em_poisson([Observation(3, 5)], a_grid=(1.0,), max_iter=1, tol=1e-15)
    assert r.converged is False
