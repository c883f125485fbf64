"""Type-token distributions and latent vocabulary size estimation."""

__version__ = "0.1.0"

from .corpus import (
    FrequencySpectrum,
    Observation,
    frequency_spectrum,
    sample_tokens,
    successive_prefixes,
    tokenize,
)
from .distributions import (
    ExactComputationInfeasible,
    SuccessProbs,
    TypeCountPMF,
    WordDistribution,
    exact_mgf,
    exact_subset_prob,
    exact_type_token_pmf,
    lecam_pmf,
    pb_moments,
    pb_pmf,
    pb_success_probs,
    poisson_unseen_approx,
)
from .estimators import (
    EstimateResult,
    good_turing,
    horvitz_thompson,
    mle_em_poisson,
    mle_grid,
    pb_log_likelihood,
)
from .models import GoodTuring, HorvitzThompson, ZipfPBEM, ZipfPBGrid
from .zipf import ZipfParams, zipf_distribution

__all__ = [
    "ExactComputationInfeasible",
    "EstimateResult",
    "FrequencySpectrum",
    "GoodTuring",
    "HorvitzThompson",
    "Observation",
    "SuccessProbs",
    "TypeCountPMF",
    "WordDistribution",
    "ZipfPBEM",
    "ZipfPBGrid",
    "ZipfParams",
    "exact_mgf",
    "exact_subset_prob",
    "exact_type_token_pmf",
    "frequency_spectrum",
    "good_turing",
    "horvitz_thompson",
    "lecam_pmf",
    "mle_em_poisson",
    "mle_grid",
    "pb_log_likelihood",
    "pb_moments",
    "pb_pmf",
    "pb_success_probs",
    "poisson_unseen_approx",
    "sample_tokens",
    "successive_prefixes",
    "tokenize",
    "zipf_distribution",
]
