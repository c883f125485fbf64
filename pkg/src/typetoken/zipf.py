"""Zipf laws ``p_k ∝ k**-a`` on ``1..N``."""

from dataclasses import dataclass
import math

import numpy as np

from ._validation import check_finite_real, check_positive_int
from .distributions import WordDistribution


@dataclass(frozen=True)
class ZipfParams:
    """Exponent ``a >= 0`` and support size ``N >= 1`` of a Zipf law."""

    a: float
    N: int

    def __post_init__(self):
        object.__setattr__(self, "a", check_finite_real(self.a, "a", minimum=0.0))
        object.__setattr__(self, "N", check_positive_int(self.N, "N"))


def zipf_probs(a, N):
    """Normalised Zipf probabilities as a plain array (no validation).

    The normaliser is summed with ``math.fsum`` so the result is correctly
    rounded; ``a == 0`` gives exactly ``1/N`` everywhere.
    """
    if a == 0.0:
        return np.full(N, 1.0 / N)
    weights = np.arange(1, N + 1, dtype=np.float64) ** -a
    return weights / math.fsum(weights.tolist())


def zipf_distribution(params):
    return WordDistribution(zipf_probs(params.a, params.N))
