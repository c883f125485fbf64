"""Distributions of the number of distinct types seen in a sample of tokens.

Two families are provided for a latent word distribution ``p_1..p_N`` and a
token count ``M``:

* the exact type-token distribution, obtained by inclusion-exclusion over
  subsets of types (only tractable for ``N <= 20``), and
* the Poisson-binomial approximation, in which type ``i`` is seen
  independently with probability ``q_i = 1 - (1 - p_i)**M``.

A Le Cam style Poisson approximation of the unseen-type count is also
available.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import stats

from ._validation import check_positive_int, check_probability_vector

#: Largest support size for which subset enumeration is attempted.
EXACT_MAX_TYPES = 20

_NEGATIVE_ROUNDOFF = 1e-14


class ExactComputationInfeasible(ValueError):
    """Raised when an exact computation would enumerate too many subsets."""


@dataclass(frozen=True)
class WordDistribution:
    """Latent distribution over the type IDs ``1..N``.

    Parameters
    ----------
    probs : array_like
        Strictly positive probabilities summing to one (within 1e-12).
    """

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", check_probability_vector(self.probs))

    @classmethod
    def uniform(cls, n_types):
        n_types = check_positive_int(n_types, "n_types")
        return cls(np.full(n_types, 1.0 / n_types))

    @classmethod
    def from_weights(cls, weights):
        """Normalise non-negative ``weights`` with exactly rounded summation."""
        w = np.asarray(weights, dtype=np.float64)
        return cls(w / math.fsum(w.tolist()))

    @property
    def n_types(self):
        return int(self.probs.size)

    def __len__(self):
        return self.n_types


@dataclass(frozen=True)
class TypeCountPMF:
    """Probability mass function of the observed-type count ``K``.

    ``masses[j]`` is the probability of ``K = support_min + j``.
    """

    support_min: int
    masses: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=np.float64)
        if masses.ndim != 1 or masses.size == 0:
            raise ValueError("masses must be a non-empty 1-D array")
        if np.any(masses < 0.0) or not np.all(np.isfinite(masses)):
            raise ValueError("masses must be finite and non-negative")
        total = math.fsum(masses.tolist())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"masses sum to {total!r}, not 1")
        masses.setflags(write=False)
        object.__setattr__(self, "support_min", int(self.support_min))
        object.__setattr__(self, "masses", masses)

    @property
    def support(self):
        return np.arange(self.support_min, self.support_min + self.masses.size)

    @property
    def support_max(self):
        return self.support_min + self.masses.size - 1

    def pmf(self, k):
        """Mass at ``k`` (zero outside the stored support)."""
        j = int(k) - self.support_min
        if 0 <= j < self.masses.size:
            return float(self.masses[j])
        return 0.0

    def aligned(self, k_min, k_max):
        """Masses for ``K = k_min..k_max`` padded with zeros."""
        return np.array([self.pmf(k) for k in range(k_min, k_max + 1)])

    def mean(self):
        return math.fsum((self.support * self.masses).tolist())

    def var(self):
        mu = self.mean()
        return math.fsum(((self.support - mu) ** 2 * self.masses).tolist())

    def to_csv(self):
        lines = ["K,prob"]
        lines.extend(f"{k},{float(m)!r}" for k, m in zip(self.support, self.masses))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SuccessProbs:
    """Per-type observation probabilities ``q_i = 1 - (1 - p_i)**M``.

    ``miss`` holds the complements ``(1 - p_i)**M`` computed directly, so
    neither side loses precision to cancellation.
    """

    q: np.ndarray
    M: int
    miss: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        if q.ndim != 1 or q.size == 0:
            raise ValueError("q must be a non-empty 1-D array")
        if np.any(q <= 0.0) or np.any(q > 1.0):
            raise ValueError("every q_i must lie in (0, 1]")
        miss = 1.0 - q if self.miss is None else np.array(self.miss, dtype=np.float64)
        q.setflags(write=False)
        miss.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "miss", miss)
        object.__setattr__(self, "M", check_positive_int(self.M, "M"))

    @property
    def n_types(self):
        return int(self.q.size)


def _check_exact_size(n, what="N"):
    if n > EXACT_MAX_TYPES:
        raise ExactComputationInfeasible(
            f"exact computation infeasible for {what}={n} > {EXACT_MAX_TYPES}; "
            "use pb_pmf for the Poisson-binomial approximation"
        )


def _subset_sums(p):
    """Probability mass and cardinality of every subset of ``p``.

    Subsets are indexed by bitmask; built by doubling so the cost is 2**len(p).
    """
    sums = np.zeros(1)
    sizes = np.zeros(1, dtype=np.int64)
    for pi in p:
        sums = np.concatenate([sums, sums + pi])
        sizes = np.concatenate([sizes, sizes + 1])
    return sums, sizes


def _power_sums_by_size(p, M):
    """``S[k] = sum over |s| = k of P(s)**M`` for ``k = 0..N``."""
    sums, sizes = _subset_sums(p)
    powers = np.power(sums, M)
    order = np.argsort(sizes, kind="stable")
    bounds = np.searchsorted(sizes[order], np.arange(len(p) + 2))
    powers = powers[order]
    return [math.fsum(powers[bounds[k]:bounds[k + 1]].tolist()) for k in range(len(p) + 1)]


def exact_subset_prob(dist, s, M):
    """Probability that the types observed in ``M`` tokens are exactly ``s``.

    Inclusion-exclusion over the subsets ``t`` of ``s``::

        sum_{k=0}^{|s|-1} (-1)**k sum_{|t|=k} P(s \\ t)**M

    Parameters
    ----------
    dist : WordDistribution
    s : iterable of int
        Non-empty set of 1-based type IDs.
    M : int
        Number of tokens.
    """
    M = check_positive_int(M, "M")
    ids = sorted(set(int(i) for i in s))
    if not ids:
        raise ValueError("s must be non-empty")
    if ids[0] < 1 or ids[-1] > dist.n_types:
        raise ValueError(f"s must be a subset of 1..{dist.n_types}")
    _check_exact_size(len(ids), "|s|")
    p = dist.probs[np.array(ids) - 1]
    sums, sizes = _subset_sums(p)
    signs = np.where((len(ids) - sizes) % 2 == 0, 1.0, -1.0)
    return math.fsum((signs * np.power(sums, M)).tolist())


def exact_type_token_pmf(dist, M):
    """Exact distribution of the number of distinct types in ``M`` tokens.

    Uses ``P(K) = sum_{k=1}^{K} (-1)**(K-k) C(N-k, N-K) S_k`` where ``S_k``
    sums ``P(s)**M`` over all subsets of size ``k``.

    Returns
    -------
    TypeCountPMF
        Support ``1..min(M, N)``.

    Raises
    ------
    ExactComputationInfeasible
        If ``N > 20``.
    """
    M = check_positive_int(M, "M")
    n = dist.n_types
    _check_exact_size(n)
    S = _power_sums_by_size(dist.probs, M)
    k_top = min(M, n)
    masses = np.empty(k_top)
    for K in range(1, k_top + 1):
        terms = [(-1) ** (K - k) * math.comb(n - k, n - K) * S[k] for k in range(1, K + 1)]
        masses[K - 1] = math.fsum(terms)
    return TypeCountPMF(1, _clean_masses(masses))


def exact_mgf(dist, M, t):
    """Moment-generating function ``E[exp(t K)]`` from the closed form.

    ``sum_k S_k exp(k t) (1 - exp(t))**(N - k)``, independent of the PMF.
    """
    M = check_positive_int(M, "M")
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    n = dist.n_types
    _check_exact_size(n)
    S = _power_sums_by_size(dist.probs, M)
    one_minus = -math.expm1(t)
    return math.fsum(S[k] * math.exp(k * t) * one_minus ** (n - k) for k in range(1, n + 1))


def pb_success_probs(dist, M):
    """Observation probability of each type after ``M`` tokens."""
    M = check_positive_int(M, "M")
    with np.errstate(divide="ignore"):
        log_miss = M * np.log1p(-dist.probs)
    return SuccessProbs(q=-np.expm1(log_miss), M=M, miss=np.exp(log_miss))


def pb_pmf(q):
    """Poisson-binomial PMF of ``K`` over ``0..N`` by sequential convolution.

    Parameters
    ----------
    q : SuccessProbs or array_like
        Success probabilities; a bare array is accepted for convenience.
    """
    if isinstance(q, SuccessProbs):
        succ, miss = q.q, q.miss
    else:
        succ = np.asarray(q, dtype=np.float64)
        miss = 1.0 - succ
    f = np.zeros(succ.size + 1)
    f[0] = 1.0
    for j, (qj, rj) in enumerate(zip(succ, miss)):
        f[1:j + 2] = f[1:j + 2] * rj + f[:j + 1] * qj
        f[0] *= rj
    return TypeCountPMF(0, _clean_masses(f, renormalize=True))


def _clean_masses(masses, renormalize=False):
    neg = masses < 0.0
    if np.any(masses[neg] < -_NEGATIVE_ROUNDOFF):
        raise FloatingPointError(f"negative mass {masses.min()!r} beyond round-off")
    masses = np.where(neg, 0.0, masses)
    if renormalize:
        masses = masses / math.fsum(masses.tolist())
    return masses


def pb_moments(q):
    """Mean ``sum q_i`` and variance ``sum q_i (1 - q_i)`` of the PB law."""
    if isinstance(q, SuccessProbs):
        succ, miss = q.q, q.miss
    else:
        succ = np.asarray(q, dtype=np.float64)
        miss = 1.0 - succ
    return math.fsum(succ.tolist()), math.fsum((succ * miss).tolist())


def poisson_unseen_approx(dist, M):
    """Poisson approximation of the unseen-type count ``U = N - K``.

    ``U`` is Poisson-binomial with small probabilities ``u_i = (1 - p_i)**M``;
    it is approximated by ``Poisson(sum u_i)``.

    Returns
    -------
    lam : float
        Poisson mean ``sum u_i``.
    tv_bound : float
        Le Cam bound ``2 * sum u_i**2`` on ``sum_k |P(U=k) - Poisson(k)|``.
    """
    u = pb_success_probs(dist, M).miss
    return math.fsum(u.tolist()), 2.0 * math.fsum((u * u).tolist())


def lecam_pmf(dist, M):
    """PMF over ``K = 0..N`` implied by the Poisson approximation of ``U``.

    Poisson mass beyond ``U = N`` is lumped into ``K = 0``.
    """
    lam, _ = poisson_unseen_approx(dist, M)
    n = dist.n_types
    unseen = np.arange(n, -1, -1)
    masses = stats.poisson.pmf(unseen, lam)
    masses[0] = stats.poisson.sf(n - 1, lam)
    return TypeCountPMF(0, masses / math.fsum(masses.tolist()))
