"""Estimators of the latent number of types.

* :func:`good_turing` and :func:`horvitz_thompson` work on a frequency
  spectrum.
* :func:`mle_grid` maximises the Poisson-binomial likelihood of a list of
  ``(K, M)`` observations over Zipf laws, brute force over the support size.
* :func:`mle_em_poisson` puts a Poisson prior on the support size and fits its
  mean by expectation-maximisation.
"""

from dataclasses import dataclass, field, asdict
import logging
import math

import numpy as np
from scipy import special, stats

from ._kernels import log_pb_masses
from ._validation import (
    check_a_grid,
    check_finite_real,
    check_observation_arrays,
    check_positive_int,
)
from .corpus import FrequencySpectrum
from .zipf import zipf_probs

logger = logging.getLogger(__name__)

DEFAULT_A_GRID = tuple(round(0.1 * i, 1) for i in range(21))
DEFAULT_A_TOL = 1e-3
TIE_TOL = 1e-9

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class EstimateResult:
    """Output of a latent-type estimator.

    Attributes
    ----------
    n_hat : float
        Point estimate of the number of latent types.
    estimator : str
        Name tag (``"gt"``, ``"ht"``, ``"pb-grid"``, ``"pb-em"``).
    a_hat, log_likelihood, lambda_hat, std_err, converged
        Filled in by the likelihood-based estimators, ``None`` otherwise.
    details : dict
        Estimator specific diagnostics.
    """

    n_hat: float
    estimator: str
    a_hat: float = None
    log_likelihood: float = None
    lambda_hat: float = None
    std_err: float = None
    converged: bool = None
    details: dict = field(default_factory=dict, repr=False)

    def to_dict(self, with_details=False):
        out = {k: v for k, v in asdict(self).items() if k != "details" and v is not None}
        if with_details:
            out["details"] = self.details
        return out


def _check_spectrum(spectrum):
    if not isinstance(spectrum, FrequencySpectrum):
        spectrum = FrequencySpectrum(spectrum)
    return spectrum


def good_turing(spectrum):
    """``f_1 + K``: observed types plus one more per singleton."""
    spectrum = _check_spectrum(spectrum)
    return EstimateResult(n_hat=float(spectrum.f(1) + spectrum.K), estimator="gt")


def horvitz_thompson(spectrum):
    """Inverse inclusion-probability estimate ``sum_k f_k / (1 - (1 - k/M)**M)``."""
    spectrum = _check_spectrum(spectrum)
    M = spectrum.M
    terms = []
    for k, f in spectrum.items():
        if k == M:
            terms.append(float(f))
        else:
            terms.append(f / -math.expm1(M * math.log1p(-k / M)))
    return EstimateResult(n_hat=math.fsum(terms), estimator="ht")


# -- Poisson-binomial likelihood --------------------------------------------

class _ZipfLikelihood:
    """Cached ``log L(a, N)`` for a fixed set of observations.

    Observations are collapsed to distinct ``(K, M)`` rows with multiplicities.
    """

    def __init__(self, observations):
        ks, ms = check_observation_arrays(observations)
        rows, counts = np.unique(np.stack([ms, ks], axis=1), axis=0, return_counts=True)
        self.Ms = rows[:, 0].astype(np.float64)
        self.Ks = rows[:, 1].astype(np.int64)
        self.weights = counts.astype(np.float64)
        self.k_max = int(ks.max())
        self.n_observations = int(ks.size)
        self._cache = {}

    def __call__(self, a, N):
        key = (float(a), int(N))
        value = self._cache.get(key)
        if value is None:
            if N < self.k_max:
                value = -math.inf
            else:
                with np.errstate(divide="ignore"):
                    log_miss_rate = np.log1p(-zipf_probs(float(a), int(N)))
                terms = log_pb_masses(log_miss_rate, self.Ms, self.Ks)
                value = float(np.dot(self.weights, terms)) if np.all(np.isfinite(terms)) else -math.inf
            self._cache[key] = value
        return value


def pb_log_likelihood(observations, params):
    """Sum of ``log Q(K_i | M_i, Zipf(a, N))`` over the observations.

    Returns ``-inf`` when some ``K_i`` exceeds ``N``.
    """
    return _ZipfLikelihood(observations)(params.a, params.N)


def golden_section_max(func, lo, hi, tol=DEFAULT_A_TOL):
    """Maximise a unimodal ``func`` on ``[lo, hi]`` to bracket width ``tol``.

    Returns ``(x, func(x))`` for the best point evaluated.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    best = max((fc, -c, c), (fd, -d, d))
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
            best = max(best, (fc, -c, c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
            best = max(best, (fd, -d, d))
    return best[2], best[0]


def maximize_exponent(func, a_grid=DEFAULT_A_GRID, a_tol=DEFAULT_A_TOL):
    """Grid search over ``a_grid`` then golden-section refinement.

    Refinement runs on the interval between the grid neighbours of the best
    grid point.  The result is never worse than the best grid value.
    """
    grid = check_a_grid(a_grid)
    values = np.array([func(a) for a in grid])
    i = int(np.argmax(values))
    best_a, best_v = float(grid[i]), float(values[i])
    if grid.size == 1 or not math.isfinite(best_v):
        return best_a, best_v
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    a, v = golden_section_max(func, lo, hi, a_tol)
    if v > best_v:
        return a, v
    return best_a, best_v


def mle_grid(observations, n_max, a_grid=DEFAULT_A_GRID, a_tol=DEFAULT_A_TOL):
    """Maximum likelihood over Zipf laws, brute force over the support size.

    For every ``N`` from ``max K_i`` to ``n_max`` the exponent is fitted by
    :func:`maximize_exponent`.  Log-likelihood ties (within 1e-9) go to the
    smaller ``N``.

    Parameters
    ----------
    observations : sequence of Observation or (K, M) pairs
    n_max : int
        Largest support size considered.
    a_grid : sequence of float
        Exponent grid; defaults to ``0, 0.1, ..., 2.0``.
    a_tol : float
        Final bracket width of the golden-section refinement.

    Returns
    -------
    EstimateResult
        ``details["profile"]`` holds ``(N, a_hat(N), log L)`` for every ``N``.
    """
    lik = _ZipfLikelihood(observations)
    n_max = check_positive_int(n_max, "n_max")
    if n_max < lik.k_max:
        raise ValueError(f"n_max={n_max} is below the largest observed K={lik.k_max}")
    best = None
    profile = []
    for N in range(lik.k_max, n_max + 1):
        a, ll = maximize_exponent(lambda a: lik(a, N), a_grid, a_tol)
        profile.append((N, a, ll))
        if best is None or ll > best[2] + TIE_TOL:
            best = (N, a, ll)
    N, a, ll = best
    return EstimateResult(
        n_hat=float(N), estimator="pb-grid", a_hat=a, log_likelihood=ll,
        details={"profile": profile, "n_max": n_max},
    )


# -- EM with a Poisson prior on the support size ----------------------------

def log_marginal_likelihood(lik, a, lam, support):
    """``log sum_N Poisson(N | lam) L(a, N)`` over the integer ``support``."""
    Ns = np.asarray(support)
    joint = stats.poisson.logpmf(Ns, lam) + np.array([lik(a, N) for N in Ns])
    return float(special.logsumexp(joint))


def _support_upper(lam):
    return int(math.ceil(lam + 10.0 * math.sqrt(lam) + 10.0))


def mle_em_poisson(
    observations,
    a_init=1.0,
    lambda_init=None,
    tol=1e-6,
    max_iter=200,
    a_grid=DEFAULT_A_GRID,
    a_tol=DEFAULT_A_TOL,
    support=None,
):
    """Fit a Zipf exponent and a Poisson mean for the support size by EM.

    The support size ``N`` is latent with prior ``Poisson(lam)``.  Each
    iteration computes the posterior ``w(N) ∝ Poisson(N | lam) L(a, N)`` over
    a truncated range of ``N``, then sets ``lam`` to the posterior mean and
    ``a`` to the maximiser of ``sum_N w(N) log L(a, N)``.

    Parameters
    ----------
    observations : sequence of Observation or (K, M) pairs
    a_init : float
        Starting exponent.  Ignored when ``a_grid`` has a single value, in
        which case the exponent is held at that value.
    lambda_init : float, optional
        Starting Poisson mean; defaults to ``1.5 * max K_i``.
    tol : float
        Stop once ``|lam_new - lam| < tol * lam``.
    max_iter : int
    a_grid, a_tol
        Passed to :func:`maximize_exponent` in the exponent update.
    support : (int, int), optional
        Fixed inclusive range of ``N``.  By default the range is
        ``[max K_i, lam + 10 sqrt(lam) + 10]``, widened (never narrowed) as
        ``lam`` moves.

    Returns
    -------
    EstimateResult
        ``n_hat == lambda_hat``.  ``details["trace"]`` lists the marginal
        log-likelihood at the start of each iteration, ``std_err`` comes from
        the curvature of the profile log-likelihood in ``lam``.
    """
    lik = _ZipfLikelihood(observations)
    grid = check_a_grid(a_grid)
    a = float(grid[0]) if grid.size == 1 else check_finite_real(a_init, "a_init", minimum=0.0)
    lam = 1.5 * lik.k_max if lambda_init is None else lambda_init
    lam = check_finite_real(lam, "lambda_init", minimum=0.0, strict=True)
    tol = check_finite_real(tol, "tol", minimum=0.0, strict=True)
    max_iter = check_positive_int(max_iter, "max_iter")

    if support is not None:
        lo, hi = int(support[0]), int(support[1])
        if lo < lik.k_max or hi < lo:
            raise ValueError(f"support must satisfy {lik.k_max} <= lo <= hi")
        fixed_support = True
    else:
        lo, hi = lik.k_max, max(lik.k_max, _support_upper(lam))
        fixed_support = False

    trace = []
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        Ns = np.arange(lo, hi + 1)
        ll_N = np.array([lik(a, N) for N in Ns])
        joint = stats.poisson.logpmf(Ns, lam) + ll_N
        marginal = float(special.logsumexp(joint))
        trace.append(marginal)
        w = np.exp(joint - marginal)

        lam_new = math.fsum((Ns * w).tolist())
        if grid.size > 1:
            a = _update_exponent(lik, a, Ns, w, grid, a_tol)
        step = abs(lam_new - lam)
        lam = lam_new
        if not fixed_support:
            hi = max(hi, _support_upper(lam))
        logger.debug("em iter %d: lam=%.6g a=%.6g marginal=%.10g", n_iter, lam, a, marginal)
        if step < tol * lam:
            converged = True
            break

    Ns = np.arange(lo, hi + 1)
    final = log_marginal_likelihood(lik, a, lam, Ns)
    trace.append(final)
    std_err = _profile_std_err(lik, lam, Ns, grid, a, a_tol)
    return EstimateResult(
        n_hat=lam, estimator="pb-em", a_hat=a, log_likelihood=final, lambda_hat=lam,
        std_err=std_err, converged=converged,
        details={"trace": trace, "iterations": n_iter, "support": (lo, hi)},
    )


def _update_exponent(lik, a_old, Ns, w, grid, a_tol):
    # negligible posterior weights are left out of the exponent objective
    keep = w > 1e-14 * w.max()
    Ns_k, w_k = Ns[keep], w[keep]

    def expected_ll(b):
        return float(np.dot(w_k, [lik(b, N) for N in Ns_k]))

    a_new, v_new = maximize_exponent(expected_ll, grid, a_tol)
    # generalised EM: never accept a step that lowers the objective
    if v_new >= expected_ll(a_old):
        return a_new
    return a_old


def _profile_std_err(lik, lam, Ns, grid, a_hat, a_tol):
    h = max(1.0, lam / 100.0)
    if lam - h <= 0.0:
        return None

    def profile(x):
        if grid.size == 1:
            return log_marginal_likelihood(lik, a_hat, x, Ns)
        return maximize_exponent(lambda b: log_marginal_likelihood(lik, b, x, Ns), grid, a_tol)[1]

    curvature = (profile(lam + h) - 2.0 * profile(lam) + profile(lam - h)) / (h * h)
    if not curvature < 0.0:
        return None
    return 1.0 / math.sqrt(-curvature)
