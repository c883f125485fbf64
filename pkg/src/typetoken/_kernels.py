"""Compiled inner loops for Poisson-binomial log-likelihoods."""

import numba
import numpy as np

_RESCALE_TRIGGER = 1e-250
_RESCALE_FLOOR = 1e-100


@numba.njit(cache=True, fastmath=True)
def _convolve_band(src, dst, lo, hi, miss, succ):
    # unsigned indices: numba skips the negative-index wraparound branch,
    # which otherwise blocks vectorisation of this loop
    one = np.uint64(1)
    base = np.uint64(lo)
    for t in range(np.uint64(hi - lo + 1)):
        s = base + np.uint64(t)
        dst[s] = src[s] * miss + src[s - one] * succ


@numba.njit(cache=True)
def _log_pb_mass(miss, succ, K, A, B):
    """log P(S = K) for S a sum of Bernoulli(succ[j]) variables.

    Runs the convolution recurrence only over the band of partial sums that
    can still end at ``K``.  Buffers hold ``P(S = s)`` at index ``s + 1`` so
    index 0 is a permanent zero pad.  The band is rescaled whenever a running
    lower bound on its maximum gets close to underflow.
    """
    N = succ.shape[0]
    if K < 0 or K > N:
        return -np.inf
    for s in range(K + 2):
        A[s] = 0.0
        B[s] = 0.0
    A[1] = 1.0
    src, dst = A, B
    log_scale = 0.0
    guard = 1.0
    for j in range(N):
        hi = min(j + 1, K) + 1
        lo = max(0, K - (N - j - 1)) + 1
        rj = miss[j]
        qj = succ[j]
        _convolve_band(src, dst, lo, hi, rj, qj)
        src, dst = dst, src
        guard *= min(rj, qj)
        if guard < _RESCALE_TRIGGER:
            m = 0.0
            for s in range(lo, hi + 1):
                if src[s] > m:
                    m = src[s]
            if m == 0.0:
                return -np.inf
            if m < _RESCALE_FLOOR:
                inv = 1.0 / m
                for s in range(lo, hi + 1):
                    src[s] *= inv
                log_scale += np.log(m)
                guard = 1.0
            else:
                guard = m
    if src[K + 1] <= 0.0:
        return -np.inf
    return np.log(src[K + 1]) + log_scale


@numba.njit(cache=True)
def log_pb_masses(log_miss_rate, Ms, Ks):
    """``log Q(K_i | M_i)`` for each row, given ``log(1 - p_j)`` per type."""
    N = log_miss_rate.shape[0]
    out = np.empty(Ms.shape[0])
    miss = np.empty(N)
    succ = np.empty(N)
    size = max(Ks.max(), 0) + 2
    A = np.empty(size)
    B = np.empty(size)
    for i in range(Ms.shape[0]):
        M = Ms[i]
        for j in range(N):
            x = M * log_miss_rate[j]
            miss[j] = np.exp(x)
            succ[j] = -np.expm1(x)
        out[i] = _log_pb_mass(miss, succ, Ks[i], A, B)
    return out


def log_pb_mass(miss, succ, K):
    """Single-row wrapper: log-probability that exactly ``K`` successes occur."""
    miss = np.ascontiguousarray(miss, dtype=np.float64)
    succ = np.ascontiguousarray(succ, dtype=np.float64)
    K = int(K)
    size = max(K, 0) + 2
    return float(_log_pb_mass(miss, succ, K, np.empty(size), np.empty(size)))
