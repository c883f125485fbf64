"""Independent reference computations used only by the tests.

Nothing here shares code with the package: these are brute-force
enumerations and textbook recurrences, kept deliberately naive.
"""

from fractions import Fraction
from functools import lru_cache
import itertools
import math


def enumerate_type_count_pmf(p, M):
    """P(K = k) by summing over all N**M token sequences."""
    N = len(p)
    pmf = [0.0] * (N + 1)
    terms = [[] for _ in range(N + 1)]
    for seq in itertools.product(range(N), repeat=M):
        prob = math.prod(p[i] for i in seq)
        terms[len(set(seq))].append(prob)
    for k in range(N + 1):
        pmf[k] = math.fsum(terms[k])
    return pmf


def enumerate_subset_prob(p, s, M):
    """Probability that the set of types seen in M tokens equals s (1-based)."""
    target = frozenset(i - 1 for i in s)
    return math.fsum(
        math.prod(p[i] for i in seq)
        for seq in itertools.product(range(len(p)), repeat=M)
        if frozenset(seq) == target
    )


def chapman_kolmogorov_subset_prob(p, s, M):
    """Same quantity from the one-token-at-a-time recurrence.

    P(s | m) = P(s | m-1) P(s) + sum_{i in s} P(s - {i} | m-1) p_i,
    with P(empty | 0) = 1.
    """

    @lru_cache(maxsize=None)
    def prob(subset, m):
        if m == 0:
            return 1.0 if not subset else 0.0
        if not subset:
            return 0.0
        mass = math.fsum(p[i - 1] for i in subset)
        stay = prob(subset, m - 1) * mass
        grow = math.fsum(prob(subset - {i}, m - 1) * p[i - 1] for i in subset)
        return stay + grow

    return prob(frozenset(s), M)


@lru_cache(maxsize=None)
def stirling2(n, k):
    """Stirling numbers of the second kind by the standard recurrence."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def uniform_type_count_pmf(N, M):
    """Exact rational P(K) for the uniform law: C(N,K) S(M,K) K! / N**M."""
    return [
        Fraction(math.comb(N, K) * stirling2(M, K) * math.factorial(K), N ** M)
        for K in range(N + 1)
    ]


def enumerate_pb_pmf(q):
    """Poisson-binomial PMF by summing over all 2**N success subsets."""
    N = len(q)
    terms = [[] for _ in range(N + 1)]
    for bits in itertools.product((0, 1), repeat=N):
        prob = math.prod(qi if b else 1.0 - qi for qi, b in zip(q, bits))
        terms[sum(bits)].append(prob)
    return [math.fsum(t) for t in terms]


def full_pb_pmf(q):
    """Plain O(N**2) convolution, list based (no numpy, no banding)."""
    f = [1.0]
    for qi in q:
        g = [0.0] * (len(f) + 1)
        for s, v in enumerate(f):
            g[s] += v * (1.0 - qi)
            g[s + 1] += v * qi
        f = g
    return f
