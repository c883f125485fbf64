"""Token sequences, frequency spectra and prefix datasets.

Tokenisation rule (version 1): Unicode-lowercase the text with ``str.lower``,
then split on every maximal run of characters that are not alphanumeric in
the sense of ``str.isalnum``.  Empty pieces are dropped.

Sampling uses NumPy's PCG64 bit generator seeded with the given integer and
inverse-CDF lookup (binary search over the cumulative probabilities).
"""

from collections import Counter
from dataclasses import dataclass
import csv
import io
import math
import re

import numpy as np

from ._validation import check_positive_int

TOKENIZER_VERSION = 1

_TOKEN_RE = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class Observation:
    """Number of distinct types ``K`` seen among ``M`` tokens."""

    K: int
    M: int

    def __post_init__(self):
        K = check_positive_int(self.K, "K")
        M = check_positive_int(self.M, "M")
        if K > M:
            raise ValueError(f"K={K} cannot exceed M={M}")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "M", M)

    def __iter__(self):
        yield self.K
        yield self.M


class FrequencySpectrum:
    """Counts ``f_k`` of types that occur exactly ``k`` times.

    Parameters
    ----------
    counts : mapping of int to int
        ``{k: f_k}``; zero-valued entries are rejected.
    """

    def __init__(self, counts):
        clean = {}
        for k, f in dict(counts).items():
            k = check_positive_int(k, "k")
            f = check_positive_int(f, "f_k", minimum=0)
            if f == 0:
                raise ValueError(f"f_{k} is zero; spectra store non-zero counts only")
            clean[k] = f
        if not clean:
            raise ValueError("frequency spectrum is empty")
        self._counts = dict(sorted(clean.items()))

    @classmethod
    def from_tokens(cls, tokens):
        return frequency_spectrum(tokens)

    @property
    def counts(self):
        return dict(self._counts)

    @property
    def M(self):
        return sum(k * f for k, f in self._counts.items())

    @property
    def K(self):
        return sum(self._counts.values())

    def f(self, k):
        return self._counts.get(k, 0)

    def items(self):
        return self._counts.items()

    def __eq__(self, other):
        return isinstance(other, FrequencySpectrum) and self._counts == other._counts

    def __repr__(self):
        return f"FrequencySpectrum({self._counts!r})"


def tokenize(text):
    """Split ``text`` into lowercase alphanumeric tokens.

    >>> tokenize("Alice's—Adventures!")
    ['alice', 's', 'adventures']
    """
    return _TOKEN_RE.findall(text.lower())


def frequency_spectrum(tokens):
    tokens = list(tokens)
    if not tokens:
        raise ValueError("cannot build a frequency spectrum from an empty sequence")
    return FrequencySpectrum(Counter(Counter(tokens).values()))


def successive_prefixes(tokens, n):
    """Nested datasets made of the first ``(M // n) * i`` tokens, ``i = 1..n``.

    Returns
    -------
    list of Observation
        ``(K_i, M_i)`` for each prefix.
    """
    tokens = list(tokens)
    n = check_positive_int(n, "n")
    M = len(tokens)
    if n > M:
        raise ValueError(f"cannot cut {n} prefixes from {M} tokens")
    step = M // n
    seen = set()
    out = []
    for i in range(1, n + 1):
        seen.update(tokens[(i - 1) * step:i * step])
        out.append(Observation(len(seen), i * step))
    return out


def sample_tokens(dist, M, seed):
    """Draw ``M`` i.i.d. type IDs (1-based) from ``dist``.

    Deterministic in ``(seed, dist, M)``.
    """
    M = check_positive_int(M, "M")
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    u = rng.random(M)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, dist.n_types - 1) + 1


def derive_seed(master_seed, *keys):
    """Independent 63-bit seed for a replicate, mixing ``keys`` into ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# -- file formats -----------------------------------------------------------

def read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def spectrum_to_csv(spectrum):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "f_k"])
    writer.writerows(spectrum.items())
    return buf.getvalue()


def spectrum_from_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or [c.strip() for c in rows[0]] != ["k", "f_k"]:
        raise ValueError("spectrum CSV must start with header 'k,f_k'")
    return FrequencySpectrum({int(k): int(f) for k, f in rows[1:]})


def observations_to_csv(observations):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["K", "M"])
    writer.writerows((o.K, o.M) for o in observations)
    return buf.getvalue()


def observations_from_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or [c.strip() for c in rows[0]] != ["K", "M"]:
        raise ValueError("observation CSV must start with header 'K,M'")
    return [Observation(int(k), int(m)) for k, m in rows[1:]]


def default_prefix_count(M):
    """One prefix per 50 tokens, as in the simulation protocol; at least one."""
    return max(1, math.floor(M / 50))
