"""Input validation helpers shared by the functional and estimator APIs."""

import math
import numbers

import numpy as np


def check_positive_int(value, name, minimum=1):
    """Return ``value`` as ``int`` after checking it is an integer >= minimum."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_finite_real(value, name, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if minimum is not None:
        if strict and value <= minimum:
            raise ValueError(f"{name} must be > {minimum}, got {value}")
        if not strict and value < minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_probability_vector(probs, atol=1e-12):
    """Validate a strictly positive probability vector summing to one.

    Returns a read-only float64 copy.
    """
    arr = np.array(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("probabilities must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("every probability must be finite and > 0")
    total = math.fsum(arr.tolist())
    if abs(total - 1.0) > atol:
        raise ValueError(f"probabilities sum to {total!r}, not 1 (atol={atol})")
    arr.setflags(write=False)
    return arr


def check_observation_arrays(observations):
    """Coerce observations to parallel ``(K, M)`` int64 arrays.

    Accepts a sequence of ``Observation`` objects, ``(K, M)`` pairs, or a
    2-column array.
    """
    if hasattr(observations, "K") and hasattr(observations, "M"):
        observations = [observations]
    rows = []
    for item in observations:
        if hasattr(item, "K") and hasattr(item, "M"):
            rows.append((item.K, item.M))
        else:
            pair = tuple(item)
            if len(pair) != 2:
                raise ValueError(f"observation must be a (K, M) pair, got {item!r}")
            rows.append(pair)
    if not rows:
        raise ValueError("at least one observation is required")
    ks = np.empty(len(rows), dtype=np.int64)
    ms = np.empty(len(rows), dtype=np.int64)
    for i, (k, m) in enumerate(rows):
        k = check_positive_int(k, "K")
        m = check_positive_int(m, "M")
        if k > m:
            raise ValueError(f"observation has K={k} > M={m}")
        ks[i] = k
        ms[i] = m
    return ks, ms


def check_a_grid(a_grid):
    grid = np.array(sorted(set(float(a) for a in a_grid)), dtype=np.float64)
    if grid.size == 0:
        raise ValueError("a_grid must be non-empty")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0:
        raise ValueError("a_grid values must be finite and >= 0")
    return grid
