"""Monte-Carlo comparison of latent-type estimators on synthetic Zipf corpora.

Each cell ``(M, a)`` draws ``replicates`` samples of ``M`` tokens from
``Zipf(a, n_types)``, cuts each into successive prefixes and runs the chosen
estimators.  Replicate ``r`` of cell ``c`` uses the seed
``derive_seed(seed, c, r)``, so results do not depend on execution order.
"""

from dataclasses import dataclass, field
import csv
import io
import logging
import math
from pathlib import Path

import numpy as np

from ._validation import check_a_grid, check_positive_int
from .corpus import default_prefix_count, derive_seed, frequency_spectrum, sample_tokens, successive_prefixes
from .estimators import DEFAULT_A_GRID, DEFAULT_A_TOL, good_turing, horvitz_thompson, mle_grid
from .zipf import ZipfParams, zipf_distribution

logger = logging.getLogger(__name__)

ESTIMATORS = ("gt", "ht", "pb-grid")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a simulation study.

    ``prefixes_per_dataset=None`` uses one prefix per 50 tokens and
    ``n_max=None`` scans support sizes up to ``2 * n_types``.  ``cells``
    overrides the full ``token_counts x exponents`` product.
    """

    n_types: int = 300
    exponents: tuple = (1.0,)
    token_counts: tuple = (1200,)
    replicates: int = 30
    prefixes_per_dataset: int = None
    seed: int = 0
    n_max: int = None
    a_grid: tuple = DEFAULT_A_GRID
    a_tol: float = DEFAULT_A_TOL
    estimators: tuple = ESTIMATORS
    cells: tuple = field(default=None)

    def __post_init__(self):
        check_positive_int(self.n_types, "n_types")
        check_positive_int(self.replicates, "replicates")
        if not self.token_counts and not self.cells:
            raise ValueError("token_counts must be non-empty")
        for m in self.token_counts:
            check_positive_int(m, "token count")
        if self.n_max is not None and self.n_max < self.n_types:
            raise ValueError(f"n_max={self.n_max} must be >= n_types={self.n_types}")
        check_a_grid(self.a_grid)
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")

    @property
    def effective_n_max(self):
        return 2 * self.n_types if self.n_max is None else self.n_max

    def cell_list(self):
        if self.cells is not None:
            return [(int(m), float(a)) for m, a in self.cells]
        return [(int(m), float(a)) for a in self.exponents for m in self.token_counts]


def full_config(seed=0):
    """The full-size study: N=1000, 100 replicates, N scanned up to 2000."""
    cells = ((1000, 1.0), (1500, 1.0), (2000, 1.0), (2000, 0.0), (2000, 0.5))
    return ExperimentConfig(n_types=1000, replicates=100, seed=seed, n_max=2000, cells=cells)


def run_replicate(config, cell_index, M, a, replicate):
    """Estimates for one synthetic corpus, as a flat dict."""
    seed = derive_seed(config.seed, cell_index, replicate)
    dist = zipf_distribution(ZipfParams(a, config.n_types))
    tokens = sample_tokens(dist, M, seed)
    spectrum = frequency_spectrum(tokens)
    row = {"M": M, "a": a, "replicate": replicate, "seed": seed, "K": spectrum.K}
    if "gt" in config.estimators:
        row["gt"] = good_turing(spectrum).n_hat
    if "ht" in config.estimators:
        row["ht"] = horvitz_thompson(spectrum).n_hat
    if "pb-grid" in config.estimators:
        n_prefix = config.prefixes_per_dataset or default_prefix_count(M)
        obs = successive_prefixes(tokens, n_prefix)
        n_max = max(config.effective_n_max, max(o.K for o in obs))
        fit = mle_grid(obs, n_max, a_grid=config.a_grid, a_tol=config.a_tol)
        row["pb-grid"] = fit.n_hat
        row["pb-grid_a"] = fit.a_hat
    return row


def run_experiment(config):
    """Run every cell; returns ``(replicate_rows, summary_rows)``."""
    rows = []
    cells = config.cell_list()
    for c, (M, a) in enumerate(cells):
        for r in range(config.replicates):
            rows.append(run_replicate(config, c, M, a, r))
        cell = [row for row in rows if row["M"] == M and row["a"] == a]
        logger.info("cell M=%d a=%g: %d replicates, mean K=%.2f", M, a, len(cell),
                    np.mean([row["K"] for row in cell]))
    order = {cell: c for c, cell in enumerate(cells)}
    rows.sort(key=lambda row: (order[(row["M"], row["a"])], row["replicate"]))
    return rows, summarize(rows, config)


def summarize(rows, config):
    """Mean and standard deviation per estimator per cell, plus mean K."""
    out = []
    for M, a in config.cell_list():
        cell = [row for row in rows if row["M"] == M and row["a"] == a]
        mean_k = math.fsum(row["K"] for row in cell) / len(cell)
        for name in config.estimators:
            values = np.array([row[name] for row in cell], dtype=np.float64)
            sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
            out.append({"M": M, "a": a, "estimator": name,
                        "mean": math.fsum(values.tolist()) / values.size,
                        "sd": sd, "mean_K": mean_k, "n": int(values.size)})
    return out


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(col, "")) for col in columns])
    return buf.getvalue()


def replicate_columns(config):
    cols = ["M", "a", "replicate", "seed", "K"]
    for name in config.estimators:
        cols.append(name)
        if name == "pb-grid":
            cols.append("pb-grid_a")
    return cols


SUMMARY_COLUMNS = ["M", "a", "estimator", "mean", "sd", "mean_K", "n"]


def write_outputs(rows, summary, config, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rep_path = out_dir / "replicates.csv"
    sum_path = out_dir / "summary.csv"
    rep_path.write_text(rows_to_csv(rows, replicate_columns(config)), encoding="utf-8", newline="")
    sum_path.write_text(rows_to_csv(summary, SUMMARY_COLUMNS), encoding="utf-8", newline="")
    return rep_path, sum_path
