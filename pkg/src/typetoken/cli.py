"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 refused infeasible exact
computation.
"""

import argparse
import json
import logging
import sys

from . import __version__
from .corpus import (
    default_prefix_count,
    frequency_spectrum,
    observations_from_csv,
    read_text,
    spectrum_from_csv,
    successive_prefixes,
    tokenize,
)
from .distributions import (
    ExactComputationInfeasible,
    exact_type_token_pmf,
    lecam_pmf,
    pb_pmf,
    pb_success_probs,
)
from .estimators import (
    DEFAULT_A_GRID,
    DEFAULT_A_TOL,
    good_turing,
    horvitz_thompson,
    mle_em_poisson,
    mle_grid,
)
from .simulate import (
    ESTIMATORS as SIM_ESTIMATORS,
    SUMMARY_COLUMNS,
    ExperimentConfig,
    full_config,
    rows_to_csv,
    run_experiment,
    write_outputs,
)
from .zipf import ZipfParams, zipf_distribution

logger = logging.getLogger("typetoken")

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2

ESTIMATE_CHOICES = ("gt", "ht", "pb-grid", "pb-em")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_a_grid(text):
    """``"start:stop:step"`` (inclusive) or a comma separated list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be > 0")
        n = int(round((stop - start) / step))
        return tuple(round(start + i * step, 12) for i in range(n + 1))
    return tuple(float(x) for x in text.split(",") if x.strip())


def _csv_list(kind):
    def parse(text):
        try:
            return tuple(kind(x) for x in text.split(",") if x.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    return parse


def build_parser():
    parser = _Parser(prog="typetoken", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("dist", help="distribution of the observed-type count K")
    d.add_argument("--family", choices=("exact", "pb", "lecam"), required=True)
    d.add_argument("--a", type=float, required=True, help="Zipf exponent")
    d.add_argument("--n", type=int, required=True, help="number of latent types")
    d.add_argument("--m", type=int, required=True, help="number of tokens")
    d.add_argument("--format", choices=("csv", "json"), default="csv")

    e = sub.add_parser("estimate", help="estimate the latent number of types")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="UTF-8 text file")
    src.add_argument("--spectrum", help="CSV with header k,f_k")
    src.add_argument("--observations", help="CSV with header K,M")
    e.add_argument("--estimators", type=_csv_list(str), default=None,
                   help=f"comma list from {','.join(ESTIMATE_CHOICES)}")
    e.add_argument("--prefixes", type=int, default=None,
                   help="successive prefixes cut from text (default M//50)")
    e.add_argument("--n-max", type=int, default=None,
                   help="largest N scanned by pb-grid (default 2 * max K)")
    e.add_argument("--a-grid", type=parse_a_grid, default=DEFAULT_A_GRID)
    e.add_argument("--a-tol", type=float, default=DEFAULT_A_TOL)
    e.add_argument("--a-init", type=float, default=1.0)
    e.add_argument("--lambda-init", type=float, default=None)
    e.add_argument("--tol", type=float, default=1e-6)
    e.add_argument("--max-iter", type=int, default=200)
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--out", default=None, help="write the report here instead of stdout")

    s = sub.add_parser("simulate", help="synthetic estimator comparison")
    s.add_argument("--preset", choices=("desk", "full"), default="desk",
                   help="full: N=1000, 100 replicates, five (M, a) cells")
    s.add_argument("--n-types", type=int, default=None)
    s.add_argument("--exponents", type=_csv_list(float), default=None)
    s.add_argument("--token-counts", type=_csv_list(int), default=None)
    s.add_argument("--replicates", type=int, default=None)
    s.add_argument("--prefixes", type=int, default=None,
                   help="prefixes per dataset (default M//50)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n-max", type=int, default=None)
    s.add_argument("--a-grid", type=parse_a_grid, default=DEFAULT_A_GRID)
    s.add_argument("--a-tol", type=float, default=DEFAULT_A_TOL)
    s.add_argument("--estimators", type=_csv_list(str), default=SIM_ESTIMATORS)
    s.add_argument("--out", default=".", help="directory for replicates.csv and summary.csv")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def cmd_dist(args, out):
    params = ZipfParams(args.a, args.n)
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    dist = zipf_distribution(params)
    if args.family == "exact":
        pmf = exact_type_token_pmf(dist, args.m)
    elif args.family == "pb":
        pmf = pb_pmf(pb_success_probs(dist, args.m))
    else:
        pmf = lecam_pmf(dist, args.m)
    if args.format == "csv":
        out.write(pmf.to_csv())
    else:
        json.dump({"K": pmf.support.tolist(), "prob": pmf.masses.tolist()}, out)
        out.write("\n")
    return EXIT_OK


def _load_estimate_input(args):
    """Returns ``(spectrum or None, observations or None)``."""
    if args.text is not None:
        tokens = tokenize(read_text(args.text))
        if not tokens:
            raise UsageError(f"{args.text}: no tokens found")
        n = args.prefixes if args.prefixes is not None else default_prefix_count(len(tokens))
        return frequency_spectrum(tokens), successive_prefixes(tokens, n)
    if args.spectrum is not None:
        return spectrum_from_csv(read_text(args.spectrum)), None
    return None, observations_from_csv(read_text(args.observations))


def cmd_estimate(args, out):
    spectrum, observations = _load_estimate_input(args)
    wanted = args.estimators
    if wanted is None:
        # pb-em is opt-in: it is much slower than the other three
        wanted = []
        if spectrum is not None:
            wanted += ["gt", "ht"]
        if observations is not None:
            wanted.append("pb-grid")
    unknown = [w for w in wanted if w not in ESTIMATE_CHOICES]
    if unknown:
        raise UsageError(f"unknown estimators: {', '.join(unknown)}")
    report = {}
    for name in wanted:
        if name in ("gt", "ht"):
            if spectrum is None:
                raise UsageError(f"{name} needs a frequency spectrum or text input")
            result = (good_turing if name == "gt" else horvitz_thompson)(spectrum)
        else:
            if observations is None:
                raise UsageError(f"{name} needs observations or text input")
            if name == "pb-grid":
                n_max = args.n_max if args.n_max is not None else 2 * max(o.K for o in observations)
                result = mle_grid(observations, n_max, a_grid=args.a_grid, a_tol=args.a_tol)
            else:
                result = mle_em_poisson(
                    observations, a_init=args.a_init, lambda_init=args.lambda_init,
                    tol=args.tol, max_iter=args.max_iter, a_grid=args.a_grid, a_tol=args.a_tol,
                )
        report[name] = result.to_dict()
    text = _render_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _render_report(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    columns = ["estimator", "n_hat", "a_hat", "lambda_hat", "log_likelihood", "std_err", "converged"]
    rows = [{"estimator": name, **values} for name, values in report.items()]
    return rows_to_csv(rows, columns)


def _simulation_config(args):
    if args.preset == "full":
        base = full_config(seed=args.seed)
    else:
        base = ExperimentConfig(seed=args.seed)
    overrides = {
        "n_types": args.n_types,
        "exponents": args.exponents,
        "token_counts": args.token_counts,
        "replicates": args.replicates,
        "prefixes_per_dataset": args.prefixes,
        "n_max": args.n_max,
    }
    kwargs = {k: getattr(base, k) for k in base.__dataclass_fields__}
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    if args.exponents is not None or args.token_counts is not None:
        kwargs["cells"] = None
    kwargs.update(seed=args.seed, a_grid=args.a_grid, a_tol=args.a_tol,
                  estimators=tuple(args.estimators))
    return ExperimentConfig(**kwargs)


def cmd_simulate(args, out):
    config = _simulation_config(args)
    rows, summary = run_experiment(config)
    write_outputs(rows, summary, config, args.out)
    if args.format == "csv":
        out.write(rows_to_csv(summary, SUMMARY_COLUMNS))
    else:
        json.dump(summary, out, indent=2)
        out.write("\n")
    return EXIT_OK


COMMANDS = {"dist": cmd_dist, "estimate": cmd_estimate, "simulate": cmd_simulate}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, out)
    except ExactComputationInfeasible as exc:
        print(f"typetoken: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, ValueError, TypeError, OSError) as exc:
        print(f"typetoken: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
