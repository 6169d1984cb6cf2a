"""
Command-line entry point: ``rigidpy <subcommand> [options]``.
"""
import argparse
import logging
import sys

from rigidpy.core.exceptions import (
    BudgetExceededError,
    CapExceededError,
    ConfigError,
    RigidityError,
)
from rigidpy.core.experiment import SUBCOMMANDS, ExperimentConfig, run_experiment
from rigidpy.core.formatting import TOOL_VERSION, combine_params

log = logging.getLogger("rigidpy")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_LIMIT = 3


def _common_options(parser):
    parser.add_argument("--config", help="YAML file with experiment settings.")
    parser.add_argument(
        "--in", dest="inputs", action="append", help="Input matrix file; may be repeated."
    )
    parser.add_argument("--base", help="Built-in matrix: h<n>, m<n> or ones<q>.")
    parser.add_argument("--p", type=int, help="Prime modulus.")
    parser.add_argument("--rank", type=int, help="Target rank r.")
    parser.add_argument("--n", type=int, help="Power or dimension.")
    parser.add_argument("--k", type=int, help="Prefix length or Walsh-Hadamard order.")
    parser.add_argument("--seed", type=int, help="64-bit rng seed.")
    parser.add_argument("--samples", type=int, help="Sample count for randomized paths.")
    parser.add_argument("--instances", type=int, help="Random instances for lift.")
    parser.add_argument(
        "--exhaustive",
        action="store_const",
        const=True,
        default=None,
        help="Scan every seed instead of sampling.",
    )
    parser.add_argument("--budget", type=int, help="Operation budget for searches.")
    parser.add_argument("--mode", choices=("boolean", "regular"))
    parser.add_argument("--method", choices=("exact", "oracle", "rank1"))
    parser.add_argument("--workers", type=int, help="Threads for partitioned searches.")
    parser.add_argument("--delta", type=float, help="Per-entry error rate of the base.")
    parser.add_argument("--eps", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--c", type=float)
    parser.add_argument("--q", type=int, help="Base matrix size for circuit-size.")
    parser.add_argument("--R", type=float, help="Rigidity value for circuit-size / obstruction.")
    parser.add_argument("--depth", type=int, help="Circuit depth.")
    parser.add_argument("--schedule", choices=("kron", "maj"))
    parser.add_argument("--out", help="Output file; stdout when omitted.")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging.")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rigidpy", description="Matrix rigidity experiments over small prime fields."
    )
    parser.add_argument("--version", action="version", version="rigidpy " + TOOL_VERSION)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        _common_options(sub.add_parser(name))
    return parser


def _configure_logging(verbose):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("rigidpy")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def config_from_args(args):
    params = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    if args.config:
        return ExperimentConfig.from_yaml(args.config, **params)
    return ExperimentConfig.from_dict(combine_params(params))


def main(argv=None):
    """
    Run the CLI and return its exit status: 0 on success, 2 for configuration
    errors, 3 when a size cap or work budget is exceeded, 1 otherwise.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = config_from_args(args)
        _, text = run_experiment(config)
    except ConfigError as err:
        print("rigidpy: configuration error: {0}".format(err), file=sys.stderr)
        return EXIT_CONFIG
    except (CapExceededError, BudgetExceededError) as err:
        print("rigidpy: {0}".format(err), file=sys.stderr)
        return EXIT_LIMIT
    except RigidityError as err:
        print("rigidpy: {0}".format(err), file=sys.stderr)
        return EXIT_ERROR
    except (AssertionError, TypeError, ValueError) as err:
        print("rigidpy: invalid input: {0}".format(err), file=sys.stderr)
        return EXIT_CONFIG
    if config.out is None:
        sys.stdout.write(text)
    else:
        log.info("wrote %s", config.out)
    return EXIT_OK
