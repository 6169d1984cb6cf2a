"""
Experiment configuration and drivers.

Each subcommand maps an ExperimentConfig to a pandas DataFrame of result rows;
`run_experiment` renders it with a provenance header and writes it out.
"""
import dataclasses
import datetime as dt
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd
import yaml

import rigidpy.core.formatting as fmt
import rigidpy.core.validate_inputs as val
from rigidpy.core import amplify, formulas, lift, solver, spectral
from rigidpy.core.exceptions import ConfigError, ExperimentIOError, PreconditionError
from rigidpy.core.matrices import (
    FpMatrix,
    LowRankFp,
    SignMatrix,
    boolean_preimage,
    format_matrix,
    fp_rank,
    maj_power,
    named_matrix,
    read_matrix,
    sign_to_fp,
    write_matrix,
)

log = logging.getLogger(__name__)

SUBCOMMANDS = (
    "gen",
    "rank",
    "rigidity",
    "lift",
    "spectral-bound",
    "eigs",
    "amplify-kron",
    "amplify-maj",
    "circuit-size",
    "obstruction",
    "schedule",
)
FORMATS = ("csv", "json")
METHODS = ("exact", "oracle", "rank1")
SCHEDULES = ("kron", "maj")


@dataclass
class ExperimentConfig:
    """
    Validated settings of one experiment run.

    Only `subcommand` is required; everything else has a default. `inputs`
    lists matrix files and `base` names a built-in matrix (see `named_matrix`).

    Examples
    --------
    >>> cfg = rgd.ExperimentConfig.from_dict({"subcommand": "eigs", "n": 2})
    >>> cfg.n, cfg.format
    (2, 'csv')
    """

    subcommand: str
    inputs: list = field(default_factory=list)
    base: str = None
    p: int = 3
    rank: int = 1
    n: int = 1
    k: int = 1
    seed: int = 0
    samples: int = 10**4
    instances: int = 10
    exhaustive: bool = False
    budget: int = solver.DEFAULT_BUDGET
    mode: str = "boolean"
    method: str = "exact"
    workers: int = 1
    out: str = None
    format: str = "csv"
    delta: float = 0.0
    eps: float = 1.0
    beta: float = 1.0
    c: float = 1.0
    q: int = 2
    R: float = None
    depth: int = 1
    schedule: str = "kron"

    def __post_init__(self):
        self.validate()

    def _require(self, cond, msg):
        if not cond:
            raise ConfigError(msg)

    def validate(self):
        self._require(
            self.subcommand in SUBCOMMANDS,
            "Unknown subcommand {0!r}; choose one of {1}".format(self.subcommand, SUBCOMMANDS),
        )
        self._require(self.format in FORMATS, "The format must be one of {0}".format(FORMATS))
        self._require(self.mode in solver.MODES, "The mode must be one of {0}".format(solver.MODES))
        self._require(self.method in METHODS, "The method must be one of {0}".format(METHODS))
        self._require(
            self.schedule in SCHEDULES, "The schedule must be one of {0}".format(SCHEDULES)
        )
        for name in ("p", "rank", "n", "k", "seed", "samples", "instances", "budget", "workers", "q", "depth"):
            value = getattr(self, name)
            self._require(
                isinstance(value, int) and not isinstance(value, bool) and value >= 0,
                "{0} must be a non-negative integer, got {1!r}".format(name, value),
            )
        try:
            val.prime(self.p)
        except AssertionError as err:
            raise ConfigError(str(err))
        self._require(self.workers >= 1, "workers must be at least 1")
        self._require(self.seed < 2**64, "seed must fit in 64 bits")
        if isinstance(self.inputs, str):
            self.inputs = [self.inputs]

    @classmethod
    def from_dict(cls, params):
        """Build a config from a mapping, rejecting keys that are not config fields."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(params) - known)
        if unknown:
            raise ConfigError("Unknown configuration keys: {0}".format(", ".join(unknown)))
        if "subcommand" not in params:
            raise ConfigError("The configuration must name a subcommand")
        return cls(**params)

    @classmethod
    def from_yaml(cls, path, **overrides):
        """
        Load a YAML mapping; keyword overrides that are not None take precedence.
        """
        try:
            with open(path) as f:
                params = yaml.safe_load(f) or {}
        except OSError as err:
            raise ExperimentIOError("Could not read configuration ({0})".format(err.strerror), path)
        except yaml.YAMLError as err:
            raise ConfigError("Malformed YAML in {0}: {1}".format(path, err))
        if not isinstance(params, dict):
            raise ConfigError("The configuration file must hold a mapping")
        return cls.from_dict(fmt.combine_params(params, overrides))

    def to_dict(self):
        return dataclasses.asdict(self)


# ----------------------------------------------------------------------
# helpers


def _load_matrices(config):
    mats = [(path, read_matrix(path)) for path in config.inputs]
    if config.base is not None:
        mats.append((config.base, named_matrix(config.base)))
    if not mats:
        raise ConfigError("Give an input matrix with --in or a named matrix with --base")
    return mats


def _as_sign(name, M):
    if not isinstance(M, SignMatrix):
        raise ConfigError("{0} must be a sign matrix for this experiment".format(name))
    return M


def _exact_approximation(A, p):
    # a rank-preserving F_p matrix whose Booleanization is A
    return sign_to_fp(A, p) if p > 2 else boolean_preimage(A, p)


def _fraction_columns(prefix, value):
    return {prefix: float(value), prefix + "_exact": str(value)}


# ----------------------------------------------------------------------
# drivers


def _run_rank(config, flags):
    rows = []
    for name, M in _load_matrices(config):
        fpm = M if isinstance(M, FpMatrix) else sign_to_fp(M, config.p)
        rows.append(
            {"matrix": name, "rows": fpm.rows, "cols": fpm.cols, "p": fpm.p, "rank": fp_rank(fpm)}
        )
    return rows


def _predicted_sigma(name):
    name = name.strip().lower()
    if name.startswith("h") and name[1:].isdigit():
        return 2 ** (int(name[1:]) / 2)
    if name.startswith("m") and name[1:].isdigit():
        return spectral.hamming_sigma(int(name[1:]))
    return None


def _run_rigidity(config, flags):
    rows = []
    for name, M in _load_matrices(config):
        row = {"matrix": name, "mode": config.mode, "p": config.p, "rank": config.rank}
        if config.mode == "boolean":
            A = _as_sign(name, M)
            if config.method == "rank1":
                res = solver.rank1_search(A, config.p, budget=config.budget)
                value, exhaustive = res.value, res.exhaustive
            elif config.method == "oracle":
                value = solver.bruteforce_oracle(A, config.rank, config.p, "boolean")
                exhaustive = True
            else:
                res = solver.exact_boolean_rigidity(
                    A, config.rank, config.p, budget=config.budget, workers=config.workers
                )
                value, exhaustive = res.value, res.exhaustive
            row["trivial_rank1_bound"] = solver.trivial_rank1_bound(A)
            if A.rows == A.cols:
                bound = spectral.thm1_bound(A, config.rank, config.p).bound
                row["lower_bound"] = bound
                row["value_minus_bound"] = value - bound
        else:
            A = M if isinstance(M, FpMatrix) else sign_to_fp(M, config.p)
            if config.method == "oracle":
                value, exhaustive = solver.bruteforce_oracle(A, config.rank, A.p, "regular"), True
            else:
                res = solver.exact_regular_rigidity(
                    A, config.rank, budget=config.budget, workers=config.workers
                )
                value, exhaustive = res.value, res.exhaustive
        row.update({"method": config.method, "value": value, "exhaustive": exhaustive})
        flags["exhaustive"] = flags.get("exhaustive", True) and exhaustive
        rows.append(row)
    return rows


def _run_lift(config, flags):
    rng = np.random.default_rng(config.seed)
    N = max(config.n, 1)
    bound = lift.entry_bound_base(config.p) ** config.rank
    rows = []
    for i in range(config.instances):
        L = LowRankFp.random(config.rank, N, config.p, rng)
        lifted = lift.lift_to_c(L)
        magnitude = lifted.max_entry_magnitude()
        numeric_rank = int(np.linalg.matrix_rank(lifted.to_complex()))
        rows.append(
            {
                "instance": i,
                "p": config.p,
                "rank": config.rank,
                "N": N,
                "lifted_rank": lifted.rtilde,
                "numeric_rank": numeric_rank,
                "exact": lifted.matches_booleanization(),
                "max_entry": magnitude,
                "entry_bound": bound,
                "entry_minus_bound": magnitude - bound,
            }
        )
    return rows


def _run_spectral_bound(config, flags):
    rows = []
    for name, M in _load_matrices(config):
        A = _as_sign(name, M)
        rep = spectral.largest_singular_value(A)
        bound = spectral.thm1_bound(A, config.rank, config.p, sigma1=rep.sigma1)
        predicted = _predicted_sigma(name)
        rows.append(
            {
                "matrix": name,
                "N": A.rows,
                "p": config.p,
                "rank": config.rank,
                "sigma1": rep.sigma1,
                "sigma1_predicted": predicted,
                "sigma1_difference": None if predicted is None else rep.sigma1 - predicted,
                "iterations": rep.iterations,
                "converged": rep.converged,
                "C": bound.C,
                "lifted_rank": bound.rtilde,
                "bound": bound.bound,
                "positive": bound.positive,
            }
        )
    return rows


def _run_eigs(config, flags):
    eig = spectral.distance_eigenvalues(config.n)
    direct = (
        spectral.distance_eigenvalues_direct(config.n)
        if config.n <= spectral.MAX_DIRECT_N
        else None
    )
    rows = []
    for j in range(config.n + 1):
        row = {"weight": j, "multiplicity": math.comb(config.n, j), "eigenvalue": eig[j]}
        if direct is not None:
            row["direct"] = direct[j]
            row["difference"] = direct[j] - eig[j]
        rows.append(row)
    flags["direct_check"] = direct is not None
    return rows


def _run_amplify_kron(config, flags):
    rows = []
    for name, M in _load_matrices(config):
        A = _as_sign(name, M)
        L = LowRankFp.from_matrix(_exact_approximation(A, config.p))
        mode = "exhaustive" if config.exhaustive else "sampled"
        res = amplify.best_seed_search(
            A, L, config.n, mode=mode, samples=config.samples, rng_seed=config.seed
        )
        approx = amplify.build_kron_approximant(L, res.seed, config.n)
        count = amplify.kron_error_exact(
            A, approx, samples=config.samples, seed=config.seed, workers=config.workers
        )
        p1, pm1, d1, dm1 = amplify.entry_marginals(A, L.materialize())
        expected = amplify.kron_error_expected(config.p, p1, pm1, d1, dm1, config.n)
        row = {"matrix": name, "p": config.p, "n": config.n, "seed_vector": " ".join(map(str, res.seed))}
        row.update(_fraction_columns("best_error", res.error))
        row.update(_fraction_columns("mean_error", res.mean_error))
        row.update(_fraction_columns("expected_error", expected))
        row["recount_error"] = float(count.error)
        row["mean_minus_expected"] = float(res.mean_error - expected)
        try:
            bound = amplify.kron_theorem_bound(A, L, config.n)
            row.update(_fraction_columns("theorem_bound", bound))
            row["best_minus_bound"] = float(res.error - bound)
        except PreconditionError as err:
            log.info("%s: %s", name, err)
            row.update({"theorem_bound": None, "theorem_bound_exact": None, "best_minus_bound": None})
        row["rank_bound"] = approx.rank_bound
        row["seeds_evaluated"] = res.seeds_evaluated
        exhaustive = res.exhaustive and count.exhaustive
        flags["exhaustive"] = flags.get("exhaustive", True) and exhaustive
        rows.append(row)
    return rows


def _run_amplify_maj(config, flags):
    rows = []
    mats = _load_matrices(config) if (config.inputs or config.base) else [("m1", named_matrix("m1"))]
    for name, M in mats:
        A = _as_sign(name, M)
        target = maj_power(A, config.k)
        delta = Fraction(str(config.delta))
        if delta == 0:
            ensemble = amplify.Ensemble([(1, boolean_preimage(target, config.p))])
        else:
            ensemble = amplify.flip_noise_ensemble(
                target, delta, config.samples, config.p, seed=config.seed
            )
        measured = amplify.prefix_ensemble_error(ensemble, A, config.k, config.n)
        predicted = amplify.maj_amplified_error(config.k, config.n, delta)
        row = {"matrix": name, "p": config.p, "k": config.k, "n": config.n, "delta": float(delta)}
        row.update(_fraction_columns("measured_error", measured))
        row.update(_fraction_columns("predicted_error", predicted))
        row["difference"] = float(measured - predicted)
        row["agreement_prob"] = float(amplify.majority_agreement_prob(config.k, config.n))
        row["members"] = len(ensemble)
        rows.append(row)
    flags["exhaustive"] = True
    return rows


def _run_circuit_size(config, flags):
    R = config.R if config.R is not None else 0
    exponent = formulas.circuit_exponent(config.q, config.rank, R, config.depth)
    return [
        {"q": config.q, "rank": config.rank, "R": R, "depth": config.depth, "exponent": exponent}
    ]


def _run_obstruction(config, flags):
    R = Fraction(str(config.R)) if config.R is not None else Fraction(4**config.k, 3)
    return [
        {
            "k": config.k,
            "rank": config.rank,
            "R_lb": float(R),
            "obstructed": formulas.obstruction_check(config.k, config.rank, R),
        }
    ]


def _run_schedule(config, flags):
    if config.schedule == "kron":
        rep = formulas.razborov_schedule_kron(config.n, config.eps, config.c)
    else:
        rep = formulas.razborov_schedule_maj(config.n, config.beta, config.c)
    return [
        {
            "schedule": config.schedule,
            "n": config.n,
            "k": rep.k,
            "k_int": rep.k_int,
            "rank": rep.rank,
            "rhs": str(rep.rhs),
            "rhs_gap": "{0:.6e}".format(rep.rhs_gap),
        }
    ]


_DRIVERS = {
    "rank": _run_rank,
    "rigidity": _run_rigidity,
    "lift": _run_lift,
    "spectral-bound": _run_spectral_bound,
    "eigs": _run_eigs,
    "amplify-kron": _run_amplify_kron,
    "amplify-maj": _run_amplify_maj,
    "circuit-size": _run_circuit_size,
    "obstruction": _run_obstruction,
    "schedule": _run_schedule,
}


def _write(path, text):
    try:
        dirname = os.path.dirname(path)
        if dirname:
            os.makedirs(dirname, exist_ok=True)
        with open(path, "w") as f:
            f.write(text)
    except OSError as err:
        raise ExperimentIOError("Could not write results ({0})".format(err.strerror), path)


def run_experiment(config, timestamp=True):
    """
    Run one experiment and render its result table.

    The table is written to `config.out` when set. `gen` writes the named
    matrix to `config.out` in the matrix text format instead.

    Parameters
    ----------
    config : ExperimentConfig or dict
    timestamp : bool, default True
        Add a `created` line to the header.

    Returns
    -------
    tuple of (pandas.DataFrame, str)
        The rows and the rendered text.

    Examples
    --------
    >>> df, text = rgd.run_experiment({"subcommand": "eigs", "n": 2}, timestamp=False)
    >>> df["eigenvalue"].tolist()
    [2, 2, -2]
    """
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    log.info("running %s with seed %d", config.subcommand, config.seed)

    if config.subcommand == "gen":
        if config.base is None:
            raise ConfigError("gen needs a matrix name in base")
        M = named_matrix(config.base)
        text = format_matrix(M)
        if config.out:
            write_matrix(M, config.out)
        return pd.DataFrame(), text

    flags = {}
    rows = _DRIVERS[config.subcommand](config, flags)
    df = pd.DataFrame(rows)
    created = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds") if timestamp else None
    echo = config.to_dict()
    if config.format == "csv":
        text = fmt.format_csv(df, fmt.header_lines(echo, config.seed, flags, created))
    else:
        text = fmt.format_json(df, fmt.header_dict(echo, config.seed, flags, created))
    if config.out:
        _write(config.out, text)
    return df, text
