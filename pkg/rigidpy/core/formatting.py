# Format experiment rows and their provenance header for CSV and JSON output

import json

try:
    from _rigidpy_version import version as TOOL_VERSION
except ImportError:
    TOOL_VERSION = "unknown"


# ----------------------------------------------------------------------
# parameter handling


def combine_params(*param_dicts):
    """
    Combine multiple dictionaries into one; later dictionaries win and
    None values never override.

    Parameters
    ----------
    params : dictionaries
        Unlimited number of dictionaries to combine

    Returns
    -------
    single dictionary of all input dictionaries combined

    Examples
    --------
    >>> yaml_params = {'subcommand': 'eigs', 'n': 4, 'seed': 7}
    >>> cli_params = {'n': 6, 'seed': None}
    >>> rgd.core.formatting.combine_params(yaml_params, cli_params)
    {'subcommand': 'eigs', 'n': 6, 'seed': 7}
    """
    params = {}
    for dictionary in param_dicts:
        params.update({k: v for k, v in dictionary.items() if v is not None})
    return params


def _fmt_flags(flags):
    return ",".join("{0}={1}".format(k, flags[k]) for k in sorted(flags))


def header_lines(config, seed, flags, timestamp=None):
    """
    Provenance lines written above every result table.

    Every line but the timestamp is a function of the configuration, so
    identical configurations give identical headers up to that line.

    Examples
    --------
    >>> lines = rgd.core.formatting.header_lines({'n': 2}, 0, {'exhaustive': True})
    >>> lines[1:]
    ['config: {"n": 2}', 'seed: 0', 'flags: exhaustive=True']
    """
    lines = [
        "rigidpy {0}".format(TOOL_VERSION),
        "config: {0}".format(json.dumps(config, sort_keys=True, default=str)),
        "seed: {0}".format(seed),
        "flags: {0}".format(_fmt_flags(flags)),
    ]
    if timestamp is not None:
        lines.append("created: {0}".format(timestamp))
    return lines


def header_dict(config, seed, flags, timestamp=None):
    header = {
        "version": TOOL_VERSION,
        "config": config,
        "seed": seed,
        "flags": dict(sorted(flags.items())),
    }
    if timestamp is not None:
        header["created"] = timestamp
    return header


# ----------------------------------------------------------------------
# tables


def format_csv(df, header):
    """
    CSV text: `#`-prefixed header lines, then the column row and data rows.
    """
    prefix = "".join("# {0}\n".format(line) for line in header)
    return prefix + df.to_csv(index=False, lineterminator="\n")


def format_json(df, header):
    """
    JSON text with the header object and the rows as an array of objects.
    """
    rows = json.loads(df.to_json(orient="records", double_precision=15))
    return json.dumps({"header": header, "rows": rows}, indent=2, sort_keys=True, default=str) + "\n"


def strip_timestamp(text):
    """Drop the `created` line so that two outputs can be compared."""
    return "\n".join(
        line
        for line in text.splitlines()
        if not line.startswith("# created:") and '"created":' not in line
    )
