import json

import pandas as pd

from rigidpy.core.formatting import (
    TOOL_VERSION,
    combine_params,
    format_csv,
    format_json,
    header_dict,
    header_lines,
    strip_timestamp,
)


def _table():
    return pd.DataFrame({"weight": [0, 1], "eigenvalue": [2, -2]})


########## combine_params ##########
def test_combine_params_later_wins():
    obs = combine_params({"n": 1, "p": 3}, {"n": 2}, {"p": 5})
    assert obs == {"n": 2, "p": 5}


def test_combine_params_ignores_none():
    obs = combine_params({"n": 1}, {"n": None, "seed": None})
    assert obs == {"n": 1}


########## headers ##########
def test_header_lines():
    obs = header_lines({"p": 3}, 7, {"b": 1, "a": True}, timestamp="2024-01-01T00:00:00+00:00")
    exp = [
        "rigidpy {0}".format(TOOL_VERSION),
        'config: {"p": 3}',
        "seed: 7",
        "flags: a=True,b=1",
        "created: 2024-01-01T00:00:00+00:00",
    ]
    assert obs == exp


def test_header_dict_without_timestamp():
    obs = header_dict({"p": 3}, 0, {})
    assert "created" not in obs
    assert obs["version"] == TOOL_VERSION


########## tables ##########
def test_format_csv():
    text = format_csv(_table(), ["rigidpy x", "seed: 0"])
    assert text == "# rigidpy x\n# seed: 0\nweight,eigenvalue\n0,2\n1,-2\n"


def test_format_json():
    text = format_json(_table(), header_dict({"n": 1}, 0, {"direct_check": True}))
    obs = json.loads(text)
    assert obs["rows"] == [{"weight": 0, "eigenvalue": 2}, {"weight": 1, "eigenvalue": -2}]
    assert obs["header"]["flags"] == {"direct_check": True}


def test_strip_timestamp_csv():
    first = format_csv(_table(), header_lines({}, 0, {}, timestamp="2024-01-01"))
    second = format_csv(_table(), header_lines({}, 0, {}, timestamp="2025-06-30"))
    assert first != second
    assert strip_timestamp(first) == strip_timestamp(second)


def test_strip_timestamp_json():
    first = format_json(_table(), header_dict({}, 0, {}, timestamp="2024-01-01"))
    second = format_json(_table(), header_dict({}, 0, {}, timestamp="2025-06-30"))
    assert strip_timestamp(first) == strip_timestamp(second)
    assert "created" not in strip_timestamp(first)
