import pytest

from rigidpy.cli import EXIT_CONFIG, EXIT_ERROR, EXIT_LIMIT, EXIT_OK, build_parser, main
from rigidpy.core.formatting import strip_timestamp


def test_parser_knows_every_subcommand():
    args = build_parser().parse_args(["amplify-kron", "--base", "h3", "--n", "2", "--exhaustive"])
    assert args.subcommand == "amplify-kron"
    assert args.exhaustive is True
    assert args.p is None


def test_parser_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["fly"])


def test_eigs_to_stdout(capsys):
    assert main(["eigs", "--n", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# rigidpy")
    assert "weight,multiplicity,eigenvalue,direct,difference" in out


def test_output_file(tmp_path, capsys):
    out = tmp_path / "rank.csv"
    assert main(["rank", "--base", "h2", "--p", "3", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert out.read_text().splitlines()[-1] == "h2,4,4,3,4"


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text("subcommand: eigs\nn: 2\nformat: json\n")
    assert main(["eigs", "--config", str(cfg), "--n", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert '"n": 4' in out


def test_missing_input_is_config_error(capsys):
    assert main(["rigidity"]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_non_prime_is_config_error():
    assert main(["rank", "--base", "h1", "--p", "4"]) == EXIT_CONFIG


def test_invalid_argument_is_config_error(capsys):
    assert main(["schedule", "--n", "2"]) == EXIT_CONFIG
    assert "invalid input" in capsys.readouterr().err


def test_size_cap_exit_code(capsys):
    assert main(["gen", "--base", "h14"]) == EXIT_LIMIT
    assert "exceeds the cap" in capsys.readouterr().err


def test_budget_exit_code():
    assert main(["rigidity", "--base", "h3", "--rank", "2", "--budget", "10"]) == EXIT_LIMIT


def test_unreadable_input_exit_code(tmp_path, capsys):
    missing = str(tmp_path / "nothing.mat")
    assert main(["rank", "--in", missing]) == EXIT_ERROR
    assert "nothing.mat" in capsys.readouterr().err


def test_cli_reruns_are_identical(tmp_path):
    outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for out in outs:
        argv = ["amplify-kron", "--base", "h3", "--n", "2", "--exhaustive", "--out", str(out)]
        assert main(argv) == EXIT_OK
    assert strip_timestamp(outs[0].read_text()) == strip_timestamp(outs[1].read_text())


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert capsys.readouterr().out.startswith("rigidpy ")
