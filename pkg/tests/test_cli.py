"""The treefst command line, end to end on the shipped data."""

import json
import math
import os

import pytest
from click.testing import CliRunner

from treefst.cli import main

from conftest import data_path, pkg_data_path

FOREST = pkg_data_path("aa_fragment", "forest.trees")
TOY = pkg_data_path("decode_toy")


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def compiled_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("compiled")
    result = CliRunner().invoke(main, ["compile", FOREST, "-o", str(out)])
    assert result.exit_code == 0, result.output
    return out


def test_compile_writes_fsts_and_report(compiled_dir):
    names = sorted(p.name for p in compiled_dir.iterdir())
    assert names == ["aa.fst", "classes.txt", "forest.fst", "pairs.txt",
                     "report.json", "symbols.txt"]
    report = json.loads((compiled_dir / "report.json").read_text())
    assert report["trees"][0]["phone"] == "aa"
    assert report["trees"][0]["leaves"] == 3
    assert report["forest"]["states"] > 0


def test_apply_prints_nbest_with_tab_and_four_decimals(runner, compiled_dir):
    result = runner.invoke(main, ["apply", str(compiled_dir / "forest.fst"),
                                  "--input", "aa z", "-n", "3"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len(lines) == 3
    first_out, first_w = lines[0].split("\t")
    assert first_out == "ao z"
    assert first_w == f"{-math.log(0.385):.4f}"
    weights = [float(line.split("\t")[1]) for line in lines]
    assert weights == sorted(weights)


def test_apply_rejects_unknown_symbol(runner, compiled_dir):
    result = runner.invoke(main, ["apply", str(compiled_dir / "forest.fst"),
                                  "--input", "aa zz"])
    assert result.exit_code != 0
    assert "zz" in result.output


def test_interpret_prints_positions(runner):
    result = runner.invoke(main, ["interpret", FOREST, "--input", "aa z"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith("1 aa:")
    assert lines[1] == "2 z: z 0.0000"
    assert "ao 0.9545" in lines[0]


def test_verify_ok(runner):
    result = runner.invoke(main, ["verify", FOREST, "--max-len", "2"])
    assert result.exit_code == 0, result.output
    assert "verified" in result.output


def test_validate_ok_and_broken(runner):
    result = runner.invoke(main, ["validate", FOREST])
    assert result.exit_code == 0
    assert "OK" in result.output

    result = runner.invoke(main, ["validate", data_path("broken_overlap.trees")])
    assert result.exit_code == 1
    assert "overlap" in result.output
    assert "witness" in result.output


def test_stats_report_shape(runner, compiled_dir):
    result = runner.invoke(main, ["stats", str(compiled_dir)])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    header = lines[0].split()
    assert header == ["tree", "leaves", "states", "arcs", "seconds"]
    assert lines[1].split()[0] == "aa"
    total = next(line for line in lines if line.startswith("TOTAL"))
    assert int(total.split()[1]) == 3
    assert lines[-1].startswith("forest machine:")


def test_decode_toy_lattices(runner, tmp_path):
    phi_dir = tmp_path / "phi"
    result = runner.invoke(main, ["compile", os.path.join(TOY, "aa.trees"),
                                  "-o", str(phi_dir)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, [
        "decode",
        "--grammar", os.path.join(TOY, "g_uniform.fst"),
        "--dict", os.path.join(TOY, "dict.fst"),
        "--phi", str(phi_dir / "forest.fst"),
        "--lattice", os.path.join(TOY, "lattice_aoz.fst"),
    ])
    assert result.exit_code == 0, result.output
    words, weight = result.output.strip().split("\t")
    assert words == "word_az"
    assert weight == f"{-math.log(0.385):.4f}"


def test_decode_identity_weighted(runner, tmp_path):
    phi_dir = tmp_path / "phi"
    result = runner.invoke(main, ["compile", os.path.join(TOY, "identity.trees"),
                                  "-o", str(phi_dir)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, [
        "decode",
        "--grammar", os.path.join(TOY, "g.fst"),
        "--dict", os.path.join(TOY, "dict.fst"),
        "--phi", str(phi_dir / "forest.fst"),
        "--lattice", os.path.join(TOY, "lattice_weighted.fst"),
    ])
    assert result.exit_code == 0, result.output
    assert result.output.strip() == "word_da\t2.0000"


def test_regex_subcommand(runner):
    result = runner.invoke(main, [
        "regex", "('? SEG)+ '?",
        "--symbols", pkg_data_path("aa_fragment", "symbols.txt"),
        "--classes", pkg_data_path("aa_fragment", "classes.txt"),
    ])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "('? SEG)+ '?"
    assert lines[1].endswith("arcs")


def test_regex_syntax_error(runner):
    result = runner.invoke(main, [
        "regex", "a |",
        "--symbols", pkg_data_path("aa_fragment", "symbols.txt"),
    ])
    assert result.exit_code != 0


def test_selftest_small(runner):
    result = runner.invoke(main, ["selftest", "--seed", "3", "--cases", "1"])
    assert result.exit_code == 0, result.output
    assert "selftest: PASS" in result.output


def test_missing_file_is_a_clean_error(runner):
    result = runner.invoke(main, ["interpret", "nope.trees", "--input", "a"])
    assert result.exit_code != 0
    assert "nope.trees" in result.output
