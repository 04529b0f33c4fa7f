import csv
import io
import json

import numpy as np
import pytest

from fussraney.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def strip_timestamp(doc):
    doc = dict(doc)
    doc["manifest"] = {k: v for k, v in doc["manifest"].items() if k != "timestamp"}
    return doc


def test_seq_csv(capsys):
    code, out, err = run(capsys, "seq", "--family", "fc", "--s", "2", "--n-max", "5")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n,value"
    assert [int(r["value"]) for r in read_csv(out)] == [1, 1, 3, 12, 55, 273]
    manifest = json.loads(err)
    assert manifest["subcommand"] == "seq"
    assert manifest["parameters"]["s"] == 2


def test_seq_raney_json(capsys):
    code, out, _ = run(capsys, "seq", "--family", "raney", "--p", "3", "--r", "2", "--n-max", "3", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [r["value"] for r in doc["rows"]] == [1, 2, 7, 30]
    assert doc["manifest"]["tool_version"] == "0.1.0"


def test_validation_reports_every_problem(capsys):
    code, _, err = run(capsys, "seq", "--family", "raney", "--p", "1", "--r", "0", "--n-max", "-1", "--threads", "-2")
    assert code == EXIT_USAGE
    lines = [l for l in err.splitlines() if l.startswith("error:")]
    assert len(lines) == 4


@pytest.mark.parametrize("argv", [
    ["density", "--family", "raney", "--p", "3", "--r", "5"],
    ["density", "--family", "fc", "--s", "1", "--x-min", "1", "--x-max", "5"],
    ["moments", "--family", "raney", "--p", "3", "--r", "4"],
    ["oracle", "--family", "fc", "--s", "1", "--grid", "100"],
    ["mc", "--n", "4", "--bins", "3"],
    ["figure", "--id", "fig9", "--points", "10"],
    ["mc", "--seed", "-1"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_density_csv_to_file_with_manifest(tmp_path, capsys):
    path = tmp_path / "w.csv"
    code, out, _ = run(capsys, "density", "--family", "raney", "--p", "3", "--r", "4", "--points", "50", "--out", str(path))
    assert code == EXIT_OK and out == ""
    text = path.read_text()
    assert "\r" not in text
    rows = read_csv(text)
    assert list(rows[0]) == ["x", "density", "flag", "is_probability"]
    assert len(rows) == 50
    assert {r["flag"] for r in rows} == {"ok"}
    assert {r["is_probability"] for r in rows} == {"false"}
    assert float(rows[-1]["x"]) == pytest.approx(27 / 4)
    manifest = json.loads((tmp_path / "w.csv.manifest.json").read_text())
    assert manifest["parameters"]["r"] == 4


def test_density_values_match_library(capsys):
    from fussraney.fc_density import build_fc_spec

    code, out, _ = run(capsys, "density", "--family", "fc", "--s", "2", "--x-min", "0.5", "--x-max", "6", "--points", "12")
    assert code == EXIT_OK
    rows = read_csv(out)
    x = np.array([float(r["x"]) for r in rows])
    y = np.array([float(r["density"]) for r in rows])
    # .17g round-trips exactly
    np.testing.assert_array_equal(y, build_fc_spec(2)(x))


def test_moments_json_and_exit_code(capsys):
    code, out, _ = run(capsys, "moments", "--family", "raney", "--p", "4", "--r", "2", "--n-max", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] is True
    assert [r["exact_moment"] for r in doc["rows"]] == [1, 2, 9, 52]


def test_moments_failure_exit_code(capsys):
    code, _, _ = run(capsys, "moments", "--family", "fc", "--s", "3", "--tol", "1e-30", "--format", "csv")
    assert code == EXIT_FAIL


def test_oracle_compare(capsys):
    code, out, _ = run(capsys, "oracle", "--family", "fc", "--s", "2", "--grid", "512", "--compare")
    assert code == EXIT_OK
    rows = read_csv(out)
    assert list(rows[0]) == ["x", "oracle", "hypergeom", "abs_diff"]
    assert len(rows) > 400
    assert all(float(r["oracle"]) >= 0 for r in rows)


def test_mc_json_is_reproducible(capsys, tmp_path):
    argv = ["mc", "--s", "2", "--n", "16", "--samples", "6", "--seed", "42", "--bins", "10"]
    _, first, _ = run(capsys, *argv)
    dump = tmp_path / "x.csv"
    code, second, _ = run(capsys, *argv, "--threads", "0", "--dump-samples", str(dump))
    assert code == EXIT_OK
    a, b = json.loads(first), json.loads(second)
    assert a["empirical_moments"] == b["empirical_moments"]
    assert a["histogram_masses"] == b["histogram_masses"]
    assert a["manifest"]["seed"] == 42
    assert len(dump.read_text().splitlines()) == 1 + 6 * 16


@pytest.mark.parametrize("figure, names", [
    ("fig1", ["P_1", "P_2"]),
    ("fig2", ["P_3", "P_4", "P_5", "P_6"]),
    ("fig3", ["W_2,1", "W_2,2", "W_2,3"]),
    ("fig4", ["W_3,1", "W_3,2", "W_3,3", "W_3,4"]),
    ("fig6", ["W_2,2", "W_3,3", "W_4,4", "W_5,5"]),
])
def test_figure(capsys, figure, names):
    code, out, _ = run(capsys, "figure", "--id", figure)
    assert code == EXIT_OK
    rows = read_csv(out)
    got = list(dict.fromkeys(r["curve"] for r in rows))
    assert got == names
    for name in names:
        curve = [r for r in rows if r["curve"] == name]
        assert len(curve) >= 400
        quasi = name.startswith("W") and int(name.split(",")[1]) == int(name[2]) + 1
        assert {r["is_probability"] for r in curve} == {"false" if quasi else "true"}
    if figure == "fig2":
        assert min(float(r["x"]) for r in rows) == pytest.approx(5.0)


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "3")
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True


@pytest.mark.slow
def test_verify_all_is_deterministic_and_passes(capsys):
    code, first, _ = run(capsys, "verify-all", "--seed", "5", "--threads", "0")
    assert code == EXIT_OK
    _, second, _ = run(capsys, "verify-all", "--seed", "5", "--threads", "0")
    doc = json.loads(first)
    assert doc["passed"] and all(c["passed"] for c in doc["checks"])
    assert strip_timestamp(doc) == strip_timestamp(json.loads(second))


@pytest.mark.slow
def test_verify_all_catches_corrupted_coefficient(capsys):
    code, out, _ = run(capsys, "verify-all", "--corrupt-lambda", "1.001", "--threads", "0")
    assert code == EXIT_FAIL
    failed = {c["name"] for c in json.loads(out)["checks"] if not c["passed"]}
    assert any(name.startswith("moments_P_") for name in failed)
