import csv
import json

import pytest

from cellschur.main import EXIT_OK, EXIT_USAGE, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("CELLSCHUR_OUTPUT_DIR", "CELLSCHUR_MONGODB_URI", "CELLSCHUR_MAX_RANK", "CELLSCHUR_WORKERS"):
        monkeypatch.delenv(name, raising=False)


def run(tmp_path, *argv, name="report.json"):
    output = tmp_path / name
    code = main([*argv, "--output", str(output)])
    return code, output


def load(path):
    return json.loads(path.read_text())


def test_verify_monoid_algebra(tmp_path):
    code, output = run(tmp_path, "verify", "--monoid", "full", "--r", "2")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["verdicts"]["axioms"] == "pass"
    assert doc["basis_size"] == "4"
    assert doc["config"]["monoid"] == "full"
    assert len(doc["layers"]) == 3


def test_rank_above_the_bound_is_a_usage_error(tmp_path):
    code, output = run(tmp_path, "verify", "--monoid", "full", "--r", "99")
    assert code == EXIT_USAGE
    assert not output.exists()


def test_rank_bound_comes_from_the_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CELLSCHUR_MAX_RANK", "1")
    code, _ = run(tmp_path, "verify", "--monoid", "full", "--r", "2")
    assert code == EXIT_USAGE


def test_invalid_environment_is_a_usage_error(tmp_path, monkeypatch):
    monkeypatch.setenv("CELLSCHUR_WORKERS", "zero")
    code, _ = run(tmp_path, "count", "--r", "2", "--p", "2")
    assert code == EXIT_USAGE


def test_count_is_not_bounded_by_the_rank_limit(tmp_path, monkeypatch):
    monkeypatch.setenv("CELLSCHUR_MAX_RANK", "4")
    code, output = run(tmp_path, "count", "--r", "6", "--p", "2")
    assert code == EXIT_OK
    assert load(output)["verdicts"]["counts"] == "pass"


def test_witness_is_bounded_by_the_rank_limit(tmp_path, monkeypatch):
    monkeypatch.setenv("CELLSCHUR_MAX_RANK", "4")
    code, output = run(tmp_path, "witness", "--kind", "char0-full", "--r", "6")
    assert code == EXIT_USAGE
    assert not output.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["lambda0", "--monoid", "full", "--r", "2", "--char", "4"],
        ["verify", "--monoid", "full", "--r", "2", "--side", "left"],
        ["verify", "--schur", "full", "--r", "2", "--n", "1"],
        ["verify", "--monoid", "full", "--r", "3", "--ordering", "nu", "--nu", "2", "2"],
        ["verify", "--monoid", "full", "--r", "2", "--nu", "1", "1"],
        ["count", "--r", "3"],
    ],
)
def test_usage_errors(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == EXIT_USAGE


def test_lambda0_of_t2_in_characteristic_two(tmp_path):
    code, output = run(tmp_path, "lambda0", "--monoid", "full", "--r", "2", "--char", "2")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["field"] == "GF(2)"
    assert doc["lambda0"] == [["1"], ["1", "1"]]
    assert doc["quasi_hereditary_sufficient"] is False
    assert doc["verdicts"]["theorem"] == "not-applicable"
    top = next(layer for layer in doc["layers"] if layer["lambda"] == ["2"])
    assert top["gram_rank"] == "0"
    assert top["in_lambda0"] is False


def test_witness_char0_full(tmp_path):
    code, output = run(tmp_path, "witness", "--kind", "char0-full", "--r", "3")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["verdicts"]["witnesses"] == "pass"
    assert len(doc["witnesses"]) == 6
    assert all(witness["agree"] for witness in doc["witnesses"])


def test_witness_on_the_wrong_side_is_a_usage_error(tmp_path):
    code, _ = run(tmp_path, "witness", "--kind", "right-p", "--r", "3", "--p", "2", "--side", "left")
    assert code == EXIT_USAGE


def test_count_as_csv(tmp_path):
    code, output = run(tmp_path, "count", "--r", "4", "--p", "2", "--format", "csv", name="count.csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(output.read_text().splitlines()))
    assert [(row["side"], row["data"], row["match"]) for row in rows] == [
        ("right", "11", "true"),
        ("left", "10", "true"),
    ]


def test_gram_is_json_only(tmp_path):
    code, _ = run(tmp_path, "gram", "--monoid", "full", "--r", "2", "--format", "csv", name="gram.csv")
    assert code == EXIT_USAGE


def test_gram_writes_every_layer(tmp_path):
    code, output = run(tmp_path, "gram", "--monoid", "full", "--r", "2", "--char", "2")
    assert code == EXIT_OK
    grams = {tuple(gram["lambda"]): gram for gram in load(output)["grams"]}
    assert grams[("2",)]["entries"] == [["2"]]
    assert grams[("1",)]["entries"] == [["1", "1"]]


def test_verify_schur_algebra(tmp_path):
    code, output = run(tmp_path, "verify", "--schur", "full", "--r", "2", "--n", "2", "--side", "left")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["verdicts"]["axioms"] == "pass"
    assert doc["summary"]["basis_size"] == doc["basis_size"]


def test_rook_schur_algebra_is_quasi_hereditary(tmp_path):
    code, output = run(tmp_path, "lambda0", "--schur", "rook", "--r", "2", "--side", "left", "--char", "0")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["quasi_hereditary_sufficient"] is True
    assert doc["verdicts"]["theorem"] == "pass"
    assert [] in doc["lambda0"]


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CELLSCHUR_OUTPUT_DIR", str(tmp_path / "out"))
    assert main(["count", "--r", "3", "--p", "3"]) == EXIT_OK
    assert load(tmp_path / "out" / "count.json")["verdicts"]["counts"] == "pass"


def test_reports_are_deterministic(tmp_path):
    argv = ["lambda0", "--monoid", "rook", "--r", "2", "--char", "3"]
    _, first = run(tmp_path, *argv, name="first.json")
    _, second = run(tmp_path, *argv, name="second.json")
    a, b = load(first), load(second)
    a.pop("timing_ms")
    b.pop("timing_ms")
    assert a == b


def test_stdout_when_no_output_is_given(capsys):
    assert main(["count", "--r", "2", "--p", "2"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["config"]["command"] == "count"


@pytest.mark.slow
def test_right_schur_algebra_of_t3_in_characteristic_two(tmp_path):
    code, output = run(tmp_path, "lambda0", "--schur", "full", "--r", "3", "--side", "right", "--char", "2")
    assert code == EXIT_OK
    doc = load(output)
    assert doc["verdicts"]["theorem"] == "pass"
    assert ["2"] not in doc["lambda0"]
