import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from kgt import __version__, cli

CASES = [
    (["certify", "--d", "48"], 1),
    (["certify", "--d", "10000", "--epsilon", "1/2", "--gamma", "1"], 1),
    (["scan", "--dmax", "100000"], 1),
    (["verify-toric"], 0),
    (["class-number", "--disc", "-400"], 0),
    (["class-number", "--disc", "-23"], 0),
    (["indices", "--n", "12"], 0),
    (["indices", "--n", "1000003"], 0),
    (["ehrhart", "--k", "6", "--output", "json"], 0),
    (["congruence", "--d", "6"], 0),
    (["congruence", "--d", "1000"], 0),
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv,code", CASES, ids=lambda x: " ".join(x) if isinstance(x, list) else str(x))
def test_json_validates_against_schema(argv, code):
    got, text, _ = run(argv)
    assert got == code
    doc = json.loads(text)
    jsonschema.validate(doc, cli.load_schema(argv[0]))
    assert doc["tool_version"] == __version__
    assert doc["command"] == argv[0]


@pytest.mark.parametrize("argv,code", CASES[:6], ids=lambda x: " ".join(x) if isinstance(x, list) else str(x))
def test_byte_identical_reruns(argv, code):
    assert run(argv + ["--seed", "4"]) == run(argv + ["--seed", "4"])


def test_json_is_sorted_and_indented():
    _, text, _ = run(["indices", "--n", "7"])
    doc = json.loads(text)
    assert text == json.dumps(doc, indent=2, sort_keys=True) + "\n"


def test_params_echo():
    _, text, _ = run(["certify", "--d", "100", "--epsilon", "0.5", "--seed", "3"])
    params = json.loads(text)["params"]
    assert params == {"d": 100, "epsilon": "1/2", "gamma": "1/4", "output": "json", "seed": 3, "slack_bits": 40}


def test_slack_env(monkeypatch):
    monkeypatch.setenv("KGT_SLACK_BITS", "20")
    _, text, _ = run(["certify", "--d", "100"])
    assert json.loads(text)["params"]["slack_bits"] == 20


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--d", "47"],
        ["certify", "--d", "abc"],
        ["certify", "--d", "100", "--epsilon", "-1"],
        ["certify", "--d", "100", "--epsilon", "1/20"],
        ["certify", "--d", "100", "--gamma", "1/8"],
        ["scan", "--dmax", "10000000000000"],
        ["class-number", "--disc", "5"],
        ["class-number", "--disc", "-6"],
        ["indices", "--n", "0"],
        ["ehrhart", "--k", "-1"],
        ["ehrhart", "--k", "61"],
        ["congruence", "--d", "0"],
        ["certify", "--d", "100", "--output", "xml"],
        ["nosuch"],
        [],
    ],
)
def test_invalid_input_exits_2(argv):
    code, out, _ = run(argv)
    assert code == 2
    assert out == ""


def test_bad_slack_env_exits_2(monkeypatch):
    monkeypatch.setenv("KGT_SLACK_BITS", "lots")
    assert run(["certify", "--d", "100"])[0] == 2


def test_ehrhart_csv_default():
    code, text, _ = run(["ehrhart", "--k", "6"])
    assert code == 0
    assert "\r\n" in text
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [int(r["lattice_points"]) for r in rows] == [1, 50, 252, 715, 1547, 2856, 4750]
    assert all(r["lattice_points"] == r["polynomial"] for r in rows)


@pytest.mark.parametrize("argv", [c[0] for c in CASES if c[0][0] != "ehrhart"], ids=lambda a: " ".join(a))
def test_csv_single_record(argv):
    _, text, _ = run(argv + ["--output", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 2 and len(rows[0]) == len(rows[1])
    rec = dict(zip(*rows))
    assert rec["tool_version"] == __version__


def test_csv_quotes_fields_with_commas():
    _, text, _ = run(["verify-toric", "--output", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    rec = dict(zip(*rows))
    assert json.loads(rec["cartier_table"])[0]["cone"] == ["v1", "v2", "v4", "v6"]
    assert rec["all_pass"] == "true"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kgt.cli", "indices", "--n", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["index_gamma1"] == 24


def test_schemas_are_valid_documents():
    for name in cli.COMMANDS:
        jsonschema.Draft202012Validator.check_schema(cli.load_schema(name))
