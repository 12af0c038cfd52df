"""Model parsing diagnostics, command dispatch, report determinism and
exit codes."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from catmeas import cli
from catmeas.errors import ModelError

MODELS = Path(__file__).resolve().parent.parent / "models"


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "catmeas.cli", *args],
        capture_output=True, text=True)
    return proc


def write_model(tmp_path, payload, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_minimal_model_parses(tmp_path):
    path = write_model(tmp_path, {
        "algebra": {"atoms": ["a"]},
        "measures": {"mu": {"target": "scalar", "values": {"a": "1"}}}})
    model = cli.parse_model(path)
    assert model.algebra.n == 1


def test_rational_round_trip(tmp_path):
    path = write_model(tmp_path, {
        "algebra": {"atoms": ["a"]},
        "measures": {"mu": {"target": "scalar", "values": {"a": "1/3"}}}})
    model = cli.parse_model(path)
    from fractions import Fraction
    assert model.measures["mu"].atom_values[0][0] == Fraction(1, 3)
    assert cli.show_rational(Fraction(1, 3)) == "1/3"


def test_dangling_reference_has_distinct_code(tmp_path):
    path = write_model(tmp_path, {
        "algebra": {"atoms": ["a"]},
        "cosheaves": {"c": "l1-of:nope"}})
    with pytest.raises(ModelError) as err:
        cli.parse_model(path)
    assert err.value.code == "unresolved-reference"
    assert "cosheaves.c" in err.value.path


def test_syntax_error_code(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ModelError) as err:
        cli.parse_model(str(p))
    assert err.value.code == "syntax-error"


def test_non_positive_weight_code(tmp_path):
    path = write_model(tmp_path, {
        "algebra": {"atoms": ["a"]},
        "spaces": {"B": {"flavor": "sum", "basis": ["x"], "weights": ["0"]}}})
    with pytest.raises(ModelError) as err:
        cli.parse_model(path)
    assert err.value.code == "non-positive-weight"


def test_structured_output_is_byte_stable():
    a = run_cli("verify-all", "--model", str(MODELS / "reference.json"),
                "--seed", "7", "--format", "structured")
    b = run_cli("verify-all", "--model", str(MODELS / "reference.json"),
                "--seed", "7", "--format", "structured")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    assert "elapsed" not in a.stdout  # timing stays out of the report
    payload = json.loads(a.stdout)
    assert payload["command"] == "verify-all"


def test_no_floats_anywhere_in_reports():
    out = run_cli("verify-all", "--model", str(MODELS / "reference.json"),
                  "--seed", "3", "--format", "structured")
    payload = json.loads(out.stdout)

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(payload)


def test_broken_fixture_exits_one_with_partition():
    out = run_cli("verify-all", "--model", str(MODELS / "broken_cosheaf.json"),
                  "--seed", "1", "--format", "structured")
    assert out.returncode == 1
    payload = json.loads(out.stdout)
    verdict = payload["verdicts"]["cosheaf[bad]"]
    assert verdict["ok"] is False
    assert verdict["detail"]["blocks"] == [["a"], ["b"]]


def test_unknown_command_exits_two():
    out = run_cli("frobnicate", "--model", str(MODELS / "reference.json"))
    assert out.returncode == 2


def test_missing_model_exits_two(tmp_path):
    out = run_cli("stone", "--model", str(tmp_path / "absent.json"))
    assert out.returncode == 2


def test_every_command_runs_on_reference():
    for command in cli.COMMANDS:
        out = run_cli(command, "--model", str(MODELS / "reference.json"),
                      "--seed", "2")
        assert out.returncode == 0, (command, out.stderr)


def test_fubini_renders_witness_matrices():
    out = run_cli("fubini", "--model", str(MODELS / "reference.json"),
                  "--format", "structured")
    payload = json.loads(out.stdout)
    witness = payload["results"]["l1_tensor_witness"]
    assert witness["forward"] and witness["backward"]


def test_element_flag():
    out = run_cli("variation", "--model", str(MODELS / "reference.json"),
                  "--element", "a*u|b*v", "--format", "structured")
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert "variation[pi]" in payload["results"]


def test_exhaustive_flag_on_cosheaf_check():
    out = run_cli("check-cosheaf", "--model", str(MODELS / "broken_cosheaf.json"),
                  "--exhaustive")
    assert out.returncode == 1


def test_generated_algebra_model(tmp_path):
    path = write_model(tmp_path, {
        "algebra": {"ground": [1, 2, 3], "generators": [[1, 2], [2, 3]]}})
    model = cli.parse_model(path)
    assert model.algebra.n == 3


def test_text_and_structured_agree_on_content():
    text = run_cli("stone", "--model", str(MODELS / "reference.json"))
    structured = run_cli("stone", "--model", str(MODELS / "reference.json"),
                         "--format", "structured")
    payload = json.loads(structured.stdout)
    for point in payload["results"]["points"]:
        assert point in text.stdout
    for key, v in payload["verdicts"].items():
        assert key in text.stdout
        assert ("[ok]" if v["ok"] else "[FAIL]") in text.stdout
