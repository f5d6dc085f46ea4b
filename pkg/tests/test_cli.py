import json
import subprocess
import sys

import jsonschema
import pytest

from cptk.cli import main
from cptk.config import DEFAULT_SEED
from cptk.schema import RESULT_SCHEMA, SCHEMA_DIR, load_schema


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def check_schema(obj, key):
    jsonschema.validate(obj, load_schema("envelope"))
    jsonschema.validate(obj["result"], load_schema(RESULT_SCHEMA[key]))


def test_schema_files_are_valid():
    names = sorted(p.name for p in SCHEMA_DIR.glob("*.schema.json"))
    assert len(names) == 12
    for name in names:
        jsonschema.Draft202012Validator.check_schema(json.loads((SCHEMA_DIR / name).read_text()))
    assert set(RESULT_SCHEMA.values()) <= {n.split(".")[0] for n in names}


CASES = [
    ("space", ["space", "--space", "tree4", "--radius", "2"], 0),
    ("space", ["space", "--space", "interval_space", "--k", "3", "--radius", "3"], 0),
    ("expansion", ["expansion", "--space", "line", "--radius", "10", "--points", "0..4"], 0),
    ("expansion", ["expansion", "--space", "tree4", "--radius", "3", "--points", "e"], 0),
    ("folner", ["folner", "--space", "line", "--radius", "60", "--theta", "6/5"], 0),
    ("harem", ["harem", "--space", "tree4", "--radius", "4"], 0),
    ("harem", ["harem", "--space", "line", "--radius", "10"], 1),
    ("whyte", ["whyte", "--space", "tree4", "--radius", "5", "--relabel-seed", "1"], 0),
    ("lemma42", ["lemma42", "--word", "abA", "--check-all-len", "3"], 0),
    ("embed", ["embed", "--radius", "60", "--L", "1"], 0),
    ("lamplighter", ["lamplighter", "--trials", "50"], 0),
    ("lamplighter", ["lamplighter", "--element", '{"n":3,"lamps":[[1,[1,0,2]]],"shift":1}', "--z", "5"], 0),
    ("paradox build", ["paradox", "build"], 0),
    ("paradox transfer", ["paradox", "transfer", "--model", "f2xc3"], 0),
    ("paradox verify", ["paradox", "verify", "--maxlen", "4"], 0),
    ("asdim", ["asdim", "--space", "interval_space", "--radius", "4"], 0),
    ("suite", ["suite", "lamplighter"], 0),
]


@pytest.mark.parametrize("key,argv,code", CASES, ids=[" ".join(c[1][:2]) for c in CASES])
def test_json_output_validates(key, argv, code, capsys):
    got, out, err = run(argv, capsys)
    assert got == code, err
    obj = json.loads(out)
    check_schema(obj, key)
    assert obj["seed"] == DEFAULT_SEED
    if code == 1:
        assert obj["status"] == "FAIL"
        assert err.strip()  # witness summary on stderr


def test_lemma42_reports_word_count(capsys):
    _, out, _ = run(["lemma42", "--word", "abA", "--check-all-len", "3"], capsys)
    obj = json.loads(out)
    assert obj["result"]["phi_w_0"] == 6
    assert obj["result"]["check"]["details"]["words"] == 52


def test_transfer_then_verify(tmp_path, capsys):
    path = tmp_path / "dec.json"
    assert run(["paradox", "transfer", "--model", "f2xc3", "--out", str(path)], capsys)[0] == 0
    code, out, _ = run(["paradox", "verify", "--model", "f2xc3", "--maxlen", "6", "--input", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["status"] == "PASS"


def test_verify_catches_a_bad_file(tmp_path, capsys):
    run(["paradox", "build", "--out", str(tmp_path / "d.json")], capsys)
    obj = json.loads((tmp_path / "d.json").read_text())
    obj["result"]["P"].append(obj["result"]["P"][0])
    (tmp_path / "d.json").write_text(json.dumps(obj))
    code, out, err = run(["paradox", "verify", "--maxlen", "3", "--input", str(tmp_path / "d.json")], capsys)
    assert code == 1
    assert json.loads(out)["result"]["violations"]


def test_whyte_writes_forest(tmp_path, capsys):
    out = tmp_path / "forest.json"
    code, _, _ = run(["whyte", "--space", "tree4", "--radius", "6", "--d", "4", "--out", str(out)], capsys)
    assert code == 0
    obj = json.loads(out.read_text())
    check_schema(obj, "whyte")
    assert obj["result"]["checks"]["status"] == "PASS"


def test_byte_identical_reruns(capsys):
    argv = ["whyte", "--space", "tree4", "--radius", "5", "--relabel-seed", "3", "--seed", "9"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    argv = ["suite", "tree-isoperimetry", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    assert json.loads(a)["status"] == "PASS"


def test_dot_and_text_formats(capsys):
    code, out, _ = run(["space", "--space", "tree4", "--radius", "2", "--format", "dot"], capsys)
    assert code == 0 and out.count(" -- ") == 16
    code, out, _ = run(["asdim", "--space", "line", "--radius", "5", "--format", "text"], capsys)
    assert code == 0 and f"seed {DEFAULT_SEED}" in out
    code, _, err = run(["lamplighter", "--format", "dot", "--trials", "5"], capsys)
    assert code == 2 and "no DOT" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["lemma42", "--word", "abc"],
        ["embed", "--radius", "3", "--L", "1"],
        ["folner", "--space", "line", "--radius", "5", "--theta", "1"],
        ["paradox", "build", "--model", "f2xc3"],
        ["space", "--space", "nowhere", "--radius", "2"],
        ["harem", "--space", "tree4", "--radius", "3", "--d", "2"],
    ],
)
def test_precondition_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["space", "--colour", "red"])
    assert info.value.code == 2


def test_budget_env_override(monkeypatch, capsys):
    monkeypatch.setenv("CPTK_BUDGET_EXHAUSTIVE_SIZE", "3")
    code, out, _ = run(["folner", "--space", "tree4", "--radius", "3", "--theta", "2"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["verdict"] == "no witness within budget"


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "cptk", "expansion", "--space", "line", "--radius", "10", "--points", "0..4"],
        capture_output=True,
        text=True,
    )
    assert p.returncode == 0
    assert json.loads(p.stdout)["result"]["ratio"] == "7/5"
